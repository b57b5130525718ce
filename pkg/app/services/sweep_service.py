import itertools
from typing import Dict, List

import pandas as pd
import structlog
from joblib import Parallel, delayed

from app.config import settings
from app.config.constants import SWEEP_COLUMNS
from app.domain.errors import ConfigError, PlapError
from app.domain.schemas import SweepSpec
from app.infrastructure.storage.config_files import build_config, flat_pairs, parse_pairs
from app.services.experiment_service import ExperimentService
from app.services.report_service import ReportService

logger = structlog.get_logger()


def parse_sweep(text: str) -> SweepSpec:
    """Config lines plus `axis.<key> = v1; v2; ...`, `sweep.simulate` and `sweep.max_runs`."""
    pairs = parse_pairs(text)
    base, axes = {}, {}
    simulate, max_runs = True, settings.SWEEP_MAX_RUNS
    for key, value in pairs.items():
        if key.startswith("axis."):
            axes[key[len("axis."):]] = [v.strip() for v in value.split(";") if v.strip()]
        elif key == "sweep.simulate":
            simulate = value.strip().lower() in ("1", "true", "yes")
        elif key == "sweep.max_runs":
            max_runs = int(value)
        else:
            base[key] = value
    try:
        return SweepSpec(base=build_config(base), axes=axes, simulate=simulate, max_runs=max_runs)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Invalid sweep: {e}") from e


def expand(spec: SweepSpec) -> List[Dict[str, str]]:
    """Cartesian product of the axes in declaration order; no axes gives the base run alone."""
    keys = list(spec.axes)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(spec.axes[k] for k in keys))]


def evaluate_point(base: Dict[str, str], overrides: Dict[str, str], simulate: bool) -> dict:
    """One sweep row; failures are recorded in the row instead of raised."""
    row = dict(overrides)
    row.update({c: None for c in SWEEP_COLUMNS})
    try:
        exp = ExperimentService(build_config({**base, **overrides}))
        report = exp.condition_report()
        row["condition_verdict"] = report.satisfied
        bound = exp.try_bound()
        row["J0"] = bound.J0 if bound else exp.J0()
        row["Tstar_upper"] = bound.Tstar_upper if bound else None
        if simulate:
            trajectory = exp.trajectory()
            row.update(ReportService(exp).summary(trajectory, bound))
    except PlapError as e:
        logger.warning("Sweep point failed", overrides=overrides, error=str(e))
        row["error"] = f"{type(e).__name__}: {e}"
    return row


class SweepService:
    def __init__(self, spec: SweepSpec, workers: int = None):
        self.spec = spec
        self.workers = workers or settings.SWEEP_WORKERS

    def run(self) -> pd.DataFrame:
        points = expand(self.spec)
        base = flat_pairs(self.spec.base)
        logger.info("Sweep started", runs=len(points), workers=self.workers, simulate=self.spec.simulate)
        # joblib keeps submission order, so rows come back in product order
        rows = Parallel(n_jobs=min(self.workers, len(points)))(
            delayed(evaluate_point)(base, overrides, self.spec.simulate) for overrides in points
        )
        failed = sum(1 for r in rows if r["error"])
        logger.info("Sweep finished", runs=len(rows), failed=failed)
        columns = list(self.spec.axes) + SWEEP_COLUMNS
        return pd.DataFrame(rows, columns=columns)

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
import pandas as pd
import structlog

from app.config import settings
from app.config.constants import EVENT_COLUMNS
from app.conditions import check_condition, search_admissible
from app.domain.errors import ConfigError, NoBoundError
from app.domain.models import BlowupBound, ConditionReport, EigenResult, Field, Grid, Trajectory
from app.domain.schemas import U0_PATTERN, ConditionParams, ExperimentConfig
from app.infrastructure.storage import (
    config_hash,
    emit_config,
    read_field_csv,
    save_trajectory,
    write_field_csv,
    write_frame,
)
from app.numerics.eigen import first_eigenpair, normalize
from app.numerics.functionals import choose_M, eval_J
from app.numerics.grid import build_grid, field_from_function
from app.numerics.solver import run
from app.sources import needs_eigenvalue, parse_source
from app.sources.base import SourceTerm

logger = structlog.get_logger()

U0_ARG_PATTERN = re.compile(r"^c\s*=\s*([0-9.eE+\-]+)(?:\s*,\s*norm\s*=\s*(sup|lp))?$")


@lru_cache(maxsize=32)
def cached_eigenpair(dim: int, lengths: Tuple[float, ...], n: int, p: float) -> EigenResult:
    """One eigensolve per (domain, p) and process; sweeps hit this repeatedly."""
    return first_eigenpair(build_grid(dim, lengths, n), p)


@dataclass
class RunResult:
    run_dir: str
    trajectory: Trajectory
    report: ConditionReport
    bound: Optional[BlowupBound]


class ExperimentService:
    """Builds grid, source, initial data and condition parameters for one config."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.p = float(config.p)
        self.grid: Grid = build_grid(config.grid.dim, tuple(config.grid.L), config.grid.n)
        self._source: Optional[SourceTerm] = None
        self._report: Optional[ConditionReport] = None

    def eigenpair(self) -> EigenResult:
        return cached_eigenpair(self.grid.dim, self.grid.lengths, self.grid.n, self.p)

    @property
    def source(self) -> SourceTerm:
        if self._source is None:
            if needs_eigenvalue(self.config.f):
                self._source = parse_source(self.config.f, self.p, self.eigenpair().lam)
            else:
                self._source = parse_source(self.config.f)
        return self._source

    def initial_field(self) -> Field:
        kind, arg = U0_PATTERN.match(self.config.u0).groups()
        if kind == "file":
            field = read_field_csv(arg)
            if field.grid.shape != self.grid.shape or field.grid.lengths != self.grid.lengths:
                raise ConfigError(f"Initial field {arg} does not match the configured grid")
            return field
        m = U0_ARG_PATTERN.match(arg)
        if not m:
            raise ConfigError(f"Bad initial-data argument {arg!r}; expected c=<value>[, norm=sup|lp]")
        c = float(m.group(1))
        if c < 0:
            raise ConfigError("Initial data amplitude must be nonnegative")
        if kind == "sine":
            def sines(*coords):
                out = 1.0
                for x, L in zip(coords, self.grid.lengths):
                    out = out * np.sin(np.pi * x / L)
                return out
            return field_from_function(self.grid, sines).scaled(c)
        phi = self.eigenpair().phi
        if m.group(2) == "lp":
            phi = normalize(phi, self.p, "lp")
        return phi.scaled(c)

    def condition_report(self) -> ConditionReport:
        """Manual: check the configured (alpha, beta, gamma). Auto: search admissible values."""
        if self._report is not None:
            return self._report
        spec = self.config.condition
        if spec.mode == "auto":
            eig = self.eigenpair()
            self._report = search_admissible(self.source, self.p, eig.lam, spec.tag, eig.residual)
        else:
            lam, residual = 1.0, 0.0
            if spec.tag == "C" and (spec.beta or 0.0) > 0:
                eig = self.eigenpair()
                lam, residual = eig.lam, eig.residual
            params = ConditionParams(p=self.p, alpha=spec.alpha, beta=spec.beta or 0.0,
                                     gamma=spec.gamma or 0.0, lambda1p=lam, lambda_residual=residual)
            self._report = check_condition(self.source, params, spec.tag)
        return self._report

    @property
    def params(self) -> ConditionParams:
        return self.condition_report().params

    def J0(self) -> float:
        return eval_J(self.initial_field(), self.source, self.p, self.params.gamma)

    def bound(self) -> BlowupBound:
        return choose_M(self.initial_field(), self.source, self.p, self.params)

    def try_bound(self) -> Optional[BlowupBound]:
        try:
            return self.bound()
        except (NoBoundError, ConfigError) as e:
            logger.info("No blow-up bound for this configuration", reason=str(e))
            return None

    def run_dir(self) -> str:
        if self.config.output:
            return self.config.output
        return os.path.join(settings.PLAP_OUT, config_hash(self.config))

    def trajectory(self) -> Trajectory:
        return run(self.grid, self.source, self.p, self.initial_field(), self.config.solver)

    def simulate(self) -> RunResult:
        """Run the solver and write config, series, events, fields and the trajectory to the run directory."""
        from app.services.report_service import ReportService

        report = self.condition_report()
        bound = self.try_bound()
        trajectory = self.trajectory()
        run_dir = self.run_dir()
        os.makedirs(run_dir, exist_ok=True)

        with open(os.path.join(run_dir, "config.cfg"), "w") as fh:
            fh.write(emit_config(self.config))
        series = ReportService(self).series_frame(trajectory, bound)
        write_frame(series, os.path.join(run_dir, "run.csv"))
        events = pd.DataFrame([(e.t, e.tag) for e in trajectory.events], columns=EVENT_COLUMNS)
        write_frame(events, os.path.join(run_dir, "events.csv"))
        write_field_csv(trajectory.snapshots[0].field, os.path.join(run_dir, "u0.csv"))
        write_field_csv(trajectory.snapshots[-1].field, os.path.join(run_dir, "u_final.csv"))
        save_trajectory(trajectory, run_dir)

        logger.info("Simulation written", run_dir=run_dir, outcome=trajectory.outcome,
                    T_num=trajectory.T_num, condition=report.satisfied)
        return RunResult(run_dir=run_dir, trajectory=trajectory, report=report, bound=bound)

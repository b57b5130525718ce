import os
from typing import Optional

import numpy as np
import pandas as pd
import structlog

from app.config.constants import RUN_COLUMNS
from app.domain.models import BlowupBound, Trajectory
from app.infrastructure.storage import load_config, load_trajectory, write_frame
from app.numerics.functionals import energy_series, eval_concavity_series, min_H
from app.services.experiment_service import ExperimentService

logger = structlog.get_logger()

BOUND_COLUMNS = ["M", "sigma", "Tstar_upper", "J0", "L2_u0", "M_alt", "Tstar_upper_alt"]


class ReportService:
    """Post-processing of frozen trajectories into the per-run time series."""

    def __init__(self, experiment: ExperimentService):
        self.experiment = experiment

    @classmethod
    def from_run_dir(cls, run_dir: str) -> "ReportService":
        return cls(ExperimentService(load_config(os.path.join(run_dir, "config.cfg"))))

    def series_frame(self, trajectory: Trajectory, bound: Optional[BlowupBound] = None) -> pd.DataFrame:
        """t, supnorm, J, I, I', I'', H and the energy-identity residual per snapshot.

        I and H need M, so they are NaN when the run has no blow-up bound.
        """
        exp = self.experiment
        source, p, params = exp.source, exp.p, exp.params
        M = bound.M if bound is not None else np.nan
        records = eval_concavity_series(trajectory, source, p, params, M)
        energy = energy_series(trajectory, source, p, params.gamma)
        J0 = energy[0].J
        rows = []
        for snap, rec, en in zip(trajectory.snapshots, records, energy):
            rows.append((snap.t, snap.supnorm, en.J, rec.I, rec.Iprime, rec.Idoubleprime, rec.H,
                         en.J - J0 - en.cumulative_ut2))
        return pd.DataFrame(rows, columns=RUN_COLUMNS)

    def summary(self, trajectory: Trajectory, bound: Optional[BlowupBound]) -> dict:
        out = {
            "outcome": trajectory.outcome,
            "T_num": trajectory.T_num,
            "Tstar_upper": bound.Tstar_upper if bound else None,
            "J0": bound.J0 if bound else self.experiment.J0(),
            "min_H": None,
        }
        if bound is not None:
            out["min_H"] = min_H(eval_concavity_series(trajectory, self.experiment.source, self.experiment.p,
                                                       self.experiment.params, bound.M))
        return out

    @staticmethod
    def bound_frame(bound: BlowupBound) -> pd.DataFrame:
        return pd.DataFrame([[getattr(bound, c) for c in BOUND_COLUMNS]], columns=BOUND_COLUMNS)

    def regenerate(self, run_dir: str) -> pd.DataFrame:
        """Recompute run.csv from the stored trajectory."""
        trajectory = load_trajectory(run_dir)
        df = self.series_frame(trajectory, self.experiment.try_bound())
        write_frame(df, os.path.join(run_dir, "run.csv"))
        logger.info("Report regenerated", run_dir=run_dir, rows=len(df))
        return df

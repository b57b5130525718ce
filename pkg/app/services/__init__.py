"""
Experiment orchestration.

ExperimentService wires one config into grid, source, eigenpair, condition
parameters and solver runs; ReportService turns trajectories into series;
SweepService fans configs out over a worker pool.
"""

from .experiment_service import ExperimentService, RunResult, cached_eigenpair
from .report_service import ReportService
from .sweep_service import SweepService, expand, parse_sweep

__all__ = [
    "ExperimentService",
    "RunResult",
    "cached_eigenpair",
    "ReportService",
    "SweepService",
    "expand",
    "parse_sweep",
]

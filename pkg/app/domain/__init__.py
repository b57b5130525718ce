from .models import (
    Grid, Field, EigenResult, ConditionReport, HierarchyResult, GrowthResult, OsgoodResult,
    Snapshot, Event, Trajectory, EnergyRecord, ConcavityRecord, BlowupBound,
)
from .schemas import GridSpec, SolverConfig, ConditionParams, ConditionSpec, ExperimentConfig, SweepSpec
from .errors import PlapError, ConfigError, ConditionParamsError, NumericalError, ConvergenceError, NoBoundError

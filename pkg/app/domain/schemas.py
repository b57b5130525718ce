import re
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

U0_PATTERN = re.compile(r"^\s*(eigen|sine|file)\s*:\s*(.+?)\s*$")


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = 1
    L: List[float] = Field(default_factory=lambda: [1.0])
    n: int = 99

    @field_validator("L", mode="before")
    @classmethod
    def split_lengths(cls, v):
        if isinstance(v, (int, float)):
            return [float(v)]
        if isinstance(v, str):
            return [float(s) for s in v.replace("x", ",").split(",") if s.strip()]
        return v

    @model_validator(mode="after")
    def check_lengths(self):
        if self.dim not in (1, 2):
            raise ValueError(f"grid.dim must be 1 or 2, got {self.dim}")
        if len(self.L) == 1 and self.dim == 2:
            self.L = [self.L[0], self.L[0]]
        if len(self.L) != self.dim:
            raise ValueError(f"grid.L needs {self.dim} length(s), got {self.L}")
        return self


class SolverConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dt_init: float = 1e-6
    dt_min: float = 1e-18
    dt_max: float = 1e-2
    safety: float = 0.5
    U_blow: float = 1e6
    T_max: float = 1.0
    # records per unit change of log sup-norm
    sample_interval: float = 100.0
    scheme: Literal["explicit", "semi-implicit-p2"] = "explicit"
    decay_ratio: float = 1e-10
    reaction_fraction: float = 1.0
    max_steps: int = 50_000_000

    @model_validator(mode="after")
    def check_steps(self):
        if not (0 < self.dt_min < self.dt_init <= self.dt_max):
            raise ValueError("solver needs 0 < dt_min < dt_init <= dt_max")
        if not (0 < self.safety <= 1):
            raise ValueError("solver.safety must lie in (0, 1]")
        if self.U_blow <= 0 or self.T_max <= 0 or self.sample_interval <= 0:
            raise ValueError("solver.U_blow, solver.T_max and solver.sample_interval must be positive")
        if not (0 < self.decay_ratio < 1):
            raise ValueError("solver.decay_ratio must lie in (0, 1)")
        if not (0 < self.reaction_fraction <= 1):
            raise ValueError("solver.reaction_fraction must lie in (0, 1]")
        return self


class ConditionParams(BaseModel):
    """(p, alpha, beta, gamma, lambda_{1,p}) parametrizing (C_p) and relatives.

    `lambda_residual` is the eigensolver's relative residual; the beta bound is
    taken against lambda1p * (1 - lambda_residual).
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    p: float = Field(ge=2.0)
    alpha: float
    beta: float = Field(default=0.0, ge=0.0)
    gamma: float = Field(default=0.0, ge=0.0)
    lambda1p: float = Field(default=1.0, gt=0.0)
    lambda_residual: float = Field(default=0.0, ge=0.0)

    @property
    def epsilon(self) -> float:
        return self.alpha - self.p

    @property
    def lambda_conservative(self) -> float:
        return self.lambda1p * (1.0 - self.lambda_residual)

    def beta_bound(self) -> float:
        return self.epsilon * self.lambda_conservative / self.p

    @classmethod
    def with_max_beta(cls, p: float, alpha: float, gamma: float, lambda1p: float,
                      lambda_residual: float = 0.0) -> "ConditionParams":
        base = cls(p=p, alpha=alpha, gamma=gamma, lambda1p=lambda1p, lambda_residual=lambda_residual)
        return base.model_copy(update={"beta": max(0.0, base.beta_bound())})


class ConditionSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["auto", "manual"] = "auto"
    tag: Literal["A", "B", "C", "Cprime"] = "C"
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None

    @model_validator(mode="after")
    def check_manual(self):
        if self.mode == "manual" and self.alpha is None:
            raise ValueError("condition.alpha is required when condition.mode = manual")
        return self


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    grid: GridSpec = Field(default_factory=GridSpec)
    p: float = Field(default=2.0, ge=2.0)
    f: str = "powersum: 1*u^3"
    condition: ConditionSpec = Field(default_factory=ConditionSpec)
    u0: str = "sine: c=1"
    solver: SolverConfig = Field(default_factory=SolverConfig)
    output: Optional[str] = None
    seed: int = 0

    @field_validator("u0")
    @classmethod
    def check_u0(cls, v):
        if not U0_PATTERN.match(v):
            raise ValueError(f"u0 must look like 'eigen: c=1', 'sine: c=6' or 'file: path.csv', got {v!r}")
        return v.strip()

    @classmethod
    def config_keys(cls) -> List[str]:
        """All dotted keys a config file (or sweep axis) may set."""
        keys = []
        for name, info in cls.model_fields.items():
            sub = info.annotation
            if isinstance(sub, type) and issubclass(sub, BaseModel):
                keys.extend(f"{name}.{k}" for k in sub.model_fields)
            else:
                keys.append(name)
        return keys


class SweepSpec(BaseModel):
    """Base config plus axes; the cartesian product of axis values is run."""
    model_config = ConfigDict(extra="forbid")

    base: ExperimentConfig
    axes: Dict[str, List[str]] = Field(default_factory=dict)
    simulate: bool = True
    max_runs: int = 10_000

    @model_validator(mode="after")
    def check_axes(self):
        known = set(ExperimentConfig.config_keys())
        unknown = [k for k in self.axes if k not in known]
        if unknown:
            raise ValueError(f"Sweep axes refer to unknown config fields: {unknown}")
        size = 1
        for values in self.axes.values():
            if not values:
                raise ValueError("Sweep axes need at least one value")
            size *= len(values)
        if size > self.max_runs:
            raise ValueError(f"Sweep has {size} runs, above the cap of {self.max_runs}")
        return self

    @property
    def size(self) -> int:
        size = 1
        for values in self.axes.values():
            size *= len(values)
        return size

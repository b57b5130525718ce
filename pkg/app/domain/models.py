from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform 1D interval or 2D rectangle with homogeneous Dirichlet boundary.

    Nodes are indexed 0..n+1 per axis; 0 and n+1 are boundary nodes.
    `weights` covers all nodes (boundary included) with trapezoid weights.
    """
    dim: int
    lengths: Tuple[float, ...]
    n: int
    spacing: Tuple[float, ...]
    weights: np.ndarray = field(repr=False, compare=False)

    @property
    def h(self) -> float:
        return self.spacing[0]

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def measure(self) -> float:
        return float(np.prod(self.lengths))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axes(self) -> List[np.ndarray]:
        """Node coordinates (boundary included) along each axis."""
        return [np.linspace(0.0, L, self.n + 2) for L in self.lengths]

    def interior_coords(self) -> List[np.ndarray]:
        """Meshgrid ('ij') of interior node coordinates, one array per axis."""
        inner = [ax[1:-1] for ax in self.axes()]
        if self.dim == 1:
            return inner
        return list(np.meshgrid(*inner, indexing="ij"))

    def is_boundary(self, index: Tuple[int, ...]) -> bool:
        return any(i == 0 or i == self.n + 1 for i in index)


@dataclass(frozen=True)
class Field:
    """Values of u at the interior nodes of a grid; boundary values are 0."""
    grid: Grid
    values: np.ndarray
    blown_up: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError(f"Field shape {values.shape} does not match grid {self.grid.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def padded(self) -> np.ndarray:
        """Values on all nodes, boundary zeros included."""
        return np.pad(self.values, 1, mode="constant", constant_values=0.0)

    def at(self, index: Tuple[int, ...]) -> float:
        """Value at a full-grid node index (boundary nodes return exactly 0)."""
        if self.grid.is_boundary(index):
            return 0.0
        return float(self.values[tuple(i - 1 for i in index)])

    def with_values(self, values: np.ndarray, blown_up: bool = False) -> "Field":
        return Field(self.grid, values, blown_up=blown_up)

    def scaled(self, c: float) -> "Field":
        return Field(self.grid, c * self.values)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))


@dataclass(frozen=True)
class EigenResult:
    lam: float
    phi: Field
    residual: float
    iterations: int
    converged: bool = True
    normalization: str = "sup"


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    satisfied: str              # "yes" | "no" | "grid-only"
    residual_min: float
    worst_u: float
    certificate: str            # "exact-analytic" | "grid-sampled"
    u_range: Tuple[float, float]
    samples: int
    params: Optional[object] = None
    boundary_case: bool = False
    agrees_with_check: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.satisfied in ("yes", "grid-only")


@dataclass(frozen=True)
class HierarchyResult:
    reports: Dict[str, ConditionReport]
    chain_ok: bool

    def satisfiable(self, tag: str) -> bool:
        return self.reports[tag].passed


@dataclass(frozen=True)
class GrowthResult:
    m: float
    mu: float
    epsilon: float
    h3_at_m: float
    bp_epsilon: Optional[float] = None


@dataclass(frozen=True)
class OsgoodResult:
    divergent: bool
    estimate: Optional[float] = None
    method: str = "analytic"


@dataclass(frozen=True)
class Snapshot:
    t: float
    field: Field
    dt: float
    supnorm: float
    cum_ut2: float
    cum_u2: float


@dataclass(frozen=True)
class Event:
    t: float
    tag: str                    # "blowup" | "decayed" | "horizon" | "dt_underflow"


@dataclass
class Trajectory:
    """Time-indexed solver output. Single-writer while running, frozen after."""
    p: float
    snapshots: List[Snapshot] = field(default_factory=list)
    events: List[Event] = field(default_factory=list)
    outcome: str = "Running"    # BlownUp | Completed | Decayed | DtUnderflow
    T_num: Optional[float] = None
    T_num_low_confidence: bool = False
    superlinear_growth: bool = False
    clipped_mass: float = 0.0
    steps: int = 0
    frozen: bool = False

    def record(self, snapshot: Snapshot) -> None:
        if self.frozen:
            raise RuntimeError("Trajectory is frozen")
        if self.snapshots and snapshot.t <= self.snapshots[-1].t:
            raise ValueError("Snapshot timestamps must be strictly increasing")
        self.snapshots.append(snapshot)

    def terminate(self, t: float, tag: str, outcome: str) -> None:
        if self.frozen:
            raise RuntimeError("Trajectory is frozen")
        self.events.append(Event(t, tag))
        self.outcome = outcome
        self.frozen = True

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    @property
    def supnorms(self) -> np.ndarray:
        return np.array([s.supnorm for s in self.snapshots])


@dataclass(frozen=True)
class EnergyRecord:
    t: float
    gradE: float
    Fint: float
    J: float
    cumulative_ut2: float


@dataclass(frozen=True)
class ConcavityRecord:
    t: float
    I: float
    Iprime: float
    Idoubleprime: float
    H: float
    sigma: float


@dataclass(frozen=True)
class BlowupBound:
    M: float
    sigma: float
    Tstar_upper: float
    J0: float
    L2_u0: float
    # alpha/(alpha-p) variant of the prefactor, reported alongside the printed one
    M_alt: float
    Tstar_upper_alt: float

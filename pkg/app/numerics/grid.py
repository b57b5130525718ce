"""
Spatial domains, Dirichlet fields, trapezoid quadrature and norms.

Every integral over Omega is a trapezoid sum over all grid nodes. Boundary
nodes carry value 0 and weight h/2 (h^2/4 at 2D corners).
"""
from typing import Callable, Sequence, Union

import numpy as np
import structlog

from app.domain.errors import ConfigError, NumericalError
from app.domain.models import Field, Grid

logger = structlog.get_logger()


def build_grid(dim: int, lengths: Union[float, Sequence[float]], n: int) -> Grid:
    """Build a uniform grid with n interior nodes per axis and spacing L/(n+1)."""
    if dim not in (1, 2):
        raise ConfigError(f"Grid dimension must be 1 or 2, got {dim}")
    if np.isscalar(lengths):
        lengths = (float(lengths),) * dim
    lengths = tuple(float(L) for L in lengths)
    if len(lengths) != dim:
        raise ConfigError(f"Expected {dim} side length(s), got {lengths}")
    if any(not np.isfinite(L) or L <= 0 for L in lengths):
        raise ConfigError(f"Side lengths must be positive, got {lengths}")
    if int(n) != n or n < 3:
        raise ConfigError(f"Need at least 3 interior nodes per axis, got n={n}")
    n = int(n)

    spacing = tuple(L / (n + 1) for L in lengths)
    axis_weights = []
    for h in spacing:
        w = np.full(n + 2, h)
        w[0] = w[-1] = 0.5 * h
        axis_weights.append(w)
    weights = axis_weights[0] if dim == 1 else np.outer(axis_weights[0], axis_weights[1])
    weights.setflags(write=False)
    return Grid(dim=dim, lengths=lengths, n=n, spacing=spacing, weights=weights)


def field_from_function(grid: Grid, func: Callable[..., np.ndarray]) -> Field:
    """Sample func at the interior nodes (func takes one coordinate array per axis)."""
    values = np.asarray(func(*grid.interior_coords()), dtype=float)
    return Field(grid, np.broadcast_to(values, grid.shape).copy())


def zero_field(grid: Grid) -> Field:
    return Field(grid, np.zeros(grid.shape))


def constant_field(grid: Grid, c: float) -> Field:
    """Constant interior values; the Dirichlet boundary stays 0."""
    return Field(grid, np.full(grid.shape, float(c)))


def integrate_power(field: Field, k: float) -> float:
    """Trapezoid value of the integral of |u|^k over the domain."""
    if k <= 0:
        raise ConfigError(f"Power must be positive, got k={k}")
    values = np.abs(field.padded())
    return float(np.sum(field.grid.weights * values ** k))


def integrate_composed(field: Field, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """Trapezoid value of the integral of g(u); boundary nodes contribute g(0)."""
    with np.errstate(over="ignore", invalid="ignore"):
        gv = np.asarray(g(field.padded()), dtype=float)
    if not np.all(np.isfinite(gv)):
        raise NumericalError("Composed integrand produced non-finite values")
    return float(np.sum(field.grid.weights * gv))


def sup_norm(field: Field) -> float:
    if field.values.size == 0:
        return 0.0
    return float(np.max(np.abs(field.values)))

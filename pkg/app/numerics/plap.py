"""
Discrete p-Laplacian div(|grad u|^{p-2} grad u) in conservative flux form.

Faces sit between neighbouring nodes along each axis. On an x-face the
gradient magnitude combines the normal difference with the transverse
component averaged from the four neighbouring edge differences. Summation by
parts holds exactly:

    sum_i w_i v_i (Delta_p u)_i = - sum_faces vol * q_f(u) * d_f(v)
"""
from typing import List, Tuple

import numpy as np
import scipy.sparse as sps
import structlog

from app.domain.errors import ConfigError, NumericalError
from app.domain.models import Field, Grid

logger = structlog.get_logger()


def check_exponent(p: float) -> float:
    p = float(p)
    if not np.isfinite(p) or p < 2.0:
        raise ConfigError(f"p must be a finite real >= 2, got {p}")
    return p


def _require_finite(field: Field) -> None:
    if not field.is_finite():
        raise NumericalError("p-Laplacian input contains non-finite values")


def _normal_differences(P: np.ndarray, dim: int) -> List[np.ndarray]:
    """Unscaled differences across the faces of each axis (transverse index interior)."""
    if dim == 1:
        return [np.diff(P)]
    return [np.diff(P[:, 1:-1], axis=0), np.diff(P[1:-1, :], axis=1)]


def _face_weights(P: np.ndarray, grid: Grid, p: float) -> List[np.ndarray]:
    """|g_f|^{p-2} on every face; exactly 0 on faces with zero gradient."""
    diffs = _normal_differences(P, grid.dim)
    if grid.dim == 1:
        g2 = [(diffs[0] / grid.spacing[0]) ** 2]
    else:
        hx, hy = grid.spacing
        cy = P[:, 2:] - P[:, :-2]
        ty = (cy[1:, :] + cy[:-1, :]) / (4.0 * hy)
        cx = P[2:, :] - P[:-2, :]
        tx = (cx[:, 1:] + cx[:, :-1]) / (4.0 * hx)
        g2 = [(diffs[0] / hx) ** 2 + ty ** 2, (diffs[1] / hy) ** 2 + tx ** 2]
    # |g|^{p-2} = (|g|^2)^{(p-2)/2}; 0 ** positive == 0, so degenerate faces carry no flux
    return [m ** (0.5 * (p - 2.0)) for m in g2]


def laplacian(field: Field) -> Field:
    """Standard 3-point (1D) / 5-point (2D) Laplacian."""
    _require_finite(field)
    P = field.padded()
    grid = field.grid
    diffs = _normal_differences(P, grid.dim)
    out = np.diff(diffs[0], axis=0) / grid.spacing[0] ** 2
    if grid.dim == 2:
        out = out + np.diff(diffs[1], axis=1) / grid.spacing[1] ** 2
    return field.with_values(out)


def apply_plap(field: Field, p: float) -> Field:
    """Flux-form p-Laplacian; p = 2 is the standard Laplacian stencil exactly."""
    p = check_exponent(p)
    if p == 2.0:
        return laplacian(field)
    _require_finite(field)
    P = field.padded()
    grid = field.grid
    diffs = _normal_differences(P, grid.dim)
    weights = _face_weights(P, grid, p)
    with np.errstate(over="raise", invalid="raise"):
        try:
            out = np.diff(weights[0] * diffs[0], axis=0) / grid.spacing[0] ** 2
            if grid.dim == 2:
                out = out + np.diff(weights[1] * diffs[1], axis=1) / grid.spacing[1] ** 2
        except FloatingPointError as e:
            raise NumericalError(f"p-Laplacian overflow: {e}") from e
    return field.with_values(out)


def flux_pairing(u: Field, v: Field, p: float) -> float:
    """Discrete integral of |grad u|^{p-2} grad u . grad v as a face sum."""
    p = check_exponent(p)
    grid = u.grid
    Pu, Pv = u.padded(), v.padded()
    du = _normal_differences(Pu, grid.dim)
    dv = _normal_differences(Pv, grid.dim)
    weights = [np.ones_like(d) for d in du] if p == 2.0 else _face_weights(Pu, grid, p)
    total = 0.0
    for axis in range(grid.dim):
        h = grid.spacing[axis]
        total += np.sum(weights[axis] * (du[axis] / h) * (dv[axis] / h))
    return float(grid.cell_volume * total)


def gradient_energy(field: Field, p: float) -> float:
    """Discrete integral of |grad u|^p (each face pairs its normal component with |g_f|^{p-2})."""
    _require_finite(field)
    return flux_pairing(field, field, p)


def max_face_diffusivity(field: Field, p: float) -> float:
    """Largest |g_f|^{p-2} over faces with nonzero gradient (0 if there are none)."""
    p = check_exponent(p)
    P = field.padded()
    diffs = _normal_differences(P, field.grid.dim)
    weights = [np.ones_like(d) for d in diffs] if p == 2.0 else _face_weights(P, field.grid, p)
    best = 0.0
    for d, w in zip(diffs, weights):
        active = d != 0.0
        if np.any(active):
            best = max(best, float(np.max(w[active])))
    return best


def _difference_operators(grid: Grid) -> List[Tuple[sps.csr_matrix, float]]:
    n = grid.n
    d1 = (sps.eye(n + 1, n, k=0) - sps.eye(n + 1, n, k=-1)).tocsr()
    if grid.dim == 1:
        return [(d1, grid.spacing[0])]
    eye = sps.identity(n, format="csr")
    return [(sps.kron(d1, eye, format="csr"), grid.spacing[0]),
            (sps.kron(eye, d1, format="csr"), grid.spacing[1])]


def stiffness_matrix(grid: Grid, face_weights=None) -> sps.csc_matrix:
    """Positive definite K with (K u)_i = -(div(w grad u))_i on interior nodes.

    face_weights=None gives the standard (negated) Laplacian.
    """
    K = None
    for axis, (D, h) in enumerate(_difference_operators(grid)):
        if face_weights is None:
            block = (D.T @ D) / h ** 2
        else:
            w = np.ravel(face_weights[axis])
            block = (D.T @ sps.diags(w) @ D) / h ** 2
        K = block if K is None else K + block
    return sps.csc_matrix(K)


def weighted_stiffness(field: Field, p: float, floor: float) -> sps.csc_matrix:
    """Stiffness matrix with face weights max(|g_f|^{p-2}, floor * mean weight)."""
    p = check_exponent(p)
    if p == 2.0:
        return stiffness_matrix(field.grid)
    weights = _face_weights(field.padded(), field.grid, p)
    mean = np.mean(np.concatenate([np.ravel(w) for w in weights]))
    lower = floor * mean if mean > 0 else 1.0
    return stiffness_matrix(field.grid, [np.maximum(w, lower) for w in weights])

"""
First Dirichlet eigenpair (lambda_{1,p}, phi_{1,p}) of the discrete p-Laplacian.

p = 2: inverse power iteration on the sparse stiffness matrix.
p > 2: projected descent on the Rayleigh quotient. The search direction is the
eigen-residual preconditioned by the face-weighted stiffness matrix, steps are
chosen by Armijo backtracking, and iterates are clipped to be nonnegative and
renormalized. The p = 2 eigenfunction is the warm start.

Convergence: p = 2 stops on the relative eigen-residual; p > 2 stops once the
relative decrease of the quotient stays below tol for QUIET_STEPS accepted
steps. The eigen-residual is reported either way.
"""
from typing import Optional

import numpy as np
import scipy.sparse.linalg as spla
import structlog

from app.config import settings
from app.config.constants import PRECOND_FLOOR
from app.domain.errors import ConfigError, ConvergenceError
from app.domain.models import EigenResult, Field, Grid
from app.numerics.grid import integrate_power, sup_norm
from app.numerics.plap import apply_plap, check_exponent, gradient_energy, stiffness_matrix, weighted_stiffness

logger = structlog.get_logger()

ARMIJO_C = 1e-4
MAX_BACKTRACKS = 40
# relative slack absorbing round-off in R near convergence
ROUNDOFF_SLACK = 1e-13
QUIET_STEPS = 3


def analytic_eigenvalue_1d(p: float, L: float = 1.0) -> float:
    """Continuum lambda_{1,p} of (0, L): (p-1) (pi_p / L)^p, pi_p = 2 pi / (p sin(pi/p))."""
    pi_p = 2.0 * np.pi / (p * np.sin(np.pi / p))
    return (p - 1.0) * (pi_p / L) ** p


def rayleigh_quotient(field: Field, p: float) -> float:
    """Discrete Rayleigh quotient: int |grad w|^p / int |w|^p."""
    denom = integrate_power(field, p)
    if denom == 0.0:
        raise ConfigError("Rayleigh quotient of the zero field is undefined")
    return gradient_energy(field, p) / denom


def eigen_residual(phi: Field, lam: float, p: float) -> float:
    """sup |Delta_p phi + lam |phi|^{p-2} phi|, relative to lam * sup(phi)^{p-1}."""
    lap = apply_plap(phi, p).values
    v = phi.values
    r = lap + lam * np.abs(v) ** (p - 2.0) * v
    scale = lam * sup_norm(phi) ** (p - 1.0)
    return float(np.max(np.abs(r)) / scale)


def normalize(phi: Field, p: float, normalization: str) -> Field:
    if normalization == "sup":
        return phi.scaled(1.0 / sup_norm(phi))
    if normalization == "lp":
        # int phi^p = |Omega|
        return phi.scaled((phi.grid.measure / integrate_power(phi, p)) ** (1.0 / p))
    raise ConfigError(f"Unknown normalization {normalization!r}; use 'sup' or 'lp'")


def _positive_start(grid: Grid) -> Field:
    coords = grid.interior_coords()
    values = np.ones(grid.shape)
    for x, L in zip(coords, grid.lengths):
        values = values * np.sin(np.pi * x / L)
    return Field(grid, values)


def _inverse_power(grid: Grid, tol: float, max_iter: int):
    K = stiffness_matrix(grid)
    lu = spla.splu(K)
    x = _positive_start(grid).values.ravel()
    phi = None
    lam, residual = np.nan, np.inf
    for it in range(1, max_iter + 1):
        y = lu.solve(x)
        x = y / np.max(np.abs(y))
        phi = Field(grid, np.abs(x).reshape(grid.shape))
        lam = rayleigh_quotient(phi, 2.0)
        residual = eigen_residual(phi, lam, 2.0)
        if residual <= tol:
            return phi, lam, residual, it, True
    return phi, lam, residual, max_iter, False


def _projected_descent(start: Field, p: float, tol: float, max_iter: int):
    grid = start.grid
    u = normalize(start, p, "sup")
    lam = rayleigh_quotient(u, p)
    quiet = 0
    for it in range(1, max_iter + 1):
        v = u.values
        r = apply_plap(u, p).values + lam * np.abs(v) ** (p - 2.0) * v
        K = weighted_stiffness(u, p, PRECOND_FLOOR)
        s = spla.spsolve(K, r.ravel()).reshape(grid.shape)
        # grad R . s = -p * vol * (r . s) / int|u|^p
        slope = p * grid.cell_volume * float(np.sum(r * s)) / integrate_power(u, p)

        t = 1.0
        accepted = None
        for _ in range(MAX_BACKTRACKS):
            trial_vals = np.maximum(v + t * s, 0.0)
            if np.max(trial_vals) > 0.0:
                trial = normalize(Field(grid, trial_vals), p, "sup")
                trial_lam = rayleigh_quotient(trial, p)
                if trial_lam <= lam * (1.0 + ROUNDOFF_SLACK) - ARMIJO_C * t * slope:
                    accepted = (trial, trial_lam)
                    break
            t *= 0.5
        if accepted is None:
            # R cannot decrease beyond round-off along the descent direction
            logger.debug("Eigen line search exhausted", p=p, iteration=it, lam=lam)
            return u, lam, it, True

        decrease = (lam - accepted[1]) / lam
        u, lam = accepted
        quiet = quiet + 1 if decrease <= tol else 0
        if quiet >= QUIET_STEPS:
            return u, lam, it, True
    return u, lam, max_iter, False


def first_eigenpair(grid: Grid, p: float, tol: Optional[float] = None,
                    max_iter: Optional[int] = None, normalization: str = "sup") -> EigenResult:
    """Minimize the Rayleigh quotient; raise ConvergenceError (with the best iterate) on failure."""
    p = check_exponent(p)
    tol = settings.EIG_TOL if tol is None else tol
    max_iter = settings.EIG_MAX_ITER if max_iter is None else max_iter
    if tol <= 0:
        raise ConfigError(f"Eigen tolerance must be positive, got {tol}")
    if normalization not in ("sup", "lp"):
        raise ConfigError(f"Unknown normalization {normalization!r}; use 'sup' or 'lp'")

    logger.info("Eigensolve started", p=p, dim=grid.dim, n=grid.n, tol=tol)
    warm_tol = tol if p == 2.0 else 1e-6
    phi, lam, residual, iterations, converged = _inverse_power(grid, warm_tol, max_iter)
    if p != 2.0:
        phi, lam, more, converged = _projected_descent(phi, p, tol, max_iter)
        residual = eigen_residual(phi, lam, p)
        iterations += more

    result = EigenResult(
        lam=float(lam),
        phi=normalize(phi, p, normalization),
        residual=float(residual),
        iterations=int(iterations),
        converged=bool(converged),
        normalization=normalization,
    )
    if not converged:
        logger.error("Eigensolve did not converge", p=p, lam=result.lam, residual=result.residual,
                     iterations=result.iterations)
        raise ConvergenceError(
            f"Eigensolve for p={p} did not reach tol {tol:.1e} within {max_iter} iterations "
            f"(lambda {result.lam:.6g}, residual {result.residual:.3e})",
            result=result,
        )
    logger.info("Eigensolve converged", p=p, lam=result.lam, residual=result.residual,
                iterations=result.iterations)
    return result

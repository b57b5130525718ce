"""
Concavity-method functionals along a trajectory.

    J(t)  = -(1/p) int |grad u|^p + int F(u) - gamma |Omega|
    I(t)  = int_0^t int u^2 + M,   I' = int u^2,   I'' = 2 int (-|grad u|^p + u f(u))
    H(t)  = I'' I - (1 + sigma) I'^2,   sigma = sqrt(alpha/2) - 1

I'' always comes from the spatial formula, never from differencing I'.
"""
import math
from typing import List, Optional

import numpy as np
import structlog

from app.domain.errors import ConfigError, NoBoundError
from app.domain.models import BlowupBound, ConcavityRecord, EnergyRecord, Field, Snapshot, Trajectory
from app.domain.schemas import ConditionParams
from app.numerics.grid import integrate_composed, integrate_power
from app.numerics.plap import gradient_energy
from app.sources.base import SourceTerm

logger = structlog.get_logger()


def _require_nonnegative(field: Field) -> None:
    if np.any(field.values < 0):
        raise ConfigError("Functionals are defined for nonnegative fields only")


def eval_J(field: Field, source: SourceTerm, p: float, gamma: float) -> float:
    _require_nonnegative(field)
    return (-gradient_energy(field, p) / p
            + integrate_composed(field, source.F)
            - gamma * field.grid.measure)


def energy_record(snapshot: Snapshot, source: SourceTerm, p: float, gamma: float) -> EnergyRecord:
    _require_nonnegative(snapshot.field)
    grad = gradient_energy(snapshot.field, p)
    Fint = integrate_composed(snapshot.field, source.F)
    return EnergyRecord(
        t=snapshot.t,
        gradE=grad,
        Fint=Fint,
        J=-grad / p + Fint - gamma * snapshot.field.grid.measure,
        cumulative_ut2=snapshot.cum_ut2,
    )


def energy_series(trajectory: Trajectory, source: SourceTerm, p: float, gamma: float) -> List[EnergyRecord]:
    return [energy_record(s, source, p, gamma) for s in trajectory.snapshots]


def sigma_of(alpha: float) -> float:
    return math.sqrt(alpha / 2.0) - 1.0


def second_derivative_I(field: Field, source: SourceTerm, p: float) -> float:
    """I'' = 2 int (-|grad u|^p + u f(u))."""
    return 2.0 * (-gradient_energy(field, p) + integrate_composed(field, lambda s: s * source.f(s)))


def choose_M(u0: Field, source: SourceTerm, p: float, params: ConditionParams) -> BlowupBound:
    """M = (alpha/(alpha-2)) (1 + sqrt(alpha/2)) (int u0^2)^2 / (2 alpha J(0)), T* <= M / (sigma int u0^2).

    The alpha/(alpha-p) variant of the prefactor is carried as M_alt (equal for p = 2).
    """
    alpha = params.alpha
    if alpha <= 2.0:
        raise ConfigError(f"Concavity bound needs alpha > 2 (sigma > 0), got alpha={alpha}")
    J0 = eval_J(u0, source, p, params.gamma)
    if J0 <= 0.0:
        raise NoBoundError(f"J(0) = {J0:.6g} <= 0: no blow-up time bound", J0=J0)
    sigma = sigma_of(alpha)
    L2 = integrate_power(u0, 2)
    core = (1.0 + math.sqrt(alpha / 2.0)) * L2 ** 2 / (2.0 * alpha * J0)
    M = alpha / (alpha - 2.0) * core
    M_alt = alpha / (alpha - p) * core if alpha > p else math.inf
    bound = BlowupBound(
        M=M,
        sigma=sigma,
        Tstar_upper=M / (sigma * L2),
        J0=J0,
        L2_u0=L2,
        M_alt=M_alt,
        Tstar_upper_alt=M_alt / (sigma * L2),
    )
    logger.info("Blow-up bound computed", J0=J0, M=M, sigma=sigma, Tstar_upper=bound.Tstar_upper,
                Tstar_upper_alt=bound.Tstar_upper_alt)
    return bound


def concavity_envelope(t, M: float, sigma: float, L2_u0: float):
    """Lower envelope I(t) >= [M^-sigma - sigma int u0^2 t / M^(sigma+1)]^(-1/sigma); inf once the bracket vanishes."""
    t = np.asarray(t, dtype=float)
    bracket = M ** (-sigma) - sigma * L2_u0 * t / M ** (sigma + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(bracket > 0, np.abs(bracket) ** (-1.0 / sigma), np.inf)
    return out if out.ndim else float(out)


def concavity_lower_bound(J0: float, cumulative_ut2: float, alpha: float) -> float:
    """I'' >= 2 alpha (J(0) + int_0^t int u_t^2); alpha = p on the Cprime route."""
    return 2.0 * alpha * (J0 + cumulative_ut2)


def _check_times(trajectory: Trajectory) -> np.ndarray:
    times = trajectory.times
    if times.size == 0:
        raise ConfigError("Trajectory has no snapshots")
    if np.any(np.diff(times) <= 0):
        raise ConfigError("Snapshot timestamps must be strictly increasing")
    return times


def eval_concavity_series(trajectory: Trajectory, source: SourceTerm, p: float,
                          params: ConditionParams, M: float) -> List[ConcavityRecord]:
    times = _check_times(trajectory)
    sigma = sigma_of(params.alpha)
    Iprime = np.array([integrate_power(s.field, 2) for s in trajectory.snapshots])
    # the solver integrates int u^2 over every step, not just the stored ones
    I = M + np.array([s.cum_u2 for s in trajectory.snapshots])
    records = []
    for k, snap in enumerate(trajectory.snapshots):
        Idd = second_derivative_I(snap.field, source, p)
        records.append(ConcavityRecord(
            t=float(times[k]),
            I=float(I[k]),
            Iprime=float(Iprime[k]),
            Idoubleprime=Idd,
            H=Idd * float(I[k]) - (1.0 + sigma) * float(Iprime[k]) ** 2,
            sigma=sigma,
        ))
    return records


def energy_identity_residual(trajectory: Trajectory, source: SourceTerm, p: float,
                             gamma: float) -> np.ndarray:
    """J(t) - J(0) - int_0^t int u_t^2 per snapshot.

    For p = 2 this is an identity (expect ~0); for p > 2 it is the slack of
    an inequality (expect >= 0 up to discretization error).
    """
    _check_times(trajectory)
    records = energy_series(trajectory, source, p, gamma)
    J = np.array([r.J for r in records])
    cum = np.array([r.cumulative_ut2 for r in records])
    return J - J[0] - cum


def linear_source_J_upper_bound(field: Field, a: float, lambda1p: float, p: float, gamma: float) -> float:
    """For f = a u^{p-1}: J <= (a - lambda_{1,p})/p int u^p - gamma |Omega|, negative whenever a <= lambda_{1,p}."""
    return (a - lambda1p) / p * integrate_power(field, p) - gamma * field.grid.measure


def min_H(records: List[ConcavityRecord]) -> Optional[float]:
    return min(r.H for r in records) if records else None

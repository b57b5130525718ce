"""
Time integration of u_t = Delta_p u + f(u) with homogeneous Dirichlet data.

explicit           u + dt (Delta_p u + f(u)), negatives clipped to 0
semi-implicit-p2   (I + dt K) u_new = u + dt f(u), p = 2 only
"""
import math
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla
import structlog

from app.config.constants import EPS0
from app.domain.errors import ConfigError, NumericalError
from app.domain.models import Field, Grid, Snapshot, Trajectory
from app.domain.schemas import SolverConfig
from app.numerics.extrapolation import extrapolate_blowup_time
from app.numerics.grid import integrate_power, sup_norm
from app.numerics.plap import apply_plap, check_exponent, max_face_diffusivity, stiffness_matrix
from app.sources.base import SourceTerm

logger = structlog.get_logger()

# relative change of int u^2 that forces a snapshot
L2_RECORD_CHANGE = 0.01


def _advance(field: Field, source: SourceTerm, p: float, dt: float, scheme: str,
             stiffness: Optional[sps.csc_matrix] = None) -> Tuple[Field, float]:
    """One step; returns (new field, clipped negative mass)."""
    if dt < 0:
        raise ConfigError(f"Time step must be nonnegative, got {dt}")
    if dt == 0:
        return field, 0.0
    u = field.values
    try:
        with np.errstate(over="raise", invalid="raise"):
            reaction = source.f(u)
            if scheme == "semi-implicit-p2":
                if p != 2.0:
                    raise ConfigError("semi-implicit-p2 needs p = 2")
                K = stiffness if stiffness is not None else stiffness_matrix(field.grid)
                A = sps.identity(K.shape[0], format="csc") + dt * K
                new = spla.spsolve(A, (u + dt * reaction).ravel()).reshape(u.shape)
            else:
                new = u + dt * (apply_plap(field, p).values + reaction)
    except (FloatingPointError, NumericalError) as e:
        logger.warning("Step overflowed", error=str(e), dt=dt)
        return field.with_values(u, blown_up=True), 0.0
    if not np.all(np.isfinite(new)):
        return field.with_values(u, blown_up=True), 0.0

    negative = new < 0
    clipped = 0.0
    if np.any(negative):
        clipped = float(np.sum(field.grid.cell_volume * -new[negative]))
        new = np.where(negative, 0.0, new)
    return field.with_values(new), clipped


def step(field: Field, source: SourceTerm, p: float, dt: float, scheme: str = "explicit") -> Field:
    p = check_exponent(p)
    new, _ = _advance(field, source, p, dt, scheme)
    return new


def adaptive_dt(field: Field, source: SourceTerm, p: float, config: SolverConfig) -> float:
    """safety * min(diffusion CFL cap, reaction cap, dt_max).

    Diffusion cap h^2 / (2 dim (p-1) Dmax) over faces with nonzero gradient;
    reaction cap reaction_fraction * u_sup / (|f(u_sup)| + eps0). The
    semi-implicit scheme has no diffusion cap.
    """
    if not field.is_finite():
        raise NumericalError("adaptive_dt needs a finite field")
    grid = field.grid
    diffusion_cap = math.inf
    if config.scheme == "explicit":
        dmax = max_face_diffusivity(field, p)
        if dmax > 0:
            diffusion_cap = min(grid.spacing) ** 2 / (2.0 * grid.dim * (p - 1.0) * dmax)
    u_sup = sup_norm(field)
    reaction_cap = math.inf
    if u_sup > 0:
        reaction_cap = config.reaction_fraction * u_sup / (abs(float(source.f(np.asarray(u_sup)))) + EPS0)
    return config.safety * min(diffusion_cap, reaction_cap, config.dt_max)


def _growing_superlinearly(trajectory: Trajectory) -> bool:
    """Sup-norm increasing with an accelerating log growth rate over the last three snapshots."""
    if len(trajectory.snapshots) < 3:
        return False
    t = trajectory.times[-3:]
    s = trajectory.supnorms[-3:]
    if np.any(s <= 0) or not (s[0] < s[1] < s[2]):
        return False
    rates = np.diff(np.log(s)) / np.diff(t)
    return bool(rates[1] > rates[0])


def _blowup_exponent(source: SourceTerm) -> float:
    q_max = source.leading_power()
    return q_max - 1.0 if q_max is not None and q_max > 1.0 else 1.0


def run(grid: Grid, source: SourceTerm, p: float, u0: Field, config: SolverConfig) -> Trajectory:
    """Integrate until blow-up, decay, the horizon T_max or step underflow."""
    p = check_exponent(p)
    if u0.grid.shape != grid.shape or u0.grid.spacing != grid.spacing:
        raise ConfigError("Initial field does not live on the solver grid")
    if np.any(u0.values < 0) or not u0.is_finite():
        raise ConfigError("Initial data must be finite and nonnegative")
    sup0 = sup_norm(u0)
    if config.U_blow <= sup0:
        raise ConfigError(f"U_blow={config.U_blow} must exceed sup(u0)={sup0}")
    if config.scheme == "semi-implicit-p2" and p != 2.0:
        raise ConfigError("semi-implicit-p2 needs p = 2")

    stiffness = stiffness_matrix(grid) if config.scheme == "semi-implicit-p2" else None
    traj = Trajectory(p=p)
    u = u0
    t = 0.0
    L2 = integrate_power(u, 2)
    cum_ut2 = cum_u2 = 0.0
    traj.record(Snapshot(t=0.0, field=u, dt=0.0, supnorm=sup0, cum_ut2=0.0, cum_u2=0.0))
    last_sup, last_L2 = sup0, L2
    logger.info("Run started", p=p, dim=grid.dim, n=grid.n, scheme=config.scheme, sup0=sup0,
                source=source.describe(), T_max=config.T_max, U_blow=config.U_blow)

    tag = outcome = None
    while tag is None:
        if traj.steps >= config.max_steps:
            logger.warning("Step budget exhausted", steps=traj.steps, t=t)
            tag, outcome = "horizon", "Completed"
            break
        dt = adaptive_dt(u, source, p, config)
        if traj.steps == 0:
            dt = min(dt, config.dt_init)
        if dt < config.dt_min:
            tag, outcome = "dt_underflow", "DtUnderflow"
            traj.superlinear_growth = _growing_superlinearly(traj)
            break
        final = t + dt >= config.T_max
        if final:
            dt = config.T_max - t

        new, clipped = _advance(u, source, p, dt, config.scheme, stiffness)
        if new.blown_up:
            tag, outcome = "blowup", "BlownUp"
            break
        traj.clipped_mass += clipped
        du = new.values - u.values
        new_L2 = integrate_power(new, 2)
        cum_ut2 += float(np.sum(grid.cell_volume * du ** 2)) / dt
        cum_u2 += 0.5 * dt * (L2 + new_L2)
        t = config.T_max if final else t + dt
        traj.steps += 1
        u, L2 = new, new_L2
        sup = sup_norm(u)

        if sup >= config.U_blow:
            tag, outcome = "blowup", "BlownUp"
        elif sup0 > 0 and sup <= config.decay_ratio * sup0:
            tag, outcome = "decayed", "Decayed"
        elif final:
            tag, outcome = "horizon", "Completed"

        log_change = abs(math.log(sup / last_sup)) if sup > 0 and last_sup > 0 else 0.0
        l2_change = abs(L2 - last_L2) / last_L2 if last_L2 > 0 else 0.0
        if tag is not None or log_change >= 1.0 / config.sample_interval or l2_change >= L2_RECORD_CHANGE:
            traj.record(Snapshot(t=t, field=u, dt=dt, supnorm=sup, cum_ut2=cum_ut2, cum_u2=cum_u2))
            last_sup, last_L2 = sup, L2

    if outcome == "BlownUp":
        T, low = extrapolate_blowup_time(traj.times, traj.supnorms, _blowup_exponent(source))
        traj.T_num, traj.T_num_low_confidence = T, low
    if traj.clipped_mass > 0:
        logger.info("Negative values clipped", clipped_mass=traj.clipped_mass, steps=traj.steps)
    traj.terminate(t, tag, outcome)
    logger.info("Run finished", outcome=outcome, stop_event=tag, t=t, steps=traj.steps,
                T_num=traj.T_num, low_confidence=traj.T_num_low_confidence,
                superlinear_growth=traj.superlinear_growth, snapshots=len(traj.snapshots))
    return traj

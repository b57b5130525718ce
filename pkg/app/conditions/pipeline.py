"""
Condition checks: residual sampling on a log grid, symbolic certificates for
power families, the monotone characterization, and admissible-parameter search.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
import structlog
from scipy import optimize

from app.config.constants import EPSILON_GRID, GAMMA_GRID, MIN_U_SAMPLES, RESIDUAL_TOL, U_RANGE, U_SAMPLES
from app.conditions.registry import (
    is_boundary_case,
    monotone_derivative_coefficients,
    monotone_values,
    residual_coefficients,
    residual_values,
    sign_verdict,
    validate_params,
)
from app.domain.errors import ConfigError
from app.domain.models import ConditionReport, HierarchyResult
from app.domain.schemas import ConditionParams
from app.sources.base import SourceTerm

logger = structlog.get_logger()


@dataclass(frozen=True)
class SourceSamples:
    u: np.ndarray
    f: np.ndarray
    F: np.ndarray
    u_range: Tuple[float, float]

    @property
    def size(self) -> int:
        return int(self.u.size)


def sample_source(source: SourceTerm, u_range: Tuple[float, float] = U_RANGE,
                  samples: int = U_SAMPLES) -> SourceSamples:
    u_min, u_max = (float(v) for v in u_range)
    if not (0.0 < u_min < u_max < np.inf):
        raise ConfigError(f"u_range must satisfy 0 < u_min < u_max < inf, got {u_range}")
    if samples < MIN_U_SAMPLES:
        raise ConfigError(f"Need at least {MIN_U_SAMPLES} samples, got {samples}")
    u = np.logspace(np.log10(u_min), np.log10(u_max), int(samples))
    return SourceSamples(u=u, f=source.eval_f(u), F=source.eval_F(u), u_range=(u_min, u_max))


def infer_tag(params: ConditionParams) -> str:
    if params.epsilon == 0.0:
        return "Cprime"
    if params.beta > 0.0:
        return "C"
    return "B" if params.gamma > 0.0 else "A"


def _refine_minimum(source: SourceTerm, params: ConditionParams, s: SourceSamples, k: int):
    """Polish the sampled minimum of r/scale inside its neighbouring log cell."""
    lo = np.log(s.u[max(k - 1, 0)])
    hi = np.log(s.u[min(k + 1, s.size - 1)])
    if hi <= lo:
        return None

    def relative(log_u):
        u = np.array([np.exp(log_u)])
        r, scale = residual_values(u, source.eval_f(u), source.eval_F(u), params)
        return float(r[0] / scale[0]) if scale[0] > 0 else 0.0

    res = optimize.minimize_scalar(relative, bounds=(lo, hi), method="bounded")
    return float(np.exp(res.x)), float(res.fun)


def _evaluate_residual(source: SourceTerm, s: SourceSamples, params: ConditionParams, tag: str) -> ConditionReport:
    r, scale = residual_values(s.u, s.f, s.F, params)
    k = int(np.argmin(r))
    residual_min, worst_u = float(r[k]), float(s.u[k])
    grid_ok = bool(np.all(r >= -RESIDUAL_TOL * scale))

    coefficients = residual_coefficients(source, params)
    exact = sign_verdict(coefficients) if coefficients is not None else None
    if exact is not None:
        satisfied, certificate = exact, "exact-analytic"
    else:
        certificate = "grid-sampled"
        if grid_ok:
            rel = np.divide(r, scale, out=np.zeros_like(r), where=scale > 0)
            polished = _refine_minimum(source, params, s, int(np.argmin(rel)))
            if polished is not None and polished[1] < -RESIDUAL_TOL:
                grid_ok = False
                worst_u = polished[0]
        satisfied = "grid-only" if grid_ok else "no"

    return ConditionReport(
        condition=tag,
        satisfied=satisfied,
        residual_min=residual_min,
        worst_u=worst_u,
        certificate=certificate,
        u_range=s.u_range,
        samples=s.size,
        params=params,
        boundary_case=is_boundary_case(params, tag),
    )


def check_condition(source: SourceTerm, params: ConditionParams, tag: str = "C",
                    u_range: Tuple[float, float] = U_RANGE, samples: int = U_SAMPLES) -> ConditionReport:
    """Verdict on one condition for fixed (alpha, beta, gamma); invalid parameters raise before sampling."""
    validate_params(params, tag)
    report = _evaluate_residual(source, sample_source(source, u_range, samples), params, tag)
    logger.info("Condition checked", condition=tag, source=source.describe(), satisfied=report.satisfied,
                certificate=report.certificate, alpha=params.alpha, beta=params.beta, gamma=params.gamma,
                residual_min=report.residual_min, boundary_case=report.boundary_case)
    return report


def monotone_characterization(source: SourceTerm, params: ConditionParams,
                              u_range: Tuple[float, float] = U_RANGE, samples: int = U_SAMPLES) -> ConditionReport:
    """Check G(u) = F/u^alpha - (gamma/alpha) u^-alpha - (beta/eps) u^-eps is nondecreasing.

    The report carries whether the verdict agrees with check_condition on the same inputs.
    """
    if params.epsilon <= 0.0:
        raise ConfigError("Monotone characterization needs eps = alpha - p > 0")
    s = sample_source(source, u_range, samples)
    G, magnitude = monotone_values(s.u, s.F, params)
    dG = np.diff(G)
    tol = RESIDUAL_TOL * np.maximum(magnitude[1:], magnitude[:-1])
    grid_ok = bool(np.all(dG >= -tol))
    k = int(np.argmin(dG))

    coefficients = monotone_derivative_coefficients(source, params)
    exact = sign_verdict(coefficients) if coefficients is not None else None
    if exact is not None:
        satisfied, certificate = exact, "exact-analytic"
    else:
        satisfied, certificate = ("grid-only" if grid_ok else "no"), "grid-sampled"

    tag = infer_tag(params)
    direct = _evaluate_residual(source, s, params, tag)
    agrees = direct.passed == (satisfied != "no")
    if not agrees:
        logger.warning("Monotone characterization disagrees with direct check", source=source.describe(),
                       monotone=satisfied, direct=direct.satisfied, alpha=params.alpha, beta=params.beta,
                       gamma=params.gamma)
    return ConditionReport(
        condition=f"{tag}-monotone",
        satisfied=satisfied,
        residual_min=float(dG[k]),
        worst_u=float(s.u[k + 1]),
        certificate=certificate,
        u_range=s.u_range,
        samples=s.size,
        params=params,
        boundary_case=is_boundary_case(params, tag),
        agrees_with_check=agrees,
    )


def _candidates(tag: str, p: float, lambda1p: float, lambda_residual: float) -> Iterable[ConditionParams]:
    # smallest gamma first, then smallest eps
    if tag == "A":
        for eps in EPSILON_GRID:
            yield ConditionParams(p=p, alpha=p + eps, lambda1p=lambda1p, lambda_residual=lambda_residual)
    elif tag == "Cprime":
        for gamma in GAMMA_GRID:
            if gamma > 0:
                yield ConditionParams(p=p, alpha=p, gamma=gamma, lambda1p=lambda1p, lambda_residual=lambda_residual)
    else:
        for gamma in GAMMA_GRID:
            if tag == "B" and gamma == 0:
                continue
            for eps in EPSILON_GRID:
                if tag == "B":
                    yield ConditionParams(p=p, alpha=p + eps, gamma=gamma, lambda1p=lambda1p,
                                          lambda_residual=lambda_residual)
                else:
                    yield ConditionParams.with_max_beta(p, p + eps, gamma, lambda1p, lambda_residual)


def search_admissible(source: SourceTerm, p: float, lambda1p: float, tag: str = "C",
                      lambda_residual: float = 0.0, u_range: Tuple[float, float] = U_RANGE,
                      samples: int = U_SAMPLES, sampled: Optional[SourceSamples] = None) -> ConditionReport:
    """First (alpha, beta, gamma) on the search grid for which `tag` holds; the least violating one otherwise."""
    s = sampled if sampled is not None else sample_source(source, u_range, samples)
    best = None
    for params in _candidates(tag, p, lambda1p, lambda_residual):
        validate_params(params, tag)
        report = _evaluate_residual(source, s, params, tag)
        if report.passed:
            logger.info("Admissible parameters found", condition=tag, source=source.describe(),
                        alpha=params.alpha, beta=params.beta, gamma=params.gamma,
                        satisfied=report.satisfied, certificate=report.certificate)
            return report
        if best is None or report.residual_min > best.residual_min:
            best = report
    logger.info("No admissible parameters on the search grid", condition=tag, source=source.describe())
    return best


def hierarchy_check(source: SourceTerm, p: float, lambda1p: float, u_range: Tuple[float, float] = U_RANGE,
                    samples: int = U_SAMPLES, lambda_residual: float = 0.0) -> HierarchyResult:
    """Satisfiability of A, B and C over the search grids, and whether A => B => C holds."""
    s = sample_source(source, u_range, samples)
    reports: Dict[str, ConditionReport] = {
        tag: search_admissible(source, p, lambda1p, tag, lambda_residual, sampled=s) for tag in ("A", "B", "C")
    }
    a_ok, b_ok, c_ok = (reports[t].passed for t in ("A", "B", "C"))
    chain_ok = (not a_ok or b_ok) and (not b_ok or c_ok)
    if not chain_ok:
        logger.warning("Condition hierarchy violated", source=source.describe(), A=a_ok, B=b_ok, C=c_ok)
    return HierarchyResult(reports=reports, chain_ok=chain_ok)

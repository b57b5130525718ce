from typing import Optional, Tuple

import numpy as np
import structlog

from app.config.constants import U_RANGE, U_SAMPLES
from app.conditions.pipeline import sample_source
from app.conditions.registry import monotone_values
from app.domain.errors import ConfigError
from app.domain.models import GrowthResult
from app.domain.schemas import ConditionParams
from app.sources.base import SourceTerm

logger = structlog.get_logger()


def bp_equivalent_exponent(epsilon: float, lambda1p: float, lam: float) -> float:
    """eps_2 = eps - eps lambda_{1,p} / lam, the B exponent implied by C when f >= lam u^{p-1}."""
    if not lam > lambda1p:
        raise ConfigError(f"Need lam > lambda_1p, got lam={lam}, lambda_1p={lambda1p}")
    return epsilon - epsilon * lambda1p / lam


def extract_growth(source: SourceTerm, params: ConditionParams, lambda_lower: float,
                   u_range: Tuple[float, float] = U_RANGE, samples: int = U_SAMPLES) -> Optional[GrowthResult]:
    """Superlinear lower envelope f(u) >= mu u^{p-1+eps} on [m, u_max].

    m is the smallest sampled u > 1 where G (the monotone characterization
    function) is positive; mu is the largest constant valid on the samples
    from m on. Returns None when f >= lambda_lower u^{p-1} with
    lambda_lower > lambda_{1,p} fails on the samples.
    """
    eps = params.epsilon
    if eps <= 0:
        raise ConfigError("Growth extraction needs eps = alpha - p > 0")
    if not lambda_lower > params.lambda1p:
        logger.info("Growth extraction not applicable", reason="lambda_lower <= lambda_1p",
                    lambda_lower=lambda_lower, lambda1p=params.lambda1p)
        return None

    s = sample_source(source, u_range, samples)
    if np.any(s.f < lambda_lower * s.u ** (params.p - 1.0)):
        logger.info("Growth extraction not applicable", reason="f below lambda_lower u^(p-1)",
                    source=source.describe(), lambda_lower=lambda_lower)
        return None

    G, _ = monotone_values(s.u, s.F, params)
    above = np.nonzero((s.u > 1.0) & (G > 0.0))[0]
    if above.size == 0:
        logger.info("Growth extraction not applicable", reason="G never positive past u=1",
                    source=source.describe())
        return None
    k = int(above[0])
    tail = slice(k, None)
    mu = float(np.min(s.f[tail] / s.u[tail] ** (params.p - 1.0 + eps)))
    return GrowthResult(
        m=float(s.u[k]),
        mu=mu,
        epsilon=eps,
        h3_at_m=float(G[k]),
        bp_epsilon=bp_equivalent_exponent(eps, params.lambda1p, lambda_lower),
    )

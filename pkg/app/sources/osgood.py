import numpy as np
import structlog
from scipy import integrate

from app.config.constants import OSGOOD_HORIZON, OSGOOD_TAIL_TOL
from app.domain.errors import ConfigError
from app.domain.models import OsgoodResult
from app.sources.base import SourceTerm

logger = structlog.get_logger()


def _reciprocal(source: SourceTerm):
    return lambda s: 1.0 / float(source.f(np.asarray(s)))


def osgood_test(source: SourceTerm, m: float, horizon: float = OSGOOD_HORIZON) -> OsgoodResult:
    """Decide whether int_m^inf ds / f(s) diverges.

    Power families are decided by the leading exponent (q > 1 converges);
    anything else doubles the upper limit until the increment drops below
    the tail tolerance or the limit passes the horizon.
    """
    if not (m > 0):
        raise ConfigError(f"Osgood test needs m > 0, got {m}")
    if not float(source.eval_f(m)) > 0:
        raise ConfigError(f"Osgood test needs f(m) > 0 at m={m}")

    terms = source.power_terms()
    if terms is not None:
        q_max = max(q for _, q in terms)
        if q_max <= 1.0:
            return OsgoodResult(divergent=True, estimate=None, method="analytic")
        if len(terms) == 1:
            a, q = terms[0]
            estimate = m ** (1.0 - q) / (a * (q - 1.0))
        else:
            estimate, _ = integrate.quad(_reciprocal(source), m, np.inf, epsabs=0.0, epsrel=1e-12, limit=200)
        return OsgoodResult(divergent=False, estimate=float(estimate), method="analytic")

    g = _reciprocal(source)
    upper = 2.0 * m
    total, _ = integrate.quad(g, m, upper, limit=200)
    while upper <= horizon:
        increment, _ = integrate.quad(g, upper, 2.0 * upper, limit=200)
        total += increment
        upper *= 2.0
        if increment < OSGOOD_TAIL_TOL:
            return OsgoodResult(divergent=False, estimate=float(total), method="quadrature")
    logger.info("Osgood integral still growing at horizon", m=m, horizon=horizon, partial=total)
    return OsgoodResult(divergent=True, estimate=None, method="quadrature")

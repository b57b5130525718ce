from typing import Tuple

import numpy as np
import structlog

from app.config.constants import (
    EXTRAPOLATION_MAX_REL_RESIDUAL,
    EXTRAPOLATION_MIN_GROWTH,
    EXTRAPOLATION_MIN_SAMPLES,
)
from app.domain.errors import ConfigError
from app.domain.models import Trajectory

logger = structlog.get_logger()


def extrapolate_blowup_time(times, sups, exponent: float = 1.0) -> Tuple[float, bool]:
    """Fit sup^-k ~ C (T - t) over the last decade of growth.

    Returns (T, low_confidence). Falls back to the last time when the tail is
    too short, does not grow, or fits poorly.
    """
    t = np.asarray(times, dtype=float)
    s = np.asarray(sups, dtype=float)
    if t.size == 0:
        raise ConfigError("Cannot extrapolate an empty series")
    t_last = float(t[-1])
    if exponent <= 0:
        raise ConfigError(f"Extrapolation exponent must be positive, got {exponent}")

    # last contiguous increasing run with sup >= sup_last / 10
    start = t.size - 1
    while start > 0 and s[start - 1] >= s[-1] / 10.0 and s[start - 1] < s[start]:
        start -= 1
    tw, sw = t[start:], s[start:]

    if tw.size < EXTRAPOLATION_MIN_SAMPLES or sw[0] <= 0 or sw[-1] / sw[0] < EXTRAPOLATION_MIN_GROWTH:
        logger.info("Blow-up extrapolation fell back", reason="short or flat tail", samples=int(tw.size))
        return t_last, True

    y = sw ** (-exponent)
    slope, intercept = np.polyfit(tw, y, 1)
    C = -slope
    if C <= 0:
        return t_last, True
    T = intercept / C
    fit = intercept + slope * tw
    rel = float(np.max(np.abs(fit - y)) / np.max(np.abs(y)))
    if T < t_last or rel > EXTRAPOLATION_MAX_REL_RESIDUAL:
        logger.info("Blow-up extrapolation fell back", reason="poor fit", T=float(T), rel_residual=rel)
        return t_last, True
    return float(T), False


def extrapolate_Tnum(trajectory: Trajectory, exponent: float = 1.0) -> float:
    if trajectory.outcome not in ("Running", "BlownUp"):
        raise ConfigError(f"Extrapolation needs a blow-up trajectory, outcome is {trajectory.outcome}")
    T, _ = extrapolate_blowup_time(trajectory.times, trajectory.supnorms, exponent)
    return T

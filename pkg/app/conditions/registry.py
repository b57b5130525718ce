"""
Blow-up conditions on the nonlinearity, as residuals that must stay nonnegative:

    A       alpha F(u) <= u f(u)                      alpha = p + eps
    B       alpha F(u) <= u f(u) + gamma              gamma > 0
    C       alpha F(u) <= u f(u) + beta u^p + gamma   0 <= beta <= eps lambda_{1,p} / p
    Cprime  p F(u)     <= u f(u) + gamma              p > 2, gamma > 0

For power families every residual is a finite sum of powers of u, so its sign
can often be read off the merged coefficients.
"""
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.config.constants import COEFF_TIE_TOL
from app.domain.errors import ConditionParamsError
from app.domain.schemas import ConditionParams
from app.sources.base import SourceTerm

TAGS = ("A", "B", "C", "Cprime")

Coefficients = List[Tuple[float, float]]


def validate_params(params: ConditionParams, tag: str) -> None:
    if tag not in TAGS:
        raise ConditionParamsError(f"Unknown condition {tag!r}; use one of {', '.join(TAGS)}")
    eps = params.epsilon
    if tag == "Cprime":
        if params.p <= 2.0:
            raise ConditionParamsError("Cprime needs p > 2")
        if eps != 0.0:
            raise ConditionParamsError(f"Cprime needs alpha = p, got alpha={params.alpha}, p={params.p}")
        if params.beta != 0.0 or params.gamma <= 0.0:
            raise ConditionParamsError("Cprime needs beta = 0 and gamma > 0")
        return
    if eps <= 0.0:
        raise ConditionParamsError(f"{tag} needs alpha > p, got alpha={params.alpha}, p={params.p}")
    if tag == "A" and (params.beta != 0.0 or params.gamma != 0.0):
        raise ConditionParamsError("A needs beta = gamma = 0")
    if tag == "B" and (params.beta != 0.0 or params.gamma <= 0.0):
        raise ConditionParamsError("B needs beta = 0 and gamma > 0")
    if tag == "C":
        bound = params.beta_bound()
        if params.beta > bound * (1.0 + 1e-12):
            raise ConditionParamsError(
                f"beta={params.beta} exceeds (alpha-p) lambda / p = {bound} "
                f"(lambda={params.lambda1p}, residual={params.lambda_residual})"
            )


def is_boundary_case(params: ConditionParams, tag: str) -> bool:
    """beta sits on its admissible bound (closed inequality accepted, flagged)."""
    if tag != "C" or params.beta == 0.0:
        return False
    return params.beta >= params.beta_bound() * (1.0 - COEFF_TIE_TOL)


def residual_values(u: np.ndarray, f: np.ndarray, F: np.ndarray,
                    params: ConditionParams) -> Tuple[np.ndarray, np.ndarray]:
    """r(u) = u f + beta u^p + gamma - alpha F, and the pointwise magnitude used as its scale."""
    up = u ** params.p
    r = u * f + params.beta * up + params.gamma - params.alpha * F
    scale = np.abs(u * f) + params.beta * up + params.gamma + abs(params.alpha) * np.abs(F)
    return r, scale


def monotone_values(u: np.ndarray, F: np.ndarray, params: ConditionParams) -> Tuple[np.ndarray, np.ndarray]:
    """G(u) = F / u^alpha - (gamma/alpha) u^-alpha - (beta/eps) u^-eps, with its term magnitudes."""
    eps = params.epsilon
    lead = F / u ** params.alpha
    g_term = (params.gamma / params.alpha) * u ** (-params.alpha)
    b_term = (params.beta / eps) * u ** (-eps)
    return lead - g_term - b_term, np.abs(lead) + g_term + b_term


def _merge(pieces: List[Tuple[float, float, float]]) -> Coefficients:
    """Sum (exponent, coefficient, magnitude) pieces by exponent; near-cancellations become 0."""
    merged: Dict[float, List[float]] = {}
    for e, c, mag in pieces:
        key = round(e, 12)
        acc = merged.setdefault(key, [0.0, 0.0])
        acc[0] += c
        acc[1] += mag
    out = []
    for e in sorted(merged):
        c, mag = merged[e]
        out.append((e, 0.0 if abs(c) <= COEFF_TIE_TOL * mag else c))
    return out


def residual_coefficients(source: SourceTerm, params: ConditionParams) -> Optional[Coefficients]:
    """Merged (exponent, coefficient) pairs of r(u), or None for non-power sources."""
    terms = source.power_terms()
    if terms is None:
        return None
    pieces = []
    for a, q in terms:
        e = q + 1.0
        pieces.append((e, a - params.alpha * a / e, a + abs(params.alpha) * a / e))
    if params.beta:
        pieces.append((params.p, params.beta, params.beta))
    if params.gamma:
        pieces.append((0.0, params.gamma, params.gamma))
    return _merge(pieces)


def monotone_derivative_coefficients(source: SourceTerm, params: ConditionParams) -> Optional[Coefficients]:
    """Merged (exponent, coefficient) pairs of G'(u), from the power expansion of G."""
    terms = source.power_terms()
    if terms is None:
        return None
    eps = params.epsilon
    g_terms = [(q + 1.0 - params.alpha, a / (q + 1.0)) for a, q in terms]
    if params.gamma:
        g_terms.append((-params.alpha, -params.gamma / params.alpha))
    if params.beta:
        g_terms.append((-eps, -params.beta / eps))
    return _merge([(e - 1.0, c * e, abs(c * e)) for e, c in g_terms])


def sign_verdict(coefficients: Coefficients) -> Optional[str]:
    """'yes' if sum c u^e >= 0 on (0, inf) by inspection, 'no' if it goes negative at an end, None if mixed."""
    nonzero = [(e, c) for e, c in coefficients if c != 0.0]
    if all(c > 0.0 for _, c in nonzero):
        return "yes"
    if nonzero[-1][1] < 0.0 or nonzero[0][1] < 0.0:
        return "no"
    return None

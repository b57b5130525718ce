from typing import List, Sequence, Tuple

import numpy as np

from app.domain.errors import ConfigError
from app.sources.base import SourceTerm


class PowerSum(SourceTerm):
    """f(u) = sum_j a_j u^{q_j} with a_j > 0, q_j >= 1; F in closed form."""

    def __init__(self, terms: Sequence[Tuple[float, float]]):
        terms = [(float(a), float(q)) for a, q in terms]
        if not terms:
            raise ConfigError("PowerSum needs at least one term")
        for a, q in terms:
            if not (np.isfinite(a) and a > 0):
                raise ConfigError(f"PowerSum coefficients must be positive, got {a}")
            if not (np.isfinite(q) and q >= 1):
                raise ConfigError(f"PowerSum exponents must be >= 1, got {q}")
        self.terms: List[Tuple[float, float]] = terms

    def f(self, u):
        u = np.asarray(u, dtype=float)
        return sum(a * u ** q for a, q in self.terms)

    def F(self, u):
        u = np.asarray(u, dtype=float)
        return sum(a * u ** (q + 1.0) / (q + 1.0) for a, q in self.terms)

    def power_terms(self):
        return list(self.terms)

    def describe(self) -> str:
        return "powersum: " + " + ".join(f"{a!r}*u^{q!r}" for a, q in self.terms)


class EigenScaled(PowerSum):
    """f(u) = c * lambda_{1,p} * u^{p-1}, with lambda injected once at construction."""

    def __init__(self, c: float, p: float, lam: float):
        if not (np.isfinite(c) and c > 0):
            raise ConfigError(f"EigenScaled needs c > 0, got {c}")
        if not (np.isfinite(lam) and lam > 0):
            raise ConfigError(f"EigenScaled needs lambda > 0, got {lam}")
        if p < 2:
            raise ConfigError(f"EigenScaled needs p >= 2, got {p}")
        self.c = float(c)
        self.p = float(p)
        self.lam = float(lam)
        super().__init__([(self.c * self.lam, self.p - 1.0)])

    def describe(self) -> str:
        return f"eigscaled: c={self.c!r}"


class NoReaction(SourceTerm):
    """f = 0: pure p-Laplacian diffusion. Written `powersum: 0`."""

    def f(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))

    def F(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))

    def power_terms(self):
        return []

    def describe(self) -> str:
        return "powersum: 0"

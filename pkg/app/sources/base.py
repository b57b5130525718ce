from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

import numpy as np

from app.domain.errors import ConfigError


class SourceTerm(ABC):
    """Nonlinearity f with its antiderivative F(u) = int_0^u f(s) ds, on u >= 0."""

    @abstractmethod
    def f(self, u: np.ndarray) -> np.ndarray:
        """Vectorized f on nonnegative input (no validation)."""
        pass

    @abstractmethod
    def F(self, u: np.ndarray) -> np.ndarray:
        """Vectorized antiderivative on nonnegative input (no validation)."""
        pass

    @abstractmethod
    def describe(self) -> str:
        """Spec string that parses back to this source."""
        pass

    def power_terms(self) -> Optional[List[Tuple[float, float]]]:
        """(a_j, q_j) with f = sum a_j u^{q_j}, or None when f is not a power family."""
        return None

    def leading_power(self) -> Optional[float]:
        terms = self.power_terms()
        return max(q for _, q in terms) if terms else None

    def eval_f(self, u):
        return self.f(_nonnegative(u))

    def eval_F(self, u):
        return self.F(_nonnegative(u))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()!r})"


def _nonnegative(u):
    arr = np.asarray(u, dtype=float)
    if np.any(arr < 0):
        raise ConfigError("Sources are defined on u >= 0 only")
    return arr


def eval_f(source: SourceTerm, u):
    out = source.eval_f(u)
    return float(out) if np.ndim(out) == 0 else out


def eval_F(source: SourceTerm, u):
    out = source.eval_F(u)
    return float(out) if np.ndim(out) == 0 else out

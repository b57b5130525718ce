from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from scipy import integrate

from app.config.constants import TABLE_QUAD_RTOL
from app.domain.errors import ConfigError
from app.sources.base import SourceTerm


class Tabulated(SourceTerm):
    """Monotone piecewise-linear f through knots (u_k, f_k), linear beyond the last knot.

    Knots must start at (0, 0), have strictly increasing u and nondecreasing f
    with f > 0 after the first knot.
    """

    def __init__(self, u_knots, f_knots, path: Union[str, None] = None):
        u = np.asarray(u_knots, dtype=float)
        fk = np.asarray(f_knots, dtype=float)
        if u.ndim != 1 or u.shape != fk.shape or u.size < 2:
            raise ConfigError("Tabulated source needs two equal-length knot columns with >= 2 rows")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(fk))):
            raise ConfigError("Tabulated knots must be finite")
        if u[0] != 0.0 or fk[0] != 0.0:
            raise ConfigError("Tabulated source must start at the knot (0, 0)")
        if np.any(np.diff(u) <= 0):
            raise ConfigError("Tabulated knots must have strictly increasing u")
        if np.any(np.diff(fk) < 0) or np.any(fk[1:] <= 0):
            raise ConfigError("Tabulated f must be nondecreasing and positive for u > 0")
        self.u_knots = u
        self.f_knots = fk
        self.path = path
        self._slope_tail = (fk[-1] - fk[-2]) / (u[-1] - u[-2])
        # F at each knot, for the quadrature to start from the nearest knot
        self._F_knots = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(u) * (fk[1:] + fk[:-1]))])

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "Tabulated":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Source table not found: {path}")
        df = pd.read_csv(path, comment="#")
        if df.shape[1] < 2:
            raise ConfigError(f"Source table {path} needs columns u,f")
        return cls(df.iloc[:, 0].to_numpy(), df.iloc[:, 1].to_numpy(), path=str(path))

    def _scalar_f(self, s: float) -> float:
        if s <= self.u_knots[-1]:
            return float(np.interp(s, self.u_knots, self.f_knots))
        return float(self.f_knots[-1] + self._slope_tail * (s - self.u_knots[-1]))

    def f(self, u):
        u = np.asarray(u, dtype=float)
        inside = np.interp(u, self.u_knots, self.f_knots)
        tail = self.f_knots[-1] + self._slope_tail * (u - self.u_knots[-1])
        return np.where(u <= self.u_knots[-1], inside, tail)

    def _scalar_F(self, s: float) -> float:
        if s == 0.0:
            return 0.0
        k = int(np.searchsorted(self.u_knots, s, side="right") - 1)
        k = min(max(k, 0), self.u_knots.size - 1)
        start = self.u_knots[k]
        value, _ = integrate.quad(self._scalar_f, start, s, epsabs=0.0, epsrel=TABLE_QUAD_RTOL)
        return float(self._F_knots[k] + value)

    def F(self, u):
        u = np.asarray(u, dtype=float)
        out = np.vectorize(self._scalar_F, otypes=[float])(u)
        return out if out.ndim else float(out)

    def describe(self) -> str:
        return f"table: {self.path}" if self.path else "table: <in-memory>"

"""
Unit tests for blow-up time extrapolation.
"""
import numpy as np
import pytest

from app.domain.errors import ConfigError
from app.domain.models import Trajectory
from app.numerics.extrapolation import extrapolate_blowup_time, extrapolate_Tnum


class TestExtrapolateBlowupTime:
    """Test fitting sup^-k ~ C (T - t)."""

    def test_reciprocal_series(self):
        """Test T = 2 from 1/(2 - t)."""
        t = np.linspace(1.9, 1.99, 40)
        T, low = extrapolate_blowup_time(t, 1.0 / (2.0 - t))
        assert T == pytest.approx(2.0, abs=1e-3)
        assert not low

    def test_quadratic_ode(self):
        """Test T = 0.1 for u' = u^2."""
        # u' = u^2, u(0) = 10 blows up at 1/10
        t = np.linspace(0.0, 0.099, 200)
        T, low = extrapolate_blowup_time(t, 10.0 / (1.0 - 10.0 * t))
        assert T == pytest.approx(0.1, abs=1e-3)
        assert not low

    def test_cubic_ode_with_exponent(self):
        """Test T = 1/2 for u' = u^3 with exponent 2."""
        # u' = u^3, u(0) = 1 blows up at 1/2
        t = np.linspace(0.0, 0.4999, 300)
        T, low = extrapolate_blowup_time(t, (1.0 - 2.0 * t) ** -0.5, exponent=2.0)
        assert T == pytest.approx(0.5, abs=1e-3)
        assert not low

    def test_bounded_series_falls_back(self):
        """Test the low-confidence fallback on bounded data."""
        t = np.linspace(0.0, 5.0, 50)
        T, low = extrapolate_blowup_time(t, 1.0 - np.exp(-t) + 0.1)
        assert low
        assert T == t[-1]

    def test_too_few_samples(self):
        """Test the fallback with three samples."""
        t = np.array([0.0, 0.5, 0.9])
        T, low = extrapolate_blowup_time(t, 1.0 / (1.0 - t))
        assert low
        assert T == 0.9

    def test_empty_series_rejected(self):
        """Test rejection of an empty series."""
        with pytest.raises(ConfigError):
            extrapolate_blowup_time([], [])

    def test_bad_exponent_rejected(self):
        """Test rejection of a nonpositive exponent."""
        with pytest.raises(ConfigError):
            extrapolate_blowup_time([0.0, 1.0], [1.0, 2.0], exponent=0.0)


class TestExtrapolateTnum:
    """Test the trajectory wrapper."""

    def test_needs_blowup_outcome(self):
        """Test that only blown-up runs extrapolate."""
        traj = Trajectory(p=2.0, outcome="Decayed")
        with pytest.raises(ConfigError):
            extrapolate_Tnum(traj)

"""
Unit tests for the discrete p-Laplacian and its energy.
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from app.domain.errors import ConfigError
from app.domain.models import Field
from app.numerics.grid import build_grid, field_from_function, zero_field
from app.numerics.plap import (
    apply_plap,
    flux_pairing,
    gradient_energy,
    laplacian,
    max_face_diffusivity,
    stiffness_matrix,
)

P_VALUES = [2.0, 2.5, 3.0, 4.0]
GRID_1D = build_grid(1, 1.0, 20)
GRID_2D = build_grid(2, (1.0, 1.5), 8)
values = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def _sbp_residual(u: Field, v: Field, p: float) -> float:
    """|sum w v Delta_p u + pairing(u, v)| relative to the size of its terms."""
    lhs_terms = u.grid.cell_volume * v.values * apply_plap(u, p).values
    pairing = flux_pairing(u, v, p)
    scale = np.sum(np.abs(lhs_terms)) + abs(pairing) + 1e-300
    return abs(np.sum(lhs_terms) + pairing) / scale


class TestApplyPlap:
    """Test operator values against analytic derivatives."""

    @pytest.mark.parametrize("p", P_VALUES)
    def test_zero_field(self, unit_grid, p):
        """Test that the zero field maps to zero."""
        assert np.all(apply_plap(zero_field(unit_grid), p).values == 0.0)

    def test_laplacian_of_sine(self, sine_field, fine_grid):
        """Test Delta sin = -pi^2 sin."""
        x = fine_grid.interior_coords()[0]
        out = apply_plap(sine_field, 2).values
        assert np.max(np.abs(out + np.pi ** 2 * np.sin(np.pi * x))) <= 1e-3 * np.pi ** 2

    def test_p3_of_parabola(self, fine_grid):
        """Test the p = 3 operator on x(1 - x)."""
        field = field_from_function(fine_grid, lambda x: x * (1 - x))
        x = fine_grid.interior_coords()[0]
        out = apply_plap(field, 3).values
        away = np.abs(x - 0.5) > 0.05
        assert np.max(np.abs(out[away] + 4 * np.abs(1 - 2 * x[away]))) <= 1e-2

    def test_p2_is_standard_stencil_exactly(self, sine_field, fine_grid):
        """Test that p = 2 is the three-point stencil bit for bit."""
        expected = np.diff(sine_field.padded(), n=2) / fine_grid.h ** 2
        assert np.array_equal(apply_plap(sine_field, 2).values, expected)
        assert np.array_equal(apply_plap(sine_field, 2).values, laplacian(sine_field).values)

    def test_p_below_two_rejected(self, unit_grid):
        """Test rejection of p < 2."""
        with pytest.raises(ConfigError):
            apply_plap(zero_field(unit_grid), 1.5)

    def test_stiffness_matches_negative_laplacian(self):
        """Test K u = -Delta u in 2D."""
        grid = build_grid(2, (1.0, 1.0), 7)
        field = field_from_function(grid, lambda x, y: x * (1 - x) * y * (1 - y) * np.exp(x))
        K = stiffness_matrix(grid)
        assert np.allclose(K @ field.values.ravel(), -laplacian(field).values.ravel(), rtol=1e-10, atol=1e-10)


class TestSummationByParts:
    """Test the discrete integration-by-parts identity on random fields."""

    @settings(max_examples=25, deadline=None)
    @given(arrays(np.float64, GRID_1D.shape, elements=values), arrays(np.float64, GRID_1D.shape, elements=values),
           st.sampled_from(P_VALUES))
    def test_one_dimensional(self, a, b, p):
        """Test summation by parts on random 1D pairs."""
        u, v = Field(GRID_1D, a), Field(GRID_1D, b)
        assert _sbp_residual(u, v, p) <= 1e-10

    @settings(max_examples=25, deadline=None)
    @given(arrays(np.float64, GRID_2D.shape, elements=values), arrays(np.float64, GRID_2D.shape, elements=values),
           st.sampled_from(P_VALUES))
    def test_two_dimensional(self, a, b, p):
        """Test summation by parts on random 2D pairs."""
        u, v = Field(GRID_2D, a), Field(GRID_2D, b)
        assert _sbp_residual(u, v, p) <= 1e-10

    @pytest.mark.parametrize("p", P_VALUES)
    def test_hundred_seeded_pairs(self, p):
        """Test summation by parts on 100 seeded pairs."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            u = Field(GRID_1D, rng.uniform(0, 5, GRID_1D.shape))
            v = Field(GRID_1D, rng.normal(size=GRID_1D.shape))
            assert _sbp_residual(u, v, p) <= 1e-10


class TestGradientEnergy:
    """Test the discrete Dirichlet energy."""

    def test_zero(self, unit_grid):
        """Test the energy of zero."""
        assert gradient_energy(zero_field(unit_grid), 3) == 0.0

    def test_sine_p2(self, sine_field):
        """Test int """
        assert gradient_energy(sine_field, 2) == pytest.approx(np.pi ** 2 / 2, rel=1e-3)

    def test_parabola_p3(self, fine_grid):
        """Test int """
        field = field_from_function(fine_grid, lambda x: x * (1 - x))
        assert gradient_energy(field, 3) == pytest.approx(0.25, abs=1e-3)

    @pytest.mark.parametrize("p", P_VALUES)
    def test_energy_equals_self_pairing(self, p):
        """Test energy = -<u, Delta_p u>."""
        rng = np.random.default_rng(3)
        u = Field(GRID_2D, rng.uniform(0, 1, GRID_2D.shape))
        assert gradient_energy(u, p) == pytest.approx(-GRID_2D.cell_volume * np.sum(u.values * apply_plap(u, p).values),
                                                      rel=1e-10)

    @pytest.mark.parametrize("p", P_VALUES)
    def test_homogeneous_of_degree_p(self, sine_field, p):
        """Test degree-p homogeneity."""
        assert gradient_energy(sine_field.scaled(3.0), p) == pytest.approx(3.0 ** p * gradient_energy(sine_field, p),
                                                                          rel=1e-12)


class TestMaxFaceDiffusivity:
    """Test the CFL diffusivity."""

    @pytest.mark.parametrize("p", P_VALUES)
    def test_zero_field_has_no_active_faces(self, unit_grid, p):
        """Test that the zero field has no active faces."""
        assert max_face_diffusivity(zero_field(unit_grid), p) == 0.0

    def test_p2_is_one(self, sine_field):
        """Test unit diffusivity for p = 2."""
        assert max_face_diffusivity(sine_field, 2) == 1.0

    def test_p3_is_max_gradient(self, sine_field):
        """Test that p = 3 diffusivity is the largest slope."""
        assert max_face_diffusivity(sine_field, 3) == pytest.approx(np.pi, rel=1e-4)

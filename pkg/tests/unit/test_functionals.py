"""
Unit tests for the energy functional, the concavity series and the
blow-up time bound.
"""
import math

import numpy as np
import pytest

from app.domain.errors import ConfigError, NoBoundError
from app.domain.models import Snapshot, Trajectory
from app.domain.schemas import ConditionParams, SolverConfig
from app.numerics.eigen import first_eigenpair
from app.numerics.functionals import (
    choose_M,
    concavity_envelope,
    concavity_lower_bound,
    energy_identity_residual,
    energy_series,
    eval_concavity_series,
    eval_J,
    linear_source_J_upper_bound,
    second_derivative_I,
    sigma_of,
)
from app.numerics.grid import field_from_function, integrate_power, sup_norm, zero_field
from app.numerics.solver import run
from app.sources import EigenScaled, NoReaction


def single_snapshot_trajectory(field, p=2.0):
    traj = Trajectory(p=p)
    traj.record(Snapshot(t=0.0, field=field, dt=0.0, supnorm=sup_norm(field), cum_ut2=0.0, cum_u2=0.0))
    return traj


class TestEvalJ:
    """Test J = -(1/p) int |grad u|^p + int F(u) - gamma |Omega|."""

    def test_zero_field(self, unit_grid, cubic):
        """Test J(0) = -gamma """
        assert eval_J(zero_field(unit_grid), cubic, 2.0, 1.0) == pytest.approx(-1.0)

    @pytest.mark.parametrize("c,positive", [(4.0, False), (6.0, True)])
    def test_sine_sign(self, sine_field, cubic, c, positive):
        """Test the sign of J for c sin(pi x) with a cubic source."""
        J = eval_J(sine_field.scaled(c), cubic, 2.0, 0.01)
        exact = -c ** 2 * math.pi ** 2 / 4 + 3 * c ** 4 / 32 - 0.01
        assert J == pytest.approx(exact, rel=1e-3)
        assert (J > 0) == positive

    def test_negative_field_rejected(self, sine_field, cubic):
        """Test rejection of negative fields."""
        with pytest.raises(ConfigError):
            eval_J(sine_field.scaled(-1.0), cubic, 2.0, 0.0)

    @pytest.mark.parametrize("p", [2.0, 3.0])
    def test_eigen_construction(self, unit_grid, p):
        """Test J(phi) > 0 for the eigenfunction construction."""
        eig = first_eigenpair(unit_grid, p, normalization="lp")
        assert eig.lam > p / (p - 1)
        src = EigenScaled(p, p, eig.lam)
        J = eval_J(eig.phi, src, p, 1.0)
        assert J >= (eig.lam * (1 - 1 / p) - 1.0) - 1e-2

    def test_linear_source_upper_bound(self, sine_field):
        """Test J against the linear-source bound."""
        lam = math.pi ** 2
        src = EigenScaled(0.8, 2.0, lam)
        J = eval_J(sine_field, src, 2.0, 0.5)
        bound = linear_source_J_upper_bound(sine_field, 0.8 * lam, lam, 2.0, 0.5)
        assert bound < 0
        assert J <= bound + 1e-3


class TestChooseM:
    """Test the blow-up time bound."""

    def test_sine_six(self, sine_field, cubic):
        """Test M and T* for 6 sin(pi x)."""
        bound = choose_M(sine_field.scaled(6.0), cubic, 2.0, ConditionParams(p=2, alpha=4))
        assert bound.sigma == pytest.approx(math.sqrt(2) - 1)
        assert bound.L2_u0 == pytest.approx(18.0, rel=1e-4)
        assert bound.J0 == pytest.approx(32.66, rel=1e-3)
        assert bound.M == pytest.approx(5.987, rel=2e-3)
        assert bound.Tstar_upper == pytest.approx(0.803, rel=2e-3)
        assert bound.M_alt == pytest.approx(bound.M)

    def test_no_bound_when_J0_negative(self, sine_field, cubic):
        """Test NoBoundError when J(0) < 0."""
        with pytest.raises(NoBoundError) as exc:
            choose_M(sine_field.scaled(4.0), cubic, 2.0, ConditionParams(p=2, alpha=4))
        assert exc.value.J0 < 0

    def test_alpha_at_most_two(self, sine_field, cubic):
        """Test rejection of alpha <= 2."""
        with pytest.raises(ConfigError):
            choose_M(sine_field.scaled(6.0), cubic, 2.0, ConditionParams(p=2, alpha=2))

    def test_gamma_increases_bound(self, sine_field, cubic):
        """Test that a larger gamma loosens the bound."""
        u0 = sine_field.scaled(6.0)
        low = choose_M(u0, cubic, 2.0, ConditionParams(p=2, alpha=4, gamma=1.0))
        high = choose_M(u0, cubic, 2.0, ConditionParams(p=2, alpha=4, gamma=2.0))
        assert high.J0 < low.J0
        assert high.Tstar_upper > low.Tstar_upper

    def test_variant_prefactor_for_p3(self, unit_grid):
        """Test the alpha/(alpha-p) prefactor ratio."""
        eig = first_eigenpair(unit_grid, 3.0, normalization="lp")
        src = EigenScaled(3.0, 3.0, eig.lam)
        bound = choose_M(eig.phi, src, 3.0, ConditionParams(p=3, alpha=4, gamma=1.0))
        assert bound.M_alt / bound.M == pytest.approx((4 / 1) / (4 / 2))


class TestConcavitySeries:
    """Test I, I', I'' and H along trajectories."""

    def test_single_snapshot(self, sine_field, cubic):
        """Test I, I' and I'' on one snapshot."""
        u0 = sine_field.scaled(6.0)
        records = eval_concavity_series(single_snapshot_trajectory(u0), cubic, 2.0,
                                        ConditionParams(p=2, alpha=4), M=3.0)
        assert len(records) == 1
        rec = records[0]
        assert rec.I == 3.0
        assert rec.Iprime == pytest.approx(integrate_power(u0, 2))
        assert rec.Idoubleprime == pytest.approx(second_derivative_I(u0, cubic, 2.0))

    def test_non_monotone_times_rejected(self, sine_field, cubic):
        """Test rejection of repeated timestamps."""
        traj = single_snapshot_trajectory(sine_field)
        traj.snapshots.append(traj.snapshots[0])
        with pytest.raises(ConfigError):
            eval_concavity_series(traj, cubic, 2.0, ConditionParams(p=2, alpha=4), M=1.0)

    def test_empty_trajectory_rejected(self, cubic):
        """Test rejection of an empty trajectory."""
        with pytest.raises(ConfigError):
            eval_concavity_series(Trajectory(p=2.0), cubic, 2.0, ConditionParams(p=2, alpha=4), M=1.0)

    def test_pure_diffusion_concave(self, unit_grid):
        """Test I'' <= 0 and increasing I without a source."""
        u0 = field_from_function(unit_grid, lambda x: np.sin(np.pi * x))
        traj = run(unit_grid, NoReaction(), 2.0, u0, SolverConfig(T_max=0.2))
        records = eval_concavity_series(traj, NoReaction(), 2.0, ConditionParams(p=2, alpha=3), M=1.0)
        assert len(records) > 2
        assert all(r.Idoubleprime <= 0 for r in records)
        assert np.all(np.diff([r.I for r in records]) > 0)

    def test_energy_residual_starts_at_zero(self, unit_grid):
        """Test that the energy residual is zero at t = 0."""
        u0 = field_from_function(unit_grid, lambda x: np.sin(np.pi * x))
        traj = run(unit_grid, NoReaction(), 2.0, u0, SolverConfig(T_max=0.1))
        residual = energy_identity_residual(traj, NoReaction(), 2.0, 0.0)
        assert residual[0] == 0.0

    def test_I_accumulates_solver_integral(self, sine_field, cubic):
        """I = M + the per-step integral of int u^2 carried on each snapshot."""
        traj = single_snapshot_trajectory(sine_field)
        traj.record(Snapshot(t=0.5, field=sine_field, dt=0.5, supnorm=1.0, cum_ut2=0.0, cum_u2=0.7))
        records = eval_concavity_series(traj, cubic, 2.0, ConditionParams(p=2, alpha=4), M=2.0)
        assert [r.I for r in records] == pytest.approx([2.0, 2.7])


class TestEnergySeries:
    """Test J records along trajectories."""

    def test_records_match_eval_J(self, unit_grid, cubic):
        """Each record splits J into its gradient and source parts."""
        traj = run(unit_grid, cubic, 2.0, field_from_function(unit_grid, lambda x: 6 * np.sin(np.pi * x)),
                   SolverConfig(T_max=0.01))
        records = energy_series(traj, cubic, 2.0, 0.5)
        assert len(records) == len(traj.snapshots)
        for snap, rec in zip(traj.snapshots, records):
            assert rec.t == snap.t
            assert rec.cumulative_ut2 == snap.cum_ut2
            assert rec.J == pytest.approx(eval_J(snap.field, cubic, 2.0, 0.5), rel=1e-12)
            assert rec.J == pytest.approx(-rec.gradE / 2 + rec.Fint - 0.5, rel=1e-12)

    def test_J_nondecreasing_for_p2(self, unit_grid, cubic):
        """J never decreases along a p = 2 blow-up trajectory."""
        u0 = field_from_function(unit_grid, lambda x: 6 * np.sin(np.pi * x))
        traj = run(unit_grid, cubic, 2.0, u0, SolverConfig(T_max=1.0, U_blow=1e3, reaction_fraction=0.1))
        assert traj.outcome == "BlownUp"
        J = np.array([r.J for r in energy_series(traj, cubic, 2.0, 0.0)])
        scale = np.max(np.abs(J))
        assert np.all(np.diff(J) >= -1e-9 * scale)


class TestEnvelope:
    """Test the closed-form lower envelope of I."""

    def test_starts_at_M(self):
        """Test envelope(0) = M."""
        assert concavity_envelope(0.0, 2.0, 0.5, 3.0) == pytest.approx(2.0)

    def test_infinite_after_bound(self):
        """Test that the envelope is infinite from T* on."""
        M, sigma, L2 = 2.0, 0.5, 3.0
        T = M / (sigma * L2)
        values = concavity_envelope(np.array([0.5 * T, 0.99 * T, T, 1.5 * T]), M, sigma, L2)
        assert np.isfinite(values[0]) and np.isfinite(values[1])
        assert values[1] > values[0]
        assert np.isinf(values[2]) and np.isinf(values[3])

    def test_lower_bound(self):
        """Test the I'' lower bound arithmetic."""
        assert concavity_lower_bound(2.0, 0.5, 4.0) == pytest.approx(20.0)

    def test_sigma(self):
        """Test sigma = sqrt(alpha/2) - 1."""
        assert sigma_of(8.0) == pytest.approx(1.0)

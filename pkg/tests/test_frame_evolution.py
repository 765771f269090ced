"""Tests for frame transport and truncation."""

from unittest.mock import MagicMock, patch

import numpy as np
import pytest

from maslov_count.core.errors import ContractViolationError, IntegrationAccuracyError, TruncationError
from maslov_count.models.frames import LagrangianFrame
from maslov_count.models.spectral import SpectralInterval
from maslov_count.services.frame_evolution import (
    compactified_grid,
    crossing_form,
    evolve_frame,
    frame_at,
    growth_rate,
    lambda_crossing_form,
    propagate_frame,
)
from maslov_count.services.symplectic import check_lagrangian, grassmannian_distance
from maslov_count.services.truncation import choose_truncation, fixed_truncation, tail_integral


class TestCompactifiedGrid:
    """Tests for compactified_grid."""

    def test_endpoints_and_order(self):
        xs = compactified_grid(10.0, 201)

        assert xs[0] == -10.0
        assert xs[-1] == 10.0
        assert np.all(np.diff(xs) > 0)

    def test_symmetric(self):
        xs = compactified_grid(8.0, 101)
        np.testing.assert_allclose(xs, -xs[::-1], atol=1e-12)

    def test_denser_near_center(self):
        """Test that spacing grows away from x = 0."""
        xs = compactified_grid(6.0, 201)
        steps = np.diff(xs)

        assert steps[len(steps) // 2] < steps[0]

    def test_gaps_are_filled(self):
        """Test that no step exceeds 4c / points for a wide window."""
        c, points = 40.0, 101
        xs = compactified_grid(c, points)

        assert np.max(np.diff(xs)) <= 4.0 * c / points + 1e-12

    @pytest.mark.parametrize("c, points", [(0.0, 11), (5.0, 2)])
    def test_rejects_bad_arguments(self, c, points):
        with pytest.raises(ContractViolationError):
            compactified_grid(c, points)


class TestEvolveFrame:
    """Tests for evolve_frame and its helpers."""

    def test_constant_coefficients_keep_direction(self, free_system, fast_numerics):
        """Test that V = 0, lambda = -1 keeps the frame on (1; 1)/sqrt(2) across [-10, 10]."""
        path = evolve_frame(free_system, -1.0, fixed_truncation(10.0, fast_numerics), 1, fast_numerics)
        mode = LagrangianFrame(np.eye(1), np.eye(1))

        assert max(grassmannian_distance(path.frame(i), mode) for i in range(len(path))) < 1e-8
        assert path.xs[0] == -10.0 and path.xs[-1] == 10.0

    def test_log_scale_tracks_growth(self, free_system, fast_numerics):
        """Test that the accumulated scale grows like e^x for the growing mode."""
        path = evolve_frame(free_system, -1.0, fixed_truncation(5.0, fast_numerics), 1, fast_numerics)

        assert path.log_scale[-1] - path.log_scale[0] == pytest.approx(10.0, rel=1e-6)

    def test_frames_stay_lagrangian(self, sech_well, policy, fast_numerics):
        path = evolve_frame(sech_well, -0.5, policy, 1, fast_numerics)

        assert all(check_lagrangian(path.frame(i)) for i in range(0, len(path), 50))
        assert path.max_residual < 10 * fast_numerics.lagrangian_tol

    def test_from_right_starts_at_plus_c(self, sech_well, policy, fast_numerics):
        """Test that the from-right path starts from the frame decaying at +infinity."""
        path = evolve_frame(sech_well, -0.5, policy, -1, fast_numerics)
        expected = sech_well.asymptotic_frames(-0.5).Xtilde_plus

        assert path.direction == -1
        assert grassmannian_distance(path.start, expected) < 1e-12
        assert np.all(np.diff(path.xs) > 0)

    def test_eigenfunction_aligns_both_paths(self, sech_well, policy, fast_numerics):
        """Test that at the eigenvalue -1 the two decaying planes coincide at x = 0."""
        left = evolve_frame(sech_well, -1.0, policy, 1, fast_numerics)
        right = evolve_frame(sech_well, -1.0, policy, -1, fast_numerics)

        assert grassmannian_distance(frame_at(sech_well, left, 0.0), frame_at(sech_well, right, 0.0)) < 1e-4

    def test_away_from_eigenvalue_paths_differ(self, sech_well, policy, fast_numerics):
        left = evolve_frame(sech_well, -0.5, policy, 1, fast_numerics)
        right = evolve_frame(sech_well, -0.5, policy, -1, fast_numerics)

        assert grassmannian_distance(frame_at(sech_well, left, 0.0), frame_at(sech_well, right, 0.0)) > 1e-2

    def test_frame_at_matches_propagation(self, sech_well, policy, fast_numerics):
        """Test that an off-grid frame equals direct propagation from -c."""
        path = evolve_frame(sech_well, -0.5, policy, 1, fast_numerics)
        x = 0.123456
        direct = propagate_frame(
            sech_well, -0.5, sech_well.asymptotic_frames(-0.5).X_minus, -policy.c, x, fast_numerics
        )

        assert grassmannian_distance(frame_at(sech_well, path, x, fast_numerics), direct) < 1e-8

    def test_frame_at_outside_window(self, free_system, fast_numerics):
        path = evolve_frame(free_system, -1.0, fixed_truncation(4.0, fast_numerics), 1, fast_numerics)

        with pytest.raises(ContractViolationError, match="outside the path window"):
            frame_at(free_system, path, 5.0)

    def test_integrator_failure(self, free_system, fast_numerics):
        """Test that an unsuccessful integration surfaces as an accuracy error."""
        failed = MagicMock(success=False, message="step size too small")
        with patch("maslov_count.services.frame_evolution.solve_ivp", return_value=failed):
            with pytest.raises(IntegrationAccuracyError, match="step size too small"):
                evolve_frame(free_system, -1.0, fixed_truncation(4.0, fast_numerics), 1, fast_numerics)

    def test_growth_rate_bound(self, free_system):
        assert growth_rate(free_system, -1.0, np.linspace(-1, 1, 5)) == pytest.approx(1.0)


class TestCrossingForms:
    """Tests for the x- and lambda-crossing forms."""

    def test_dirichlet_form_is_negative(self, free_system):
        """Test that the form against the Dirichlet plane is -P^{-1} on the kernel."""
        dirichlet = LagrangianFrame.dirichlet(1)

        form = crossing_form(free_system, -1.0, 0.0, dirichlet, dirichlet)

        np.testing.assert_allclose(form, [[-1.0]])

    def test_transversal_form_is_empty(self, free_system):
        form = crossing_form(free_system, -1.0, 0.0, LagrangianFrame.neumann(1), LagrangianFrame.dirichlet(1))
        assert form.shape == (0, 0)

    def test_lambda_identity(self, sech_well, fast_numerics):
        """Test that the boundary difference equals the B_lambda quadrature."""
        boundary, quadrature = lambda_crossing_form(sech_well, -0.5, 0.0, 8.0, fast_numerics)

        np.testing.assert_allclose(boundary, quadrature, rtol=1e-6)
        assert quadrature[0, 0].real > 0


class TestTruncation:
    """Tests for choose_truncation and tail_integral."""

    def test_tail_of_sech_well(self, sech_well):
        """Test that the full-line integral of 2 sech^2 x is 4."""
        assert tail_integral(sech_well, -1.0, 0.0) == pytest.approx(4.0, rel=1e-8)

    def test_constant_coefficients_use_floor(self, free_system, fast_numerics):
        policy = choose_truncation(free_system, SpectralInterval(lambda1=-2.0, lambda2=-1.0), numerics=fast_numerics)

        assert policy.c == fast_numerics.c_floor
        assert policy.limiting_criterion == "floor"
        assert policy.tail_bound == 0.0

    def test_sech_well_window(self, sech_well, fast_numerics):
        """Test that the 8 e^{-2c} tail falls below 1e-8 for c between 10 and 12."""
        policy = choose_truncation(sech_well, SpectralInterval(lambda1=-2.0, lambda2=-0.5), numerics=fast_numerics)

        assert 10.0 <= policy.c <= 12.0
        assert policy.limiting_criterion == "tail"
        assert policy.tail_bound < 1e-8
        assert policy.transversality_gap > 0

    def test_cap_exceeded(self, sech_well, fast_numerics):
        numerics = fast_numerics.model_copy(update={"c_cap": 4.0})

        with pytest.raises(TruncationError, match="tail"):
            choose_truncation(sech_well, SpectralInterval(lambda1=-2.0, lambda2=-0.5), numerics=numerics)

    def test_frames_unavailable(self, sech_well, fast_numerics):
        """Test that an interval reaching the essential spectrum fails on transversality."""
        with pytest.raises(TruncationError, match="transversality"):
            choose_truncation(sech_well, SpectralInterval(lambda1=-1.0, lambda2=0.5), numerics=fast_numerics)

    def test_fixed_truncation(self, fast_numerics):
        policy = fixed_truncation(7.5, fast_numerics)

        assert policy.c == 7.5
        assert policy.limiting_criterion == "override"
        assert policy.grid_points == fast_numerics.grid_points

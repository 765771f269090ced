"""Tests for value types and Pydantic models."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from maslov_count.core.errors import ContractViolationError
from maslov_count.models.counting import CountArtifacts, CountResult
from maslov_count.models.frames import LagrangianFrame, SymplecticForm, UnitaryMatrix, standard_symplectic
from maslov_count.models.maslov import FramePairPath, RotationTrace
from maslov_count.models.spectral import DecayProfile, SpectralInterval, TruncationPolicy


class TestFrames:
    """Tests for LagrangianFrame and UnitaryMatrix."""

    def test_standard_symplectic(self):
        """Test that J = [[0, -I], [I, 0]] squares to -I."""
        J = standard_symplectic(2)

        np.testing.assert_array_equal(J[:2, 2:], -np.eye(2))
        np.testing.assert_array_equal(J[2:, :2], np.eye(2))
        np.testing.assert_array_equal(J @ J, -np.eye(4))

    def test_symplectic_form_pairing(self):
        """Test that the form is skew and pairs Neumann against Dirichlet to -I."""
        form = SymplecticForm(3)

        np.testing.assert_array_equal(form.matrix.T, -form.matrix)
        np.testing.assert_array_equal(
            form.pair(LagrangianFrame.neumann(3).stacked, LagrangianFrame.dirichlet(3).stacked), -np.eye(3)
        )

    def test_standard_symplectic_rejects_zero(self):
        """Test that n must be positive."""
        with pytest.raises(ContractViolationError):
            standard_symplectic(0)

    def test_frame_shape_mismatch(self):
        """Test that blocks of different shapes are rejected."""
        with pytest.raises(ContractViolationError, match="differ in shape"):
            LagrangianFrame(np.eye(2), np.eye(3))

    def test_stacked_round_trip(self):
        """Test that from_stacked splits [X; Y] back into its blocks."""
        frame = LagrangianFrame(np.eye(2), 2 * np.eye(2))
        again = LagrangianFrame.from_stacked(frame.stacked)

        np.testing.assert_array_equal(again.X, frame.X)
        np.testing.assert_array_equal(again.Y, frame.Y)
        assert again.n == 2

    def test_from_stacked_needs_2n_rows(self):
        """Test that a non 2n x n matrix is rejected."""
        with pytest.raises(ContractViolationError):
            LagrangianFrame.from_stacked(np.ones((3, 2)))

    def test_dirichlet_and_neumann(self):
        """Test the coordinate planes."""
        np.testing.assert_array_equal(LagrangianFrame.dirichlet(1).stacked, [[0], [1]])
        np.testing.assert_array_equal(LagrangianFrame.neumann(1).stacked, [[1], [0]])

    def test_unitary_angles(self):
        """Test that eigenvalue angles lie in (-pi, pi]."""
        W = UnitaryMatrix(np.diag([1.0, -1.0, 1j]))

        assert sorted(np.round(W.angles(), 12)) == pytest.approx([0.0, math.pi / 2, math.pi])
        assert W.unitarity_residual() == pytest.approx(0.0)


class TestSpectralModels:
    """Tests for spectral-interval and policy models."""

    def test_interval_order(self):
        """Test that lambda1 must be below lambda2."""
        with pytest.raises(ValidationError, match="must be below"):
            SpectralInterval(lambda1=1.0, lambda2=0.0)

    def test_interval_below_kappa(self):
        """Test that lambda2 must be below kappa."""
        with pytest.raises(ValidationError, match="kappa"):
            SpectralInterval(lambda1=-1.0, lambda2=0.5, kappa=0.0)

    def test_decay_combine_keeps_slower(self):
        """Test that combining profiles keeps the slower decay."""
        fast = DecayProfile(kind="exponential", rate=2.0)
        slow = DecayProfile(kind="polynomial", rate=3.0)

        assert fast.combine(slow) == slow
        assert fast.combine(DecayProfile(kind="exponential", rate=1.0)).rate == 1.0

    def test_policy_doubled(self):
        """Test that doubling c also refines the grid."""
        policy = TruncationPolicy(c=10.0, grid_points=101)
        doubled = policy.doubled()

        assert doubled.c == 20.0
        assert doubled.grid_points == 201
        assert doubled.limiting_criterion == "override"


class TestPathModels:
    """Tests for FramePairPath and RotationTrace."""

    def test_path_needs_two_points(self):
        """Test that a single-point path is rejected."""
        frame = LagrangianFrame.dirichlet(1).stacked
        with pytest.raises(ContractViolationError):
            FramePairPath(params=[0.0], first=[frame], second=[frame])

    def test_reversed_negates_form(self):
        """Test that reversing a path reverses params and negates the crossing form."""
        frame = LagrangianFrame.dirichlet(1).stacked
        path = FramePairPath(
            params=[0.0, 1.0],
            first=[frame, frame],
            second=[frame, frame],
            crossing_form=lambda t: np.array([[t + 1.0]]),
        )
        back = path.reversed()

        np.testing.assert_array_equal(back.params, [1.0, 0.0])
        assert back.crossing_form(0.5)[0, 0] == -1.5
        assert back.label.endswith("(reversed)")

    def test_sheets_mark_minus_one(self):
        """Test that sheets flag samples at -1 and measure the offset from pi."""
        trace = RotationTrace(
            params=np.array([0.0, 1.0, 2.0]),
            angles=np.array([[math.pi], [math.pi + 0.5], [3 * math.pi]]),
            matching=[],
        )
        s, at = trace.sheets(1e-8)

        assert list(at[:, 0]) == [True, False, True]
        assert s[2, 0] == pytest.approx(1.0)


class TestCountResult:
    """Tests for CountResult."""

    def test_negative_count_rejected(self):
        """Test that N must be non-negative."""
        with pytest.raises(ValidationError):
            CountResult(N=-1, lambda2=-0.5, kappa=0.0, method="kernel-sum", c=10.0)

    def test_artifacts_not_serialized(self):
        """Test that attached artifacts stay out of the JSON document."""
        result = CountResult(N=1, lambda2=-0.5, kappa=0.0, method="kernel-sum", c=10.0)
        result.attach(CountArtifacts(policy=TruncationPolicy(c=10.0)))

        assert result.artifacts is not None
        assert "artifacts" not in result.model_dump_json()
        assert result.model_dump()["lambda1"] is None

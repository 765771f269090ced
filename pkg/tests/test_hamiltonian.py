"""Tests for the shared Hamiltonian-system behavior and validation."""

import numpy as np
import pytest

from maslov_count.core.errors import AssumptionViolationError, EssentialSpectrumError
from maslov_count.services.coefficients import Constant, MatrixCoefficient
from maslov_count.services.hamiltonian import coefficient_matrix, validate_system
from maslov_count.services.sturm_liouville import SturmLiouvilleHamiltonian, SturmLiouvilleSystem


class SkewedHamiltonian(SturmLiouvilleHamiltonian):
    """Sturm-Liouville B with a non-Hermitian corner added away from the limits."""

    def B(self, x, lam):
        B = super().B(x, lam)
        B[0, 1] += 1e-3
        return B


class TestValidateSystem:
    """Tests for validate_system."""

    def test_free_system_passes(self, free_system):
        """Test that the free Sturm-Liouville system passes every check."""
        report = validate_system(free_system, xs=np.linspace(-5, 5, 11))

        assert report.passed
        assert report.self_adjoint_residual == 0.0
        assert report.hyperbolic_gap > 0
        assert report.samples == 33

    def test_sech_well_passes(self, sech_well):
        report = validate_system(sech_well, lambdas=[-0.5, -2.0])

        assert report.passed
        assert report.derivative_residual < 1e-6

    def test_non_self_adjoint_detected(self):
        """Test that a non-Hermitian B is reported as a self-adjointness failure."""
        one = MatrixCoefficient.scalar(Constant(value=1.0))
        system = SkewedHamiltonian(SturmLiouvilleSystem(P=one, V=MatrixCoefficient.scalar(Constant()), Q=one))

        with pytest.raises(AssumptionViolationError, match="self-adjoint") as info:
            validate_system(system, xs=[0.0], lambdas=[-1.0])
        assert info.value.assumption == "self-adjoint"

    def test_report_mode_does_not_raise(self):
        """Test that raise_on_failure=False returns a failed report instead."""
        one = MatrixCoefficient.scalar(Constant(value=1.0))
        system = SkewedHamiltonian(SturmLiouvilleSystem(P=one, V=MatrixCoefficient.scalar(Constant()), Q=one))

        report = validate_system(system, xs=[0.0], lambdas=[-1.0], raise_on_failure=False)

        assert not report.passed
        assert report.self_adjoint_residual == pytest.approx(1e-3)

    def test_non_hyperbolic_limit(self, free_system):
        """Test that lambda on the essential spectrum fails the hyperbolicity check."""
        with pytest.raises(AssumptionViolationError, match="hyperbolic-limits"):
            validate_system(free_system, xs=[0.0], lambdas=[1.0])


class TestHamiltonianBase:
    """Tests for HamiltonianSystemBase helpers."""

    def test_coefficient_matrix(self, free_system):
        """Test that A = -J B."""
        A = coefficient_matrix(free_system, 0.0, -1.0)

        np.testing.assert_allclose(A, [[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(free_system.A(0.0, -1.0), A)

    def test_tail_norm_vanishes_for_constant_coefficients(self, free_system):
        assert free_system.tail_norm(3.0, -1.0) == 0.0

    def test_tail_norm_of_well(self, sech_well):
        assert sech_well.tail_norm(0.0, -1.0) == pytest.approx(2.0)

    def test_check_admissible(self, sech_well):
        sech_well.check_admissible(-0.5)
        with pytest.raises(EssentialSpectrumError, match="essential-spectrum edge"):
            sech_well.check_admissible(0.0)

    def test_default_lambdas_below_kappa(self, sech_well):
        assert np.all(sech_well.default_lambdas() < sech_well.kappa)

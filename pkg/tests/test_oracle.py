"""Tests for the finite-difference reference eigensolver."""

from unittest.mock import patch

import numpy as np
import pytest

from maslov_count.core.errors import ContractViolationError, OracleUnconvergedError
from maslov_count.services.coefficients import Constant, MatrixCoefficient, poschl_teller
from maslov_count.services.differential_algebraic import DASystem
from maslov_count.services.fourth_order import FourthOrderSystem
from maslov_count.services.oracle import (
    DiscretizationSpec,
    discretize,
    oracle_count,
    oracle_eigenvalues,
    traveling_nonsymmetric_eigenvalues,
)
from maslov_count.services.traveling_wave import TravelingWaveSystem


def scalar(value: float) -> MatrixCoefficient:
    return MatrixCoefficient.scalar(Constant(value=value))


class TestDiscretizationSpec:
    """Tests for DiscretizationSpec."""

    def test_defaults(self):
        spec = DiscretizationSpec()

        assert (spec.L, spec.N) == (20.0, 400)
        assert len(spec.points()) == 400
        assert spec.h == pytest.approx(40.0 / 401)

    def test_refined(self):
        """Test that refinement widens the domain by half and doubles the grid."""
        refined = DiscretizationSpec(L=10.0, N=300).refined()

        assert (refined.L, refined.N) == (15.0, 600)

    def test_minimum_grid(self):
        with pytest.raises(ValueError):
            DiscretizationSpec(N=100)


class TestOracleEigenvalues:
    """Tests for oracle_eigenvalues on Sturm-Liouville wells."""

    def test_single_well(self, sech_well):
        """Test that -2 sech^2 has its only bound state near -1."""
        values = oracle_eigenvalues(sech_well, window=(-np.inf, 0.0))

        assert len(values) == 1
        assert values[0] == pytest.approx(-1.0, abs=1e-2)

    def test_deep_well(self, deep_well):
        """Test that -6 sech^2 has bound states near -4 and -1."""
        values = oracle_eigenvalues(deep_well, window=(-np.inf, -0.1))

        np.testing.assert_allclose(values, [-4.0, -1.0], atol=5e-2)

    def test_unknown_source_rejected(self):
        with pytest.raises(ContractViolationError, match="no discretization"):
            discretize(object(), DiscretizationSpec())


class TestOracleCount:
    """Tests for oracle_count."""

    def test_counts_below(self, sech_well):
        assert oracle_count(sech_well, None, -0.5) == 1

    def test_counts_interval(self, deep_well):
        assert oracle_count(deep_well, -2.0, -0.5) == 1

    def test_half_width_must_cover_truncation(self, sech_well):
        """Test that the oracle domain has to be at least twice the truncation."""
        with pytest.raises(ContractViolationError, match="below 2c"):
            oracle_count(sech_well, None, -0.5, DiscretizationSpec(L=20.0), c=12.0)

    def test_refinement_disagreement(self, sech_well):
        """Test that a count changing under refinement raises."""
        counts = [np.array([-1.0]), np.array([-1.0, -0.6])]
        with patch("maslov_count.services.oracle.oracle_eigenvalues", side_effect=counts):
            with pytest.raises(OracleUnconvergedError, match="changed from 1 to 2"):
                oracle_count(sech_well, None, -0.5)


class TestTravelingWaveOracle:
    """Tests for the traveling-wave discretizations."""

    def test_conjugated_eigenvalue_shifts(self):
        """Test that s = 1 moves the bound state of -2 sech^2 from -1 to -3/4."""
        system = TravelingWaveSystem(V=MatrixCoefficient.scalar(poschl_teller(1)), s=1.0)

        values = oracle_eigenvalues(system, window=(-np.inf, 0.0))

        assert len(values) == 1
        assert values[0] == pytest.approx(-0.75, abs=1e-2)

    def test_nonsymmetric_matches_conjugated(self):
        system = TravelingWaveSystem(V=MatrixCoefficient.scalar(poschl_teller(1)), s=0.5)

        direct = traveling_nonsymmetric_eigenvalues(system, window=(-2.0, -0.5))
        conjugated = oracle_eigenvalues(system, window=(-2.0, -0.5))

        assert len(direct) == len(conjugated) == 1
        assert direct[0] == pytest.approx(conjugated[0], abs=1e-2)

    def test_nonsymmetric_needs_traveling_wave(self, sech_well):
        with pytest.raises(ContractViolationError, match="traveling waves only"):
            traveling_nonsymmetric_eigenvalues(sech_well)


class TestOtherDiscretizations:
    """Tests for the fourth-order and differential-algebraic matrices."""

    def test_fourth_order_clamped(self):
        """Test that the clamped biharmonic stencil is symmetric and positive for V = 0."""
        spec = DiscretizationSpec(L=5.0, N=200)

        A, M, components = discretize(FourthOrderSystem(V=scalar(0.0)), spec)

        assert M is None and components == 1
        assert A[0, 0] == pytest.approx(7.0 / spec.h**4)
        np.testing.assert_allclose(A, A.T)
        assert np.linalg.eigvalsh(A)[0] > 0

    def test_differential_algebraic_edge(self):
        """Test that constant blocks V11 = 0, V12 = 1, V22 = 2 keep the spectrum above 1 - sqrt(2)."""
        spec = DiscretizationSpec(L=5.0, N=200)
        system = DASystem(P11=scalar(1.0), V11=scalar(0.0), V12=scalar(1.0), V22=scalar(2.0))

        A, M, components = discretize(system, spec)

        assert A.shape == (400, 400)
        assert components == 2
        np.testing.assert_allclose(A, A.T)
        assert np.linalg.eigvalsh(A)[0] >= 1.0 - np.sqrt(2.0) - 1e-9

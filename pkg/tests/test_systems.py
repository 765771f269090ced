"""Tests for coefficient families, system classes and the config-driven factory."""

import numpy as np
import pytest

from maslov_count.core.errors import (
    AdmissibilityError,
    AssumptionViolationError,
    ContractViolationError,
    UnsupportedConfigurationError,
)
from maslov_count.models.config import RunConfig
from maslov_count.services.coefficients import (
    CallableCoefficient,
    Constant,
    MatrixCoefficient,
    SechSquared,
    Tabulated,
    poschl_teller,
)
from maslov_count.services.differential_algebraic import DASystem, da_reduce, quadratic_bound
from maslov_count.services.fourth_order import FourthOrderSystem, fourth_to_hamiltonian
from maslov_count.services.hamiltonian import left_shelf_bound
from maslov_count.services.sturm_liouville import SturmLiouvilleSystem, sl_to_hamiltonian
from maslov_count.services.system_factory import build_system
from maslov_count.services.traveling_wave import TravelingWaveSystem, traveling_to_hamiltonian


def scalar(value: float) -> MatrixCoefficient:
    return MatrixCoefficient.scalar(Constant(value=value))


@pytest.fixture
def da_constant():
    """m = 1, n = 2 with V11 = 0, V12 = 1, V22 = 2 everywhere."""
    return da_reduce(DASystem(P11=scalar(1.0), V11=scalar(0.0), V12=scalar(1.0), V22=scalar(2.0)))


class TestCoefficients:
    """Tests for scalar profiles and matrix coefficients."""

    def test_poschl_teller_amplitude(self):
        """Test that m = 2 gives -6 sech^2 x."""
        well = poschl_teller(2)

        assert well(0.0) == pytest.approx(-6.0)
        assert well.limit(1) == 0.0

    def test_offset_moves_endstates(self):
        profile = SechSquared(offset=1.5, amplitude=-2.0)

        assert profile.limit(-1) == 1.5
        assert profile(0.0) == pytest.approx(-0.5)

    def test_diagonal_coefficient(self):
        """Test that a diagonal coefficient evaluates each profile on its slot."""
        V = MatrixCoefficient.diagonal([Constant(value=1.0), Constant(value=5.0)])

        np.testing.assert_array_equal(V.value(0.3), np.diag([1.0, 5.0]))
        assert V.n == 2

    def test_asymmetric_table_rejected(self):
        """Test that a non-symmetric table fails the symmetry check."""
        with pytest.raises(AssumptionViolationError, match="symmetric"):
            MatrixCoefficient([[Constant(value=0.0), Constant(value=1.0)], [None, Constant(value=0.0)]])

    def test_tabulated_from_csv(self, temp_dir):
        """Test that a CSV with a header row loads and is constant beyond the table."""
        path = temp_dir / "well.csv"
        rows = ["x,V"] + [f"{x},{-np.exp(-x * x)}" for x in np.linspace(-5, 5, 41)]
        path.write_text("\n".join(rows), encoding="utf-8")

        profile = Tabulated.from_csv(path)

        assert profile(0.0) == pytest.approx(-1.0, abs=1e-3)
        assert profile(50.0) == pytest.approx(profile.limit(1))
        assert profile.support == (-5.0, 5.0)

    def test_tabulated_needs_increasing_x(self):
        with pytest.raises(ContractViolationError, match="strictly increasing"):
            Tabulated([0.0, 1.0, 1.0, 2.0], [0.0, 0.0, 0.0, 0.0])


class TestSturmLiouville:
    """Tests for Sturm-Liouville systems."""

    def test_B_at_center(self, sech_well):
        """Test that V = -2 sech^2 x at x = 0, lambda = 0 gives B = diag(2, 1)."""
        np.testing.assert_allclose(sech_well.B(0.0, 0.0), np.diag([2.0, 1.0]))

    def test_B_lambda(self, sech_well):
        np.testing.assert_allclose(sech_well.B_lambda(1.0, -0.5), np.diag([1.0, 0.0]))

    def test_kappa(self, free_system):
        assert free_system.kappa == 0.0

    def test_kappa_of_diagonal_endstates(self):
        """Test that kappa is the smallest endstate eigenvalue."""
        V = MatrixCoefficient.diagonal([Constant(value=1.0), Constant(value=5.0)])
        one = MatrixCoefficient.scalar(Constant(value=1.0), 2)
        system = sl_to_hamiltonian(SturmLiouvilleSystem(P=one, V=V, Q=one))

        assert system.kappa == pytest.approx(1.0)

    def test_left_shelf_floor(self, sech_well):
        """Test that C_V = 2, theta_Q = 1 gives the floor -2.1."""
        assert sech_well.constants.C_V == pytest.approx(2.0)
        assert left_shelf_bound(sech_well) == pytest.approx(-2.1)

    def test_nonpositive_P_rejected(self):
        """Test that P with a negative eigenvalue fails the positivity check."""
        with pytest.raises(AssumptionViolationError, match="positivity"):
            sl_to_hamiltonian(SturmLiouvilleSystem(P=scalar(-1.0), V=scalar(0.0), Q=scalar(1.0)))

    def test_sizes_must_agree(self):
        with pytest.raises(ContractViolationError, match="share one size"):
            SturmLiouvilleSystem(P=scalar(1.0), V=MatrixCoefficient.scalar(Constant(), 2), Q=scalar(1.0))


class TestTravelingWave:
    """Tests for traveling-wave systems."""

    def test_B(self):
        """Test that s = 1, V = 0, lambda = -1 gives B = [[-1, 1/2], [1/2, 1]]."""
        system = traveling_to_hamiltonian(TravelingWaveSystem(V=scalar(0.0), s=1.0))

        np.testing.assert_allclose(system.B(3.0, -1.0), [[-1.0, 0.5], [0.5, 1.0]])
        assert system.source.shift == pytest.approx(0.25)

    def test_B_is_symmetric(self):
        system = traveling_to_hamiltonian(TravelingWaveSystem(V=MatrixCoefficient.scalar(poschl_teller(1)), s=2.0))
        B = system.B(0.4, -1.5)

        np.testing.assert_allclose(B, B.conj().T)

    def test_infinite_speed_rejected(self):
        with pytest.raises(ContractViolationError):
            TravelingWaveSystem(V=scalar(0.0), s=float("inf"))

    def test_kappa(self):
        system = traveling_to_hamiltonian(TravelingWaveSystem(V=scalar(0.0), s=1.0))
        assert system.kappa == 0.0


class TestFourthOrder:
    """Tests for fourth-order systems."""

    def test_half_dimension_doubles(self):
        system = fourth_to_hamiltonian(FourthOrderSystem(V=scalar(0.0)))

        assert system.n == 2
        assert system.B(0.0, -1.0).shape == (4, 4)
        assert system.kind == "fourth-order"

    def test_B_lambda_is_leading_block(self):
        system = fourth_to_hamiltonian(FourthOrderSystem(V=scalar(0.0)))
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0

        np.testing.assert_array_equal(system.B_lambda(0.0, -1.0), expected)

    def test_unequal_endstates_unsupported(self):
        """Test that heteroclinic endstates are rejected."""
        V = CallableCoefficient(lambda x: np.array([[np.tanh(x)]]), minus=[[-1.0]], plus=[[1.0]])

        with pytest.raises(UnsupportedConfigurationError, match="equal endstates"):
            fourth_to_hamiltonian(FourthOrderSystem(V=V))

    def test_target_is_lagrangian_plane(self):
        system = fourth_to_hamiltonian(FourthOrderSystem(V=scalar(0.0)))
        target = system.monotone_target()

        np.testing.assert_array_equal(target.stacked[:, 0], [0, 0, 1, 0])
        np.testing.assert_array_equal(target.stacked[:, 1], [0, 1, 0, 0])

    def test_kappa_and_floor(self):
        V = MatrixCoefficient.scalar(SechSquared(offset=1.0, amplitude=-3.0))
        system = fourth_to_hamiltonian(FourthOrderSystem(V=V, V_norm=2.0))

        assert system.kappa == pytest.approx(1.0)
        assert system.left_shelf_floor() == pytest.approx(-2.1)


class TestDifferentialAlgebraic:
    """Tests for differential-algebraic reduction."""

    def test_reduced_potential(self, da_constant):
        """Test that V11 = 0, V12 = 1, V22 = 2 at lambda = 0 reduces to -1/2."""
        np.testing.assert_allclose(da_constant.reduced_potential(0.0, 0.0), [[-0.5]])
        np.testing.assert_allclose(da_constant.reduced_potential_derivative(0.0, 0.0), [[-0.25]])

    def test_sufficient_bound(self, da_constant):
        """Test that the quadratic bound is 1 - sqrt(2)."""
        assert quadratic_bound(0.0, 2.0, 1.0) == pytest.approx(1.0 - np.sqrt(2.0))
        assert da_constant.source.sufficient_bound() == pytest.approx(1.0 - np.sqrt(2.0))

    def test_admissible_edge(self, da_constant):
        """Test that the bisected edge matches the quadratic bound for constant blocks."""
        data = da_constant.essential_spectrum()

        assert data.kappa == pytest.approx(1.0 - np.sqrt(2.0), abs=1e-9)
        assert data.excluded_ranges[0].contains(2.0)

    def test_excluded_range_rejected(self, da_constant):
        with pytest.raises(AdmissibilityError, match="excluded ranges") as info:
            da_constant.B(0.0, 2.0)
        assert info.value.ranges

    def test_reduce_checks_lambda(self):
        system = DASystem(P11=scalar(1.0), V11=scalar(0.0), V12=scalar(1.0), V22=scalar(2.0))
        with pytest.raises(AdmissibilityError):
            da_reduce(system, lam=2.0)

    def test_block_sizes_checked(self):
        with pytest.raises(ContractViolationError, match="block sizes"):
            DASystem(
                P11=scalar(1.0),
                V11=MatrixCoefficient.scalar(Constant(), 2),
                V12=scalar(1.0),
                V22=scalar(2.0),
            )

    def test_B_lambda_exceeds_identity(self, da_constant):
        """Test that B_lambda = diag(I - V_lam, 0) is at least the identity block."""
        assert da_constant.B_lambda(0.0, -1.0)[0, 0].real >= 1.0


class TestSystemFactory:
    """Tests for build_system."""

    def test_builds_sturm_liouville(self, sl_config_dict):
        config = RunConfig.model_validate(sl_config_dict)

        system = build_system(config.system)

        assert system.kind == "sturm-liouville"
        np.testing.assert_allclose(system.B(0.0, 0.0), np.diag([2.0, 1.0]))

    def test_builds_differential_algebraic(self):
        config = RunConfig.model_validate(
            {
                "system": {
                    "kind": "differential_algebraic",
                    "V11": {"family": "constant"},
                    "V12": {"family": "constant", "value": 1.0},
                    "V22": {"family": "constant", "value": 2.0},
                }
            }
        )

        system = build_system(config.system)

        assert system.kind == "differential-algebraic"
        assert system.kappa == pytest.approx(1.0 - np.sqrt(2.0), abs=1e-9)

    def test_tabulated_path_is_relative(self, temp_dir):
        """Test that tabulated coefficients resolve against the config directory."""
        rows = [f"{x},{-2.0 / np.cosh(x) ** 2}" for x in np.linspace(-10, 10, 201)]
        (temp_dir / "V.csv").write_text("\n".join(rows), encoding="utf-8")
        config = RunConfig.model_validate(
            {"system": {"kind": "sturm_liouville", "V": {"family": "tabulated", "path": "V.csv"}}}
        )

        system = build_system(config.system, base_dir=temp_dir)

        assert system.B(0.0, 0.0)[0, 0].real == pytest.approx(2.0, abs=1e-6)
        assert system.support_hint() == (-10.0, 10.0)

    def test_diagonal_length_checked(self):
        config = RunConfig.model_validate(
            {
                "system": {
                    "kind": "sturm_liouville",
                    "n": 2,
                    "V": {"diagonal": [{"family": "constant"}]},
                }
            }
        )
        with pytest.raises(ContractViolationError, match="does not fit"):
            build_system(config.system)

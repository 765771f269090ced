"""Construction of Hamiltonian systems from run configs."""

import logging
from pathlib import Path

from maslov_count.core.errors import ContractViolationError
from maslov_count.models.config import (
    AlgebraicProfile,
    CoefficientSpec,
    ConstantProfile,
    DifferentialAlgebraicConfig,
    FourthOrderConfig,
    GaussianWellProfile,
    PoschlTellerProfile,
    SechProfile,
    SechSquaredProfile,
    SturmLiouvilleConfig,
    TabulatedProfile,
    TravelingWaveConfig,
)
from maslov_count.services.coefficients import (
    Algebraic,
    Constant,
    GaussianWell,
    MatrixCoefficient,
    ScalarProfile,
    Sech,
    SechSquared,
    Tabulated,
    poschl_teller,
)
from maslov_count.services.differential_algebraic import DASystem, da_reduce
from maslov_count.services.fourth_order import FourthOrderSystem, fourth_to_hamiltonian
from maslov_count.services.hamiltonian import HamiltonianSystemBase
from maslov_count.services.sturm_liouville import SturmLiouvilleSystem, sl_to_hamiltonian
from maslov_count.services.traveling_wave import TravelingWaveSystem, traveling_to_hamiltonian

logger = logging.getLogger(__name__)


def build_profile(spec, base_dir: Path | None = None) -> ScalarProfile:
    """Scalar profile for one family spec; tabulated paths resolve against base_dir."""
    match spec:
        case ConstantProfile():
            return Constant(offset=spec.offset, value=spec.value)
        case PoschlTellerProfile():
            return poschl_teller(spec.m, offset=spec.offset)
        case SechSquaredProfile():
            return SechSquared(offset=spec.offset, amplitude=spec.amplitude, width=spec.width)
        case SechProfile():
            return Sech(offset=spec.offset, amplitude=spec.amplitude)
        case GaussianWellProfile():
            return GaussianWell(offset=spec.offset, depth=spec.depth, width=spec.width)
        case AlgebraicProfile():
            return Algebraic(offset=spec.offset, amplitude=spec.amplitude, power=spec.power)
        case TabulatedProfile():
            path = spec.path if spec.path.is_absolute() or base_dir is None else base_dir / spec.path
            return Tabulated.from_csv(path, offset=spec.offset)
    raise ContractViolationError(f"unknown coefficient family {spec!r}")


def build_coefficient(
    spec: CoefficientSpec,
    shape: tuple[int, int],
    base_dir: Path | None = None,
    symmetric: bool = True,
) -> MatrixCoefficient:
    """
    Matrix coefficient of the given shape.

    A single profile fills the diagonal of a square shape, or every entry of a
    rectangular coupling block.

    Raises:
        ContractViolationError: If the spec does not fit the shape
    """
    rows, cols = shape
    if spec.profile is not None:
        profile = build_profile(spec.profile, base_dir)
        if symmetric:
            return MatrixCoefficient([[profile if i == j else None for j in range(cols)] for i in range(rows)])
        return MatrixCoefficient([[profile] * cols for _ in range(rows)], symmetric=False)
    if spec.diagonal is not None:
        if rows != cols or len(spec.diagonal) != rows:
            raise ContractViolationError(f"diagonal of length {len(spec.diagonal)} does not fit shape {shape}")
        return MatrixCoefficient.diagonal([build_profile(p, base_dir) for p in spec.diagonal])
    table = spec.matrix
    if len(table) != rows or any(len(row) != cols for row in table):
        raise ContractViolationError(f"matrix entries do not fit shape {shape}")
    entries = [[build_profile(p, base_dir) if p is not None else None for p in row] for row in table]
    return MatrixCoefficient(entries, symmetric=symmetric)


def build_system(config, base_dir: Path | None = None) -> HamiltonianSystemBase:
    """
    Hamiltonian form of the configured system.

    Raises:
        ContractViolationError: If coefficient shapes disagree
        AssumptionViolationError: If a structural bound fails
        UnsupportedConfigurationError: For fourth-order systems with unequal endstates
    """
    match config:
        case SturmLiouvilleConfig():
            square = (config.n, config.n)
            system = sl_to_hamiltonian(
                SturmLiouvilleSystem(
                    P=build_coefficient(config.P, square, base_dir),
                    V=build_coefficient(config.V, square, base_dir),
                    Q=build_coefficient(config.Q, square, base_dir),
                    theta_P=config.theta_P,
                    theta_Q=config.theta_Q,
                    C_V=config.C_V,
                )
            )
        case TravelingWaveConfig():
            system = traveling_to_hamiltonian(
                TravelingWaveSystem(
                    V=build_coefficient(config.V, (config.n, config.n), base_dir), s=config.s, C_V=config.C_V
                )
            )
        case FourthOrderConfig():
            system = fourth_to_hamiltonian(
                FourthOrderSystem(V=build_coefficient(config.V, (config.n, config.n), base_dir), V_norm=config.V_norm)
            )
        case DifferentialAlgebraicConfig():
            m, k = config.m, config.k
            system = da_reduce(
                DASystem(
                    P11=build_coefficient(config.P11, (m, m), base_dir),
                    V11=build_coefficient(config.V11, (m, m), base_dir),
                    V12=build_coefficient(config.V12, (m, k), base_dir, symmetric=False),
                    V22=build_coefficient(config.V22, (k, k), base_dir),
                    range_margin=config.range_margin,
                )
            )
        case _:
            raise ContractViolationError(f"unknown system config {type(config).__name__}")
    logger.info("Built %s system with half-dimension %d", system.kind, system.n)
    return system

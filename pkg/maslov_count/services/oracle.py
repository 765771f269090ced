"""Finite-difference reference counts.

Each operator class is discretized on [-L, L] with Dirichlet conditions
(clamped for fourth order) and solved densely. Used only to validate the
Maslov counts.
"""

import logging
from functools import singledispatch

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field

from maslov_count.core.errors import ContractViolationError, OracleUnconvergedError
from maslov_count.services.differential_algebraic import DASystem
from maslov_count.services.fourth_order import FourthOrderSystem
from maslov_count.services.sturm_liouville import SturmLiouvilleSystem
from maslov_count.services.traveling_wave import TravelingWaveSystem

logger = logging.getLogger(__name__)

OUTER_FRACTION = 0.1
OUTER_MASS = 0.01


class DiscretizationSpec(BaseModel):
    """Grid for the reference eigensolve."""

    L: float = Field(default=20.0, gt=0, description="Half-width of the domain")
    N: int = Field(default=400, ge=200, description="Interior grid points")
    scheme: str = Field(default="auto", description="central | fourth-difference | auto")
    bc: str = Field(default="dirichlet")

    model_config = ConfigDict(frozen=True)

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.N + 1)

    def points(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, self.N + 2)[1:-1]

    def refined(self) -> "DiscretizationSpec":
        """(L, N) -> (1.5 L, 2 N)."""
        return self.model_copy(update={"L": 1.5 * self.L, "N": 2 * self.N})


def _second_difference(P, xs: np.ndarray, h: float) -> np.ndarray:
    """Matrix of -(P phi')' with P evaluated at the half points."""
    n = P.n
    size = len(xs) * n
    K = np.zeros((size, size))
    halves = [P.value(x - 0.5 * h) for x in xs] + [P.value(xs[-1] + 0.5 * h)]
    for i in range(len(xs)):
        block = slice(i * n, (i + 1) * n)
        K[block, block] = (halves[i] + halves[i + 1]) / h**2
        if i + 1 < len(xs):
            right = slice((i + 1) * n, (i + 2) * n)
            K[block, right] = -halves[i + 1] / h**2
            K[right, block] = -halves[i + 1].T / h**2
    return K


def _block_diagonal(coefficient, xs: np.ndarray) -> np.ndarray:
    return scipy.linalg.block_diag(*[coefficient.value(x) for x in xs])


@singledispatch
def discretize(source, spec: DiscretizationSpec) -> tuple[np.ndarray, np.ndarray | None, int]:
    """
    Symmetric matrices (A, M) with A v = lam M v, M = None for the identity.

    Returns:
        (A, M, components per grid point)
    """
    raise ContractViolationError(f"no discretization for {type(source).__name__}")


@discretize.register
def _(source: SturmLiouvilleSystem, spec: DiscretizationSpec):
    xs = spec.points()
    A = _second_difference(source.P, xs, spec.h) + _block_diagonal(source.V, xs)
    return A, _block_diagonal(source.Q, xs), source.n


@discretize.register
def _(source: TravelingWaveSystem, spec: DiscretizationSpec):
    # conjugated operator -d^2 + V + s^2/4, similar to H_s under Dirichlet conditions
    xs = spec.points()
    n = source.n
    laplacian = _laplacian(len(xs), spec.h)
    A = np.kron(laplacian, np.eye(n)) + _block_diagonal(source.V, xs) + source.shift * np.eye(len(xs) * n)
    return A, None, n


@discretize.register
def _(source: FourthOrderSystem, spec: DiscretizationSpec):
    xs = spec.points()
    n = source.n
    size = len(xs)
    stencil = np.zeros((size, size))
    for offset, weight in ((0, 6.0), (1, -4.0), (2, 1.0)):
        diagonal = np.full(size - offset, weight)
        stencil += np.diag(diagonal, offset)
        if offset:
            stencil += np.diag(diagonal, -offset)
    # clamped ends: phi = 0 and the ghost value phi_{-1} = phi_1
    stencil[0, 0] = stencil[-1, -1] = 7.0
    A = np.kron(stencil / spec.h**4, np.eye(n)) + _block_diagonal(source.V, xs)
    return A, None, n


@discretize.register
def _(source: DASystem, spec: DiscretizationSpec):
    # full algebraic formulation: linear in lam, components ordered (phi1, phi2) per point
    xs = spec.points()
    m, n = source.m, source.n
    K = _second_difference(source.P11, xs, spec.h)
    A = np.zeros((len(xs) * n, len(xs) * n))
    for i, x in enumerate(xs):
        full = source.full_potential(x)
        block = slice(i * n, (i + 1) * n)
        A[block, block] = full
        for j in range(max(0, i - 1), min(len(xs), i + 2)):
            A[i * n : i * n + m, j * n : j * n + m] += K[i * m : (i + 1) * m, j * m : (j + 1) * m]
    return A, None, n


def _laplacian(size: int, h: float) -> np.ndarray:
    return (2.0 * np.eye(size) - np.eye(size, k=1) - np.eye(size, k=-1)) / h**2


def _screened(values: np.ndarray, vectors: np.ndarray, spec: DiscretizationSpec, components: int, M) -> np.ndarray:
    """Drop eigenvectors with more than 1% of their mass in the outer 10% of the grid."""
    xs = np.repeat(spec.points(), components)
    outer = np.abs(xs) > (1.0 - OUTER_FRACTION) * spec.L
    keep = []
    for k in range(len(values)):
        v = vectors[:, k]
        weighted = np.abs(v.conj() * (M @ v if M is not None else v))
        share = weighted[outer].sum() / weighted.sum()
        if share <= OUTER_MASS:
            keep.append(k)
        else:
            logger.debug("Screened boundary mode at %.8g (outer mass %.2e)", values[k], share)
    return values[keep]


def oracle_eigenvalues(
    system, spec: DiscretizationSpec | None = None, window: tuple[float, float] | None = None
) -> np.ndarray:
    """
    Screened eigenvalues of the discretized operator, ascending.

    Args:
        system: A system description or its Hamiltonian form
        spec: Grid
        window: (low, high); eigenvalues in [low, high) are returned

    Returns:
        Array of eigenvalues
    """
    spec = spec or DiscretizationSpec()
    source = getattr(system, "source", system)
    A, M, components = discretize(source, spec)
    A = 0.5 * (A + A.T)
    low, high = window if window is not None else (-np.inf, np.inf)
    values, vectors = scipy.linalg.eigh(A, M)
    inside = (values >= low) & (values < high)
    return _screened(values[inside], vectors[:, inside], spec, components, M)


def traveling_nonsymmetric_eigenvalues(
    system, spec: DiscretizationSpec | None = None, window: tuple[float, float] | None = None
) -> np.ndarray:
    """
    Eigenvalues of H_s = -d^2 - s d + V discretized with central differences.

    Real parts in the window are returned for eigenvalues whose imaginary part
    is negligible.
    """
    spec = spec or DiscretizationSpec()
    source = getattr(system, "source", system)
    if not isinstance(source, TravelingWaveSystem):
        raise ContractViolationError("the nonsymmetric discretization applies to traveling waves only")
    xs = spec.points()
    n = source.n
    size = len(xs)
    drift = (np.eye(size, k=1) - np.eye(size, k=-1)) / (2.0 * spec.h)
    H = np.kron(_laplacian(size, spec.h) - source.s * drift, np.eye(n)) + _block_diagonal(source.V, xs)
    values = scipy.linalg.eigvals(H)
    real = values[np.abs(values.imag) < 1e-8 * np.maximum(1.0, np.abs(values))].real
    low, high = window if window is not None else (-np.inf, np.inf)
    return np.sort(real[(real >= low) & (real < high)])


def oracle_count(
    system,
    lam1: float | None,
    lam2: float,
    spec: DiscretizationSpec | None = None,
    c: float | None = None,
) -> int:
    """
    Number of eigenvalues in [lam1, lam2), checked under (L, N) -> (1.5 L, 2 N).

    Args:
        system: A system description or its Hamiltonian form
        lam1: Lower end, None for -infinity
        lam2: Upper end
        spec: Grid (default L = 20, N = 400)
        c: Truncation half-width of the Maslov computation being checked;
            L must be at least 2c

    Raises:
        ContractViolationError: If L < 2c
        OracleUnconvergedError: If refinement changes the count
    """
    spec = spec or DiscretizationSpec()
    if c is not None and spec.L < 2.0 * c:
        raise ContractViolationError(f"oracle half-width L={spec.L} is below 2c={2.0 * c}")
    low = -np.inf if lam1 is None else lam1
    counts = []
    for grid in (spec, spec.refined()):
        counts.append(len(oracle_eigenvalues(system, grid, (low, lam2))))
        logger.info("Oracle count on L=%.4g N=%d: %d in [%s, %.8g)", grid.L, grid.N, counts[-1], lam1, lam2)
    if counts[0] != counts[1]:
        raise OracleUnconvergedError(
            f"count changed from {counts[0]} to {counts[1]} under refinement of L={spec.L}, N={spec.N}"
        )
    return counts[0]

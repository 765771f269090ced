"""Sturm-Liouville systems -(P phi')' + V phi = lam Q phi in the variables y = (phi; P phi')."""

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from maslov_count.core.config import get_settings
from maslov_count.core.errors import AssumptionViolationError, ContractViolationError
from maslov_count.interfaces.coefficient import Coefficient
from maslov_count.models.asymptotics import AsymptoticFrames
from maslov_count.models.spectral import DecayProfile, EssentialSpectrumData
from maslov_count.services.asymptotics import sl_asymptotic_frames, sl_kappa
from maslov_count.services.hamiltonian import HamiltonianSystemBase

logger = logging.getLogger(__name__)

SAFETY_FACTOR = 1.05
UNBOUNDED = 1e12


def sample_grid(coefficients: list[Coefficient], window: float = 12.0, count: int = 241) -> np.ndarray:
    """Uniform samples on [-window, window] joined with any tabulated supports."""
    points = np.linspace(-window, window, count)
    for coefficient in coefficients:
        hint = coefficient.support_hint()
        if hint is not None:
            points = np.union1d(points, np.linspace(hint[0], hint[1], count))
    return points


def sampled_extremes(coefficient: Coefficient, xs: np.ndarray) -> tuple[float, float, float]:
    """(min eigenvalue, max eigenvalue, max spectral norm) over samples and both endstates."""
    values = [coefficient.value(x) for x in xs]
    values += [coefficient.limit(-1), coefficient.limit(1)]
    lowest = min(float(np.linalg.eigvalsh(v)[0]) for v in values)
    highest = max(float(np.linalg.eigvalsh(v)[-1]) for v in values)
    norm = max(float(np.linalg.norm(v, 2)) for v in values)
    return lowest, highest, norm


@dataclass(frozen=True)
class SturmLiouvilleConstants:
    """Positivity and boundedness constants; sampled unless given explicitly."""

    theta_P: float
    theta_Q: float
    C_V: float


@dataclass(frozen=True)
class SturmLiouvilleSystem:
    """Coefficient data of a Sturm-Liouville system.

    ``theta_P``, ``theta_Q`` and ``C_V`` override the sampled estimates.
    """

    P: Coefficient
    V: Coefficient
    Q: Coefficient
    theta_P: float | None = None
    theta_Q: float | None = None
    C_V: float | None = None
    sample_window: float = 12.0
    sample_count: int = 241
    samples: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        sizes = {self.P.n, self.V.n, self.Q.n}
        if len(sizes) != 1:
            raise ContractViolationError(f"P, V, Q must share one size, got {sorted(sizes)}")
        object.__setattr__(
            self,
            "samples",
            sample_grid([self.P, self.V, self.Q], self.sample_window, self.sample_count),
        )

    @property
    def n(self) -> int:
        return self.P.n

    def constants(self) -> SturmLiouvilleConstants:
        """
        Check the positivity bounds on the sample grid and return the constants.

        Raises:
            AssumptionViolationError: If P or Q fails to be positive definite, or V
                looks unbounded and C_V was not supplied
        """
        theta_P = self.theta_P
        if theta_P is None:
            theta_P = sampled_extremes(self.P, self.samples)[0]
        theta_Q = self.theta_Q
        if theta_Q is None:
            theta_Q = sampled_extremes(self.Q, self.samples)[0]
        if theta_P <= 0:
            raise AssumptionViolationError("positivity", f"P is not uniformly positive (min eigenvalue {theta_P:.3e})")
        if theta_Q <= 0:
            raise AssumptionViolationError("positivity", f"Q is not uniformly positive (min eigenvalue {theta_Q:.3e})")
        C_V = self.C_V
        if C_V is None:
            C_V = sampled_extremes(self.V, self.samples)[2]
            if not np.isfinite(C_V) or C_V > UNBOUNDED:
                raise AssumptionViolationError(
                    "positivity", "V appears unbounded on the sample grid; supply C_V explicitly"
                )
        return SturmLiouvilleConstants(theta_P=float(theta_P), theta_Q=float(theta_Q), C_V=float(C_V))


class SturmLiouvilleHamiltonian(HamiltonianSystemBase):
    """B(x; lam) = diag(lam Q - V, P^{-1}) with B_lam = diag(Q, 0)."""

    kind = "sturm-liouville"

    def __init__(self, source: SturmLiouvilleSystem):
        super().__init__(source.sample_window, source.sample_count)
        self.source = source
        self.constants = source.constants()
        self._P = source.P
        self._V = source.V
        self._Q = source.Q

    @property
    def n(self) -> int:
        return self.source.n

    def _assemble(self, P, V, Q, lam):
        zero = np.zeros((self.n, self.n))
        return np.block([[lam * Q - V, zero], [zero, np.linalg.inv(P)]]).astype(complex)

    def B(self, x: float, lam: float) -> np.ndarray:
        return self._assemble(self._P.value(x), self._V.value(x), self._Q.value(x), lam)

    def B_lambda(self, x: float, lam: float) -> np.ndarray:
        zero = np.zeros((self.n, self.n))
        return np.block([[self._Q.value(x), zero], [zero, zero]]).astype(complex)

    def B_limit(self, side: Literal[-1, 1], lam: float) -> np.ndarray:
        return self._assemble(self._P.limit(side), self._V.limit(side), self._Q.limit(side), lam)

    def asymptotic_frames(self, lam: float) -> AsymptoticFrames:
        return sl_asymptotic_frames(
            self._P.limit(-1),
            self._V.limit(-1),
            self._Q.limit(-1),
            self._P.limit(1),
            self._V.limit(1),
            self._Q.limit(1),
            lam,
        )

    def essential_spectrum(self) -> EssentialSpectrumData:
        kappa = sl_kappa(self._V.limit(-1), self._V.limit(1), self._Q.limit(-1), self._Q.limit(1))
        return EssentialSpectrumData(kappa=kappa)

    def left_shelf_floor(self, lam_max: float | None = None) -> float:
        """-C_V / theta_Q with a 5% margin; below it the Dirichlet shelf has no conjugate points."""
        floor = -SAFETY_FACTOR * self.constants.C_V / self.constants.theta_Q
        ceiling = self.kappa - 2 * get_settings().hyperbolicity_margin
        return float(min(floor, ceiling))

    def decay(self) -> DecayProfile:
        return self._P.decay().combine(self._V.decay()).combine(self._Q.decay())

    def support_hint(self) -> tuple[float, float] | None:
        spans = [c.support_hint() for c in (self._P, self._V, self._Q)]
        spans = [s for s in spans if s is not None]
        if not spans:
            return None
        return min(s[0] for s in spans), max(s[1] for s in spans)


def sl_to_hamiltonian(system: SturmLiouvilleSystem) -> SturmLiouvilleHamiltonian:
    """
    Build the first-order Hamiltonian form of a Sturm-Liouville system.

    Raises:
        AssumptionViolationError: If the positivity bounds fail
    """
    hamiltonian = SturmLiouvilleHamiltonian(system)
    constants = hamiltonian.constants
    logger.debug(
        "Sturm-Liouville system n=%d: theta_P=%.4g theta_Q=%.4g C_V=%.4g",
        system.n,
        constants.theta_P,
        constants.theta_Q,
        constants.C_V,
    )
    return hamiltonian


def p_orthonormality_residual(R: np.ndarray, P: np.ndarray) -> float:
    """Max-abs entry of R* P R - I."""
    return float(np.max(np.abs(R.conj().T @ P @ R - np.eye(R.shape[1]))))


"""Traveling-wave Schrodinger operators H_s = -d^2/dx^2 - s d/dx + V.

The system is written in the weighted variables zeta = e^{(s/2)x} y, which
turns H_s into a Hamiltonian system whose decaying solutions are those of the
conjugated operator -d^2/dx^2 + V + s^2/4.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from maslov_count.core.config import get_settings
from maslov_count.core.errors import ContractViolationError
from maslov_count.interfaces.coefficient import Coefficient
from maslov_count.models.asymptotics import AsymptoticFrames
from maslov_count.models.spectral import DecayProfile, EssentialSpectrumData
from maslov_count.services.asymptotics import invariant_frames
from maslov_count.services.hamiltonian import HamiltonianSystemBase
from maslov_count.services.sturm_liouville import SAFETY_FACTOR, sample_grid, sampled_extremes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TravelingWaveSystem:
    """Potential V and wave speed s."""

    V: Coefficient
    s: float = 0.0
    C_V: float | None = None
    sample_window: float = 12.0
    sample_count: int = 241
    samples: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not np.isfinite(self.s):
            raise ContractViolationError(f"wave speed must be finite, got {self.s}")
        object.__setattr__(self, "samples", sample_grid([self.V], self.sample_window, self.sample_count))

    @property
    def n(self) -> int:
        return self.V.n

    @property
    def shift(self) -> float:
        """s^2/4, the offset between H_s and the self-adjoint conjugate."""
        return self.s**2 / 4.0


class TravelingWaveHamiltonian(HamiltonianSystemBase):
    """B = [[lam I - V, (s/2) I], [(s/2) I, I]] with B_lam = diag(I, 0)."""

    kind = "traveling-wave"

    def __init__(self, source: TravelingWaveSystem):
        super().__init__(source.sample_window, source.sample_count)
        self.source = source
        self._V = source.V
        self._C_V = source.C_V if source.C_V is not None else sampled_extremes(source.V, source.samples)[2]

    @property
    def n(self) -> int:
        return self.source.n

    def _assemble(self, V: np.ndarray, lam: float) -> np.ndarray:
        eye = np.eye(self.n)
        half_speed = 0.5 * self.source.s * eye
        return np.block([[lam * eye - V, half_speed], [half_speed, eye]]).astype(complex)

    def B(self, x: float, lam: float) -> np.ndarray:
        return self._assemble(self._V.value(x), lam)

    def B_lambda(self, x: float, lam: float) -> np.ndarray:
        zero = np.zeros((self.n, self.n))
        return np.block([[np.eye(self.n), zero], [zero, zero]]).astype(complex)

    def B_limit(self, side: Literal[-1, 1], lam: float) -> np.ndarray:
        return self._assemble(self._V.limit(side), lam)

    def asymptotic_frames(self, lam: float) -> AsymptoticFrames:
        self.check_admissible(lam)
        return invariant_frames(self.A_limit(-1, lam), self.A_limit(1, lam), lam)

    def essential_spectrum(self) -> EssentialSpectrumData:
        kappa = min(float(np.linalg.eigvalsh(self._V.limit(side))[0]) for side in (-1, 1))
        return EssentialSpectrumData(kappa=kappa)

    def left_shelf_floor(self, lam_max: float | None = None) -> float:
        floor = -SAFETY_FACTOR * self._C_V
        return float(min(floor, self.kappa - 2 * get_settings().hyperbolicity_margin))

    def decay(self) -> DecayProfile:
        return self._V.decay()

    def support_hint(self) -> tuple[float, float] | None:
        return self._V.support_hint()


def traveling_to_hamiltonian(system: TravelingWaveSystem) -> TravelingWaveHamiltonian:
    """Build the Hamiltonian form of H_s in the weighted variables."""
    hamiltonian = TravelingWaveHamiltonian(system)
    logger.debug("Traveling-wave system n=%d, s=%.4g", system.n, system.s)
    return hamiltonian

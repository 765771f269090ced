"""Fourth-order potential systems phi'''' + V phi = lam phi.

Variables y = (phi, phi'', -phi''', -phi'), so the half-dimension is 2n and the
natural target plane is {phi = 0, phi' = 0}.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from maslov_count.core.config import get_settings
from maslov_count.core.errors import UnsupportedConfigurationError
from maslov_count.interfaces.coefficient import Coefficient
from maslov_count.models.asymptotics import AsymptoticFrames
from maslov_count.models.frames import LagrangianFrame
from maslov_count.models.spectral import DecayProfile, EssentialSpectrumData
from maslov_count.services.asymptotics import fourth_asymptotic_frames, fourth_order_target
from maslov_count.services.hamiltonian import HamiltonianSystemBase
from maslov_count.services.sturm_liouville import SAFETY_FACTOR, sample_grid, sampled_extremes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FourthOrderSystem:
    """Self-adjoint potential V with a common endstate V_a at both ends."""

    V: Coefficient
    V_norm: float | None = None
    sample_window: float = 12.0
    sample_count: int = 241
    samples: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", sample_grid([self.V], self.sample_window, self.sample_count))

    @property
    def n(self) -> int:
        return self.V.n

    @property
    def V_a(self) -> np.ndarray:
        return self.V.limit(1)

    def endstate_nu(self) -> np.ndarray:
        """Eigenvalues nu_k of V_a, ascending."""
        return np.linalg.eigvalsh(self.V_a)


class FourthOrderHamiltonian(HamiltonianSystemBase):
    """4n x 4n system with B = blockdiag(lam I - V, I, [[0, -I], [-I, 0]]); B_lam is the leading block."""

    kind = "fourth-order"

    def __init__(self, source: FourthOrderSystem):
        super().__init__(source.sample_window, source.sample_count)
        if not np.allclose(source.V.limit(-1), source.V.limit(1), atol=1e-12):
            raise UnsupportedConfigurationError(
                "fourth-order systems need equal endstates V_- = V_+; heteroclinic endstates are not supported"
            )
        self.source = source
        self._V = source.V
        self.V_norm = (
            source.V_norm if source.V_norm is not None else sampled_extremes(source.V, source.samples)[2]
        )

    @property
    def n(self) -> int:
        return 2 * self.source.n

    def _assemble(self, V: np.ndarray, lam: float) -> np.ndarray:
        m = self.source.n
        eye = np.eye(m)
        zero = np.zeros((m, m))
        return np.block(
            [
                [lam * eye - V, zero, zero, zero],
                [zero, eye, zero, zero],
                [zero, zero, zero, -eye],
                [zero, zero, -eye, zero],
            ]
        ).astype(complex)

    def B(self, x: float, lam: float) -> np.ndarray:
        return self._assemble(self._V.value(x), lam)

    def B_lambda(self, x: float, lam: float) -> np.ndarray:
        m = self.source.n
        out = np.zeros((4 * m, 4 * m), dtype=complex)
        out[:m, :m] = np.eye(m)
        return out

    def B_limit(self, side: Literal[-1, 1], lam: float) -> np.ndarray:
        return self._assemble(self._V.limit(side), lam)

    def asymptotic_frames(self, lam: float) -> AsymptoticFrames:
        return fourth_asymptotic_frames(self.source.V_a, lam)

    def essential_spectrum(self) -> EssentialSpectrumData:
        return EssentialSpectrumData(kappa=float(self.source.endstate_nu()[0]))

    def monotone_target(self) -> LagrangianFrame:
        return fourth_order_target(self.source.n)

    def left_shelf_floor(self, lam_max: float | None = None) -> float:
        """-||V||_inf with a 5% margin."""
        floor = -SAFETY_FACTOR * self.V_norm
        return float(min(floor, self.kappa - 2 * get_settings().hyperbolicity_margin))

    def decay(self) -> DecayProfile:
        return self._V.decay()

    def support_hint(self) -> tuple[float, float] | None:
        return self._V.support_hint()


def fourth_to_hamiltonian(system: FourthOrderSystem) -> FourthOrderHamiltonian:
    """
    Build the Hamiltonian form of a fourth-order potential system.

    Raises:
        UnsupportedConfigurationError: If the endstates at -inf and +inf differ
    """
    hamiltonian = FourthOrderHamiltonian(system)
    logger.debug("Fourth-order system n=%d, ||V||=%.4g", system.n, hamiltonian.V_norm)
    return hamiltonian

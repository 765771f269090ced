"""Abstract interface for linear Hamiltonian systems J y' = B(x; lambda) y."""

from abc import abstractmethod
from typing import Literal, Protocol

import numpy as np

from maslov_count.models.asymptotics import AsymptoticFrames
from maslov_count.models.frames import LagrangianFrame
from maslov_count.models.spectral import DecayProfile, EssentialSpectrumData


class HamiltonianSystem(Protocol):
    """Protocol defining the contract every concrete system satisfies."""

    kind: str

    @property
    @abstractmethod
    def n(self) -> int:
        """Half-dimension of the first-order system."""
        ...

    @abstractmethod
    def B(self, x: float, lam: float) -> np.ndarray:
        """
        Evaluate the self-adjoint coefficient matrix.

        Args:
            x: Spatial point
            lam: Spectral parameter

        Returns:
            2n x 2n complex matrix B(x; lambda)
        """
        ...

    @abstractmethod
    def B_lambda(self, x: float, lam: float) -> np.ndarray:
        """Return the lambda-derivative of B at (x, lambda)."""
        ...

    @abstractmethod
    def B_limit(self, side: Literal[-1, 1], lam: float) -> np.ndarray:
        """Return the asymptotic limit of B as x tends to side * infinity."""
        ...

    @abstractmethod
    def asymptotic_frames(self, lam: float) -> AsymptoticFrames:
        """
        Build the decaying and growing asymptotic frames at lambda.

        Raises:
            EssentialSpectrumError: If lambda is not below the essential-spectrum edge
        """
        ...

    @abstractmethod
    def essential_spectrum(self) -> EssentialSpectrumData:
        """Return the essential-spectrum edge and admissibility data."""
        ...

    @abstractmethod
    def monotone_target(self) -> LagrangianFrame:
        """Return the fixed target plane against which crossings are monotone."""
        ...

    @abstractmethod
    def left_shelf_floor(self, lam_max: float | None = None) -> float:
        """Return a lambda below which no conjugate points occur."""
        ...

    @abstractmethod
    def decay(self) -> DecayProfile:
        """Return how fast B approaches its limits."""
        ...

    @abstractmethod
    def sample_points(self) -> np.ndarray:
        """Return the x-points used for sampled bounds and validation."""
        ...

"""Abstract interface for matrix-valued coefficient functions."""

from abc import abstractmethod
from typing import Literal, Protocol

import numpy as np

from maslov_count.models.spectral import DecayProfile


class Coefficient(Protocol):
    """Protocol for an n x n self-adjoint matrix function of x with limits at ±infinity."""

    @property
    @abstractmethod
    def n(self) -> int:
        """Matrix size."""
        ...

    @abstractmethod
    def value(self, x: float) -> np.ndarray:
        """
        Evaluate the coefficient.

        Args:
            x: Spatial point

        Returns:
            n x n matrix
        """
        ...

    @abstractmethod
    def limit(self, side: Literal[-1, 1]) -> np.ndarray:
        """Return the endstate as x tends to side * infinity."""
        ...

    @abstractmethod
    def decay(self) -> DecayProfile:
        """Return the approach rate to the endstates."""
        ...

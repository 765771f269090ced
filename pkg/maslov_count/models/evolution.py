"""Stored solutions of the frame equation."""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from maslov_count.models.frames import LagrangianFrame


@dataclass(frozen=True)
class EvolvedFramePath:
    """Frames of a solution plane on an ascending x-grid.

    ``frames[i]`` is the orthonormal 2n x n frame at ``xs[i]``; ``log_scale[i]``
    is the accumulated log |det R| of the QR rescalings between the starting
    point and ``xs[i]``, so the unnormalized solution has the same span and
    volume growth exp(log_scale). ``direction`` is +1 for a path integrated
    from -c and -1 for one integrated from +c.
    """

    system_kind: str
    lam: float
    c: float
    xs: np.ndarray
    frames: np.ndarray
    log_scale: np.ndarray
    direction: Literal[-1, 1]
    max_residual: float
    refinements: int = 0

    @property
    def n(self) -> int:
        return self.frames.shape[2]

    def __len__(self) -> int:
        return len(self.xs)

    def frame(self, index: int) -> LagrangianFrame:
        return LagrangianFrame.from_stacked(self.frames[index])

    @property
    def start(self) -> LagrangianFrame:
        """Frame at the point the integration started from."""
        return self.frame(0 if self.direction > 0 else -1)

    @property
    def end(self) -> LagrangianFrame:
        return self.frame(-1 if self.direction > 0 else 0)

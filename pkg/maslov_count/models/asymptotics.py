"""Value types produced by the asymptotic analysis."""

from dataclasses import dataclass

import numpy as np

from maslov_count.models.frames import LagrangianFrame


@dataclass(frozen=True)
class ModeSet:
    """Eigen-splitting of a hyperbolic asymptotic matrix.

    ``mu`` lists the stable exponents first (ascending real part, then imaginary
    part), followed by the unstable ones, each placed at the index of its
    partner -mu_k. Columns of ``r``
    match ``mu``; inside a cluster of repeated exponents they are an
    orthonormal basis of the invariant subspace.
    """

    mu: np.ndarray
    r: np.ndarray
    stable: np.ndarray
    unstable: np.ndarray

    @property
    def n(self) -> int:
        return len(self.stable)

    def stable_frame(self) -> LagrangianFrame:
        return LagrangianFrame.from_stacked(self.r[:, self.stable])

    def unstable_frame(self) -> LagrangianFrame:
        return LagrangianFrame.from_stacked(self.r[:, self.unstable])

    def gap(self) -> float:
        """Smallest unstable real part minus largest stable real part."""
        real = self.mu.real
        return float(real[self.unstable].min() - real[self.stable].max())


@dataclass(frozen=True)
class AsymptoticFrames:
    """Decaying and growing frames at both ends for one value of lambda.

    X_minus spans solutions decaying at -infinity, Xtilde_plus those decaying at
    +infinity; the ``_g`` frames span the complementary growing directions.
    ``D_*`` and ``R_*`` are the exponent and eigenvector blocks of the closed
    forms when a system class has one, otherwise None.
    """

    lam: float
    X_minus: LagrangianFrame
    Xtilde_plus: LagrangianFrame
    X_minus_g: LagrangianFrame
    Xtilde_plus_g: LagrangianFrame
    D_minus: np.ndarray | None = None
    D_plus: np.ndarray | None = None
    R_minus: np.ndarray | None = None
    R_plus: np.ndarray | None = None
    closed_form: bool = True

    @property
    def n(self) -> int:
        return self.X_minus.n

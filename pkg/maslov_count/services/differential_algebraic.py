"""Differential-algebraic Sturm-Liouville systems.

    -(P11 phi1')' + V11 phi1 + V12 phi2 = lam phi1
                     V12* phi1 + V22 phi2 = lam phi2

Eliminating phi2 leaves an m-component Sturm-Liouville problem with the
lambda-dependent effective potential V(x; lam) = V11 + V12 (lam - V22)^{-1} V12*.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from maslov_count.core.config import get_settings
from maslov_count.core.errors import (
    AdmissibilityError,
    AssumptionViolationError,
    ContractViolationError,
)
from maslov_count.interfaces.coefficient import Coefficient
from maslov_count.models.asymptotics import AsymptoticFrames
from maslov_count.models.spectral import DecayProfile, EssentialSpectrumData, ExcludedRange
from maslov_count.services.asymptotics import sl_asymptotic_frames
from maslov_count.services.hamiltonian import HamiltonianSystemBase
from maslov_count.services.sturm_liouville import SAFETY_FACTOR, sample_grid, sampled_extremes

logger = logging.getLogger(__name__)

RANGE_MARGIN = 1e-3


def quadratic_bound(kappa1: float, kappa2: float, rho: float) -> float:
    """Smaller root of (k - kappa1)(k - kappa2) = rho^2."""
    return 0.5 * ((kappa1 + kappa2) - np.sqrt((kappa1 - kappa2) ** 2 + 4.0 * rho**2))


@dataclass(frozen=True)
class DASystem:
    """Blocks P11 (m x m), V11 (m x m), V12 (m x (n - m)) and V22 ((n - m) x (n - m))."""

    P11: Coefficient
    V11: Coefficient
    V12: Coefficient
    V22: Coefficient
    range_margin: float = RANGE_MARGIN
    sample_window: float = 12.0
    sample_count: int = 241
    samples: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = self.P11.n
        k = self.V22.n
        if self.V11.n != m or tuple(self.V12.shape) != (m, k):
            raise ContractViolationError(
                f"block sizes disagree: P11 {m}x{m}, V11 {self.V11.n}, V12 {tuple(self.V12.shape)}, V22 {k}x{k}"
            )
        object.__setattr__(
            self,
            "samples",
            sample_grid([self.P11, self.V11, self.V12, self.V22], self.sample_window, self.sample_count),
        )

    @property
    def m(self) -> int:
        return self.P11.n

    @property
    def n(self) -> int:
        """Number of components of the full system."""
        return self.P11.n + self.V22.n

    def full_potential(self, x: float) -> np.ndarray:
        """The n x n matrix [[V11, V12], [V12*, V22]] at x."""
        V12 = self.V12.value(x)
        return np.block([[self.V11.value(x), V12], [V12.T, self.V22.value(x)]])

    def excluded_ranges(self) -> list[ExcludedRange]:
        """Sampled ranges of each eigenvalue branch nu_k(x) of V22, widened by the range margin."""
        values = [self.V22.value(x) for x in self.samples]
        values += [self.V22.limit(-1), self.V22.limit(1)]
        branches = np.array([np.linalg.eigvalsh(v) for v in values])
        return [
            ExcludedRange(
                lower=float(branches[:, k].min() - self.range_margin),
                upper=float(branches[:, k].max() + self.range_margin),
            )
            for k in range(branches.shape[1])
        ]

    def sufficient_bound(self) -> float:
        """Quadratic lower estimate of the admissible edge, minimized over both endstates."""
        bounds = []
        for side in (-1, 1):
            kappa1 = float(np.linalg.eigvalsh(self.V11.limit(side))[0])
            kappa2 = float(np.linalg.eigvalsh(self.V22.limit(side))[0])
            rho = float(np.linalg.norm(self.V12.limit(side), 2))
            bounds.append(quadratic_bound(kappa1, kappa2, rho))
        return float(min(bounds))


class DAHamiltonian(HamiltonianSystemBase):
    """
    Reduced system with B = diag(lam I - V(x; lam), P11^{-1}) and B_lam = diag(I - V_lam, 0).

    Evaluations of the effective potential are cached on (x, lam); the cache is
    shared by all threads of a sweep.
    """

    kind = "differential-algebraic"

    def __init__(self, source: DASystem, cache_size: int = 65536):
        super().__init__(source.sample_window, source.sample_count)
        self.source = source
        self.ranges = source.excluded_ranges()
        self._reduced = lru_cache(maxsize=cache_size)(self._compute_reduced)
        self._reduced_limit = lru_cache(maxsize=256)(self._compute_reduced_limit)
        self._essential: EssentialSpectrumData | None = None
        theta_P = sampled_extremes(source.P11, source.samples)[0]
        if theta_P <= 0:
            raise AssumptionViolationError("positivity", f"P11 is not uniformly positive (min eigenvalue {theta_P:.3e})")

    @property
    def n(self) -> int:
        return self.source.m

    def _resolvent_terms(self, V11, V12, V22, lam):
        resolvent = np.linalg.inv(lam * np.eye(V22.shape[0]) - V22)
        coupled = V12 @ resolvent
        potential = V11 + coupled @ V12.T
        derivative = -coupled @ resolvent @ V12.T
        return potential, derivative

    def _compute_reduced(self, x: float, lam: float):
        s = self.source
        return self._resolvent_terms(s.V11.value(x), s.V12.value(x), s.V22.value(x), lam)

    def _compute_reduced_limit(self, side: int, lam: float):
        s = self.source
        return self._resolvent_terms(s.V11.limit(side), s.V12.limit(side), s.V22.limit(side), lam)

    def reduced_potential(self, x: float, lam: float) -> np.ndarray:
        """V(x; lam) = V11 + V12 (lam - V22)^{-1} V12*."""
        return self._reduced(float(x), float(lam))[0]

    def reduced_potential_derivative(self, x: float, lam: float) -> np.ndarray:
        """V_lam(x; lam) = -V12 (lam - V22)^{-2} V12*, negative semidefinite."""
        return self._reduced(float(x), float(lam))[1]

    def require_outside_ranges(self, lam: float) -> None:
        offending = [r for r in self.ranges if r.contains(lam)]
        if offending:
            raise AdmissibilityError(
                f"lambda={lam} lies in excluded ranges "
                + ", ".join(f"[{r.lower:.6g}, {r.upper:.6g}]" for r in offending),
                ranges=[(r.lower, r.upper) for r in offending],
            )

    def _assemble(self, P11, potential, lam):
        zero = np.zeros((self.n, self.n))
        return np.block([[lam * np.eye(self.n) - potential, zero], [zero, np.linalg.inv(P11)]]).astype(complex)

    def B(self, x: float, lam: float) -> np.ndarray:
        self.require_outside_ranges(lam)
        return self._assemble(self.source.P11.value(x), self.reduced_potential(x, lam), lam)

    def B_lambda(self, x: float, lam: float) -> np.ndarray:
        self.require_outside_ranges(lam)
        zero = np.zeros((self.n, self.n))
        upper = np.eye(self.n) - self.reduced_potential_derivative(x, lam)
        return np.block([[upper, zero], [zero, zero]]).astype(complex)

    def B_limit(self, side: Literal[-1, 1], lam: float) -> np.ndarray:
        self.require_outside_ranges(lam)
        potential = self._reduced_limit(int(side), float(lam))[0]
        return self._assemble(self.source.P11.limit(side), potential, lam)

    def asymptotic_frames(self, lam: float) -> AsymptoticFrames:
        self.check_admissible(lam)
        eye = np.eye(self.n)
        return sl_asymptotic_frames(
            self.source.P11.limit(-1),
            self._reduced_limit(-1, float(lam))[0],
            eye,
            self.source.P11.limit(1),
            self._reduced_limit(1, float(lam))[0],
            eye,
            lam,
        )

    def _edge_defect(self, lam: float) -> float:
        """min over both ends of the smallest eigenvalue of V_±(lam) - lam; decreasing in lam."""
        return min(
            float(np.linalg.eigvalsh(self._reduced_limit(side, lam)[0])[0]) - lam for side in (-1, 1)
        )

    def essential_spectrum(self) -> EssentialSpectrumData:
        """
        Admissible edge for counting below: the largest lam under every excluded
        range with lam < min sigma(V_±(lam)), bracketed by bisection.
        """
        if self._essential is not None:
            return self._essential
        ceiling = min(r.lower for r in self.ranges) if self.ranges else np.inf
        bound = self.source.sufficient_bound()
        lo = min(bound, ceiling) - 1.0
        while self._edge_defect(lo) <= 0:
            lo -= 2.0 * (1.0 + abs(lo))
        hi = ceiling if np.isfinite(ceiling) else max(bound, lo) + 1.0
        while not np.isfinite(ceiling) and self._edge_defect(hi) > 0:
            hi += 2.0 * (1.0 + abs(hi))
        below_ceiling = np.nextafter(hi, -np.inf)
        if np.isfinite(ceiling) and self._edge_defect(below_ceiling) > 0:
            kappa = float(ceiling)
        else:
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if self._edge_defect(mid) > 0:
                    lo = mid
                else:
                    hi = mid
                if hi - lo < 1e-13 * max(1.0, abs(hi)):
                    break
            kappa = float(lo)
        self._essential = EssentialSpectrumData(
            kappa=kappa, excluded_ranges=self.ranges, sufficient_bound=bound
        )
        logger.debug("DA admissible edge %.10g (quadratic bound %.10g)", kappa, bound)
        return self._essential

    def left_shelf_floor(self, lam_max: float | None = None) -> float:
        """
        -(||V11|| + ||V12||^2 / dist(lam_max, excluded ranges)) with a 5% margin.

        Args:
            lam_max: Largest lambda of the working range (default: the admissible edge)
        """
        lam_max = self.kappa if lam_max is None else lam_max
        distance = min((r.lower - lam_max for r in self.ranges), default=np.inf)
        if distance <= 0:
            raise AssumptionViolationError("admissible-range", f"lam_max={lam_max} is not below the excluded ranges")
        s = self.source
        V11_norm = sampled_extremes(s.V11, s.samples)[2]
        V12_norm = max(
            float(np.linalg.norm(v, 2))
            for v in [s.V12.value(x) for x in s.samples] + [s.V12.limit(-1), s.V12.limit(1)]
        )
        coupling = 0.0 if not np.isfinite(distance) else V12_norm**2 / distance
        floor = -SAFETY_FACTOR * (V11_norm + coupling)
        return float(min(floor, self.kappa - 2 * get_settings().hyperbolicity_margin))

    def decay(self) -> DecayProfile:
        s = self.source
        return s.P11.decay().combine(s.V11.decay()).combine(s.V12.decay()).combine(s.V22.decay())


def da_reduce(system: DASystem, lam: float | None = None) -> DAHamiltonian:
    """
    Reduce a differential-algebraic system to its lambda-nonlinear m-component form.

    Args:
        system: Full block system
        lam: Optional spectral value to check against the excluded ranges

    Raises:
        AdmissibilityError: If lam lies inside an excluded range
    """
    hamiltonian = DAHamiltonian(system)
    if lam is not None:
        hamiltonian.require_outside_ranges(lam)
    logger.debug(
        "DA system m=%d, n=%d, %d excluded ranges", system.m, system.n, len(hamiltonian.ranges)
    )
    return hamiltonian

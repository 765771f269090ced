"""Shared behavior of Hamiltonian systems and the structural validation pass."""

import logging
from abc import ABC, abstractmethod
from typing import Iterable, Literal

import numpy as np

from maslov_count.core.config import get_settings
from maslov_count.core.errors import (
    AdmissibilityError,
    AssumptionViolationError,
    EssentialSpectrumError,
    HyperbolicityError,
)
from maslov_count.interfaces.hamiltonian_system import HamiltonianSystem
from maslov_count.models.asymptotics import AsymptoticFrames
from maslov_count.models.frames import LagrangianFrame, standard_symplectic
from maslov_count.models.spectral import DecayProfile, EssentialSpectrumData, ValidationReport
from maslov_count.services.asymptotics import split_modes

logger = logging.getLogger(__name__)


def coefficient_matrix(system: HamiltonianSystem, x: float, lam: float) -> np.ndarray:
    """Return A(x; lambda) = J^{-1} B(x; lambda) = -J B(x; lambda)."""
    return -standard_symplectic(system.n) @ system.B(x, lam)


class HamiltonianSystemBase(ABC):
    """Base class implementing the parts of the contract common to all system classes."""

    kind = "generic"

    def __init__(self, sample_window: float = 12.0, sample_count: int = 241):
        self.sample_window = sample_window
        self.sample_count = sample_count
        self._J = None

    @property
    @abstractmethod
    def n(self) -> int: ...

    @abstractmethod
    def B(self, x: float, lam: float) -> np.ndarray: ...

    @abstractmethod
    def B_lambda(self, x: float, lam: float) -> np.ndarray: ...

    @abstractmethod
    def B_limit(self, side: Literal[-1, 1], lam: float) -> np.ndarray: ...

    @abstractmethod
    def asymptotic_frames(self, lam: float) -> AsymptoticFrames: ...

    @abstractmethod
    def essential_spectrum(self) -> EssentialSpectrumData: ...

    @abstractmethod
    def left_shelf_floor(self, lam_max: float | None = None) -> float: ...

    @abstractmethod
    def decay(self) -> DecayProfile: ...

    @property
    def J(self) -> np.ndarray:
        if self._J is None:
            self._J = standard_symplectic(self.n)
        return self._J

    def A(self, x: float, lam: float) -> np.ndarray:
        return -self.J @ self.B(x, lam)

    def A_limit(self, side: Literal[-1, 1], lam: float) -> np.ndarray:
        return -self.J @ self.B_limit(side, lam)

    @property
    def kappa(self) -> float:
        return self.essential_spectrum().kappa

    def monotone_target(self) -> LagrangianFrame:
        return LagrangianFrame.dirichlet(self.n)

    def support_hint(self) -> tuple[float, float] | None:
        return None

    def sample_points(self) -> np.ndarray:
        points = np.linspace(-self.sample_window, self.sample_window, self.sample_count)
        hint = self.support_hint()
        if hint is not None:
            points = np.union1d(points, np.linspace(hint[0], hint[1], self.sample_count))
        return points

    def tail_norm(self, x: float, lam: float) -> float:
        """Spectral norm of B(x; lambda) - B_±(lambda) with ± the sign of x."""
        side = 1 if x >= 0 else -1
        return float(np.linalg.norm(self.B(x, lam) - self.B_limit(side, lam), 2))

    def check_admissible(self, lam: float, margin: float | None = None) -> None:
        """
        Require lambda to lie in the admissible set.

        Raises:
            EssentialSpectrumError: If lambda is within margin of, or above, kappa
            AdmissibilityError: If lambda lies in an excluded range
        """
        margin = get_settings().hyperbolicity_margin if margin is None else margin
        data = self.essential_spectrum()
        if not lam < data.kappa - margin:
            raise EssentialSpectrumError(
                f"lambda={lam} is not below the essential-spectrum edge kappa={data.kappa} "
                f"(margin {margin})"
            )
        offending = [r for r in data.excluded_ranges if r.contains(lam)]
        if offending:
            raise AdmissibilityError(
                f"lambda={lam} lies in excluded ranges "
                + ", ".join(f"[{r.lower:.6g}, {r.upper:.6g}]" for r in offending),
                ranges=[(r.lower, r.upper) for r in offending],
            )

    def default_lambdas(self) -> np.ndarray:
        """A few admissible lambda values below kappa for validation sweeps."""
        kappa = self.essential_spectrum().kappa
        scale = 1.0 + abs(kappa)
        return kappa - scale * np.array([0.5, 1.0, 2.0])


def validate_system(
    system: HamiltonianSystemBase,
    xs: Iterable[float] | None = None,
    lambdas: Iterable[float] | None = None,
    tol: float = 1e-8,
    raise_on_failure: bool = True,
) -> ValidationReport:
    """
    Sample a system against its structural assumptions.

    Checks self-adjointness of B, consistency of B_lambda with a central
    difference of B, agreement of the asymptotic matrices with J^{-1} B_±, and
    the real-part gap of the asymptotic spectra.

    Args:
        system: System to validate
        xs: Spatial samples (default: system.sample_points())
        lambdas: Spectral samples (default: system.default_lambdas())
        tol: Absolute tolerance for the self-adjointness and reconstruction checks
        raise_on_failure: Raise on the first failed check instead of reporting

    Returns:
        ValidationReport with the worst residuals observed

    Raises:
        AssumptionViolationError: Naming the violated assumption
    """
    xs = system.sample_points() if xs is None else np.asarray(list(xs), dtype=float)
    lambdas = system.default_lambdas() if lambdas is None else np.asarray(list(lambdas), dtype=float)
    margin = get_settings().hyperbolicity_margin

    self_adjoint = 0.0
    derivative = 0.0
    derivative_scale = 1.0
    for lam in lambdas:
        h = 1e-5 * max(1.0, abs(lam))
        for x in xs:
            B = system.B(x, lam)
            self_adjoint = max(self_adjoint, float(np.max(np.abs(B - B.conj().T))))
            difference = (system.B(x, lam + h) - system.B(x, lam - h)) / (2 * h)
            derivative = max(derivative, float(np.max(np.abs(system.B_lambda(x, lam) - difference))))
            derivative_scale = max(derivative_scale, float(np.max(np.abs(B))))

    reconstruction = 0.0
    gap = np.inf
    for lam in lambdas:
        for side in (-1, 1):
            A = system.A_limit(side, lam)
            reconstruction = max(
                reconstruction,
                float(np.max(np.abs(A + system.J @ system.B_limit(side, lam)))),
            )
            try:
                gap = min(gap, split_modes(A, margin=margin).gap())
            except HyperbolicityError as e:
                if raise_on_failure:
                    raise AssumptionViolationError(
                        "hyperbolic-limits", f"asymptotic matrix at side {side:+d}, lambda={lam}: {e}"
                    ) from e
                gap = 0.0

    report = ValidationReport(
        self_adjoint_residual=self_adjoint,
        derivative_residual=derivative,
        reconstruction_residual=reconstruction,
        hyperbolic_gap=float(gap),
        samples=len(xs) * len(lambdas),
    )
    failures = []
    if self_adjoint > tol:
        failures.append(("self-adjoint", f"B is not self-adjoint, residual {self_adjoint:.3e}"))
    if derivative > 1e-6 * derivative_scale:
        failures.append(("self-adjoint", f"B_lambda disagrees with dB/dlambda, residual {derivative:.3e}"))
    if reconstruction > tol:
        failures.append(("limit-consistency", f"A_± differs from J^-1 B_±, residual {reconstruction:.3e}"))
    if failures:
        logger.warning("Validation of %s failed: %s", system.kind, failures)
        if raise_on_failure:
            raise AssumptionViolationError(*failures[0])
        report = report.model_copy(update={"passed": False})
    else:
        logger.info(
            "Validated %s on %d samples; hyperbolic gap %.4g", system.kind, report.samples, gap
        )
    return report


def left_shelf_bound(system: HamiltonianSystem, lam_max: float | None = None) -> float:
    """
    A lambda below which the from-left frame has no conjugate points against the monotone target.

    Args:
        system: Hamiltonian system
        lam_max: Largest lambda of the working range, used by systems whose
            effective potential depends on lambda

    Raises:
        AssumptionViolationError: If the bound constants are unavailable
    """
    floor = system.left_shelf_floor(lam_max)
    logger.debug("Left-shelf floor for %s: %.6g", system.kind, floor)
    return floor

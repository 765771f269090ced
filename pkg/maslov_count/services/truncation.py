"""Choice of the truncation half-width c."""

import logging

import numpy as np
from scipy.integrate import quad

from maslov_count.core.errors import MaslovCountError, TruncationError
from maslov_count.interfaces.hamiltonian_system import HamiltonianSystem
from maslov_count.models.numerics import NumericsConfig, resolve
from maslov_count.models.spectral import SpectralInterval, TruncationPolicy
from maslov_count.services.asymptotics import transversality_gap

logger = logging.getLogger(__name__)

BISECTION_STEPS = 12


def tail_integral(system: HamiltonianSystem, lam: float, c: float) -> float:
    """Integral of ||B(x; lam) - B_±(lam)|| over |x| >= c, both ends."""
    limits = {side: system.B_limit(side, lam) for side in (-1, 1)}

    def deviation(x: float, side: int) -> float:
        return float(np.linalg.norm(system.B(x, lam) - limits[side], 2))

    right, _ = quad(deviation, c, np.inf, args=(1,), limit=200, epsabs=1e-14, epsrel=1e-10)
    left, _ = quad(deviation, -np.inf, -c, args=(-1,), limit=200, epsabs=1e-14, epsrel=1e-10)
    return right + left


def choose_truncation(
    system: HamiltonianSystem,
    interval: SpectralInterval,
    tol: float | None = None,
    numerics: NumericsConfig | None = None,
    lambda_samples: int = 5,
) -> TruncationPolicy:
    """
    Pick c so that the coefficient tail beyond [-c, c] is below tol and the
    asymptotic frames stay transversal across the interval.

    c starts at the floor and doubles until the tail criterion holds, then is
    narrowed by bisection between the last two trial values.

    Args:
        system: Hamiltonian system
        interval: Spectral interval to be counted
        tol: Tail tolerance (default: numerics.truncation_tol)
        numerics: Tolerances and c bounds
        lambda_samples: Number of lambda values checked

    Returns:
        TruncationPolicy

    Raises:
        TruncationError: Naming "tail" when no c up to the cap suffices, or
            "transversality" when the frames are not transversal somewhere on the interval
    """
    numerics = resolve(numerics)
    tol = numerics.truncation_tol if tol is None else tol
    lambdas = np.linspace(interval.lambda1, interval.lambda2, lambda_samples)

    gap = np.inf
    for lam in lambdas:
        try:
            gap = min(gap, transversality_gap(system.asymptotic_frames(float(lam))))
        except MaslovCountError as e:
            raise TruncationError("transversality", f"asymptotic frames unavailable at lambda={lam}: {e}") from e
    if gap < numerics.transversality_gap_min:
        raise TruncationError("transversality", f"transversality gap {gap:.3e} below {numerics.transversality_gap_min:.1e}")

    def tail(c: float) -> float:
        return max(tail_integral(system, float(lam), c) for lam in (interval.lambda1, interval.lambda2))

    c = numerics.c_floor
    criterion = "floor"
    if tail(c) >= tol:
        criterion = "tail"
        lower = c
        while tail(c) >= tol:
            if c >= numerics.c_cap:
                raise TruncationError(
                    "tail", f"tail {tail(c):.3e} still above {tol:.1e} at the cap c={numerics.c_cap}"
                )
            lower = c
            c = min(2.0 * c, numerics.c_cap)
        upper = c
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lower + upper)
            if tail(mid) < tol:
                upper = mid
            else:
                lower = mid
        c = upper

    logger.info("Truncation c=%.4g (%s), transversality gap %.3e", c, criterion, gap)
    return TruncationPolicy(
        c=float(c),
        growth_margin=numerics.growth_margin,
        transversality_gap_min=numerics.transversality_gap_min,
        tail_bound=float(tail(c)),
        transversality_gap=float(gap),
        grid_points=numerics.grid_points,
        limiting_criterion=criterion,
    )


def fixed_truncation(c: float, numerics: NumericsConfig | None = None) -> TruncationPolicy:
    """Policy with a user-supplied half-width."""
    numerics = resolve(numerics)
    return TruncationPolicy(
        c=float(c),
        growth_margin=numerics.growth_margin,
        transversality_gap_min=numerics.transversality_gap_min,
        grid_points=numerics.grid_points,
        limiting_criterion="override",
    )

"""Eigen-splitting of asymptotic matrices and the asymptotic frames of each system class."""

import logging

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from maslov_count.core.config import get_settings
from maslov_count.core.errors import (
    AssumptionViolationError,
    EssentialSpectrumError,
    HyperbolicityError,
)
from maslov_count.interfaces.hamiltonian_system import HamiltonianSystem
from maslov_count.models.asymptotics import AsymptoticFrames, ModeSet
from maslov_count.models.frames import LagrangianFrame
from maslov_count.models.spectral import EssentialSpectrumData
from maslov_count.services.symplectic import reframe, symplectic_inner

logger = logging.getLogger(__name__)


def _orthonormalize_clusters(mu: np.ndarray, r: np.ndarray, index: np.ndarray) -> None:
    """Replace eigenvectors of repeated exponents by an orthonormal invariant basis, in place."""
    start = 0
    while start < len(index):
        stop = start + 1
        anchor = mu[index[start]]
        scale = max(1.0, abs(anchor))
        while stop < len(index) and abs(mu[index[stop]] - anchor) < 1e-8 * scale:
            stop += 1
        if stop - start > 1:
            cluster = index[start:stop]
            q, _ = np.linalg.qr(r[:, cluster])
            r[:, cluster] = q
        start = stop


def split_modes(A: np.ndarray, margin: float | None = None) -> ModeSet:
    """
    Split the spectrum of a hyperbolic matrix into stable and unstable modes.

    Stable modes are sorted ascending by real part, then imaginary part. Each
    unstable mode is listed at the position of its partner -mu_k, so that the
    pairing mu_{n+k} = -mu_k holds whenever the spectrum is symmetric.

    Args:
        A: 2n x 2n asymptotic matrix
        margin: Smallest admissible |Re mu| (default: settings.hyperbolicity_margin)

    Returns:
        ModeSet with stable indices 0..n-1 and unstable indices n..2n-1

    Raises:
        HyperbolicityError: If an exponent is within margin of the imaginary axis
            or the stable and unstable counts differ
    """
    margin = get_settings().hyperbolicity_margin if margin is None else margin
    eigenvalues, vectors = scipy.linalg.eig(A)
    closest = float(np.min(np.abs(eigenvalues.real)))
    if closest < margin:
        raise HyperbolicityError(
            f"exponent with |Re mu| = {closest:.3e} below the hyperbolicity margin {margin:.1e}"
        )
    stable = np.flatnonzero(eigenvalues.real < 0)
    unstable = np.flatnonzero(eigenvalues.real > 0)
    if len(stable) != len(unstable):
        raise HyperbolicityError(
            f"{len(stable)} stable and {len(unstable)} unstable exponents; expected equal counts"
        )
    stable = stable[np.lexsort((eigenvalues[stable].imag, eigenvalues[stable].real))]
    cost = np.abs(eigenvalues[unstable][None, :] + eigenvalues[stable][:, None])
    _, partner = linear_sum_assignment(cost)
    unstable = unstable[partner]

    order = np.concatenate([stable, unstable])
    mu = eigenvalues[order]
    r = vectors[:, order].astype(complex)
    n = len(stable)
    _orthonormalize_clusters(mu, r, np.arange(n))
    unstable_sorted = n + np.lexsort((mu[n:].imag, mu[n:].real))
    _orthonormalize_clusters(mu, r, unstable_sorted)
    return ModeSet(mu=mu, r=r, stable=np.arange(n), unstable=np.arange(n, 2 * n))


def _fix_phase(R: np.ndarray) -> np.ndarray:
    """Rotate each column so that its largest-modulus entry is real positive."""
    R = np.array(R, dtype=complex)
    for k in range(R.shape[1]):
        pivot = R[np.argmax(np.abs(R[:, k])), k]
        R[:, k] *= abs(pivot) / pivot
    return R


def sl_kappa(V_minus, V_plus, Q_minus, Q_plus) -> float:
    """Smallest Rayleigh quotient (V r, r)/(Q r, r) over both endstates."""
    return float(
        min(
            scipy.linalg.eigh(V, Q, eigvals_only=True)[0]
            for V, Q in ((V_minus, Q_minus), (V_plus, Q_plus))
        )
    )


def _sl_endstate(P: np.ndarray, V: np.ndarray, Q: np.ndarray, lam: float):
    # (V - lam Q) r = mu^2 P r with R* P R = I
    mu_squared, R = scipy.linalg.eigh(V - lam * Q, P)
    R = _fix_phase(R)
    D = np.diag(-np.sqrt(mu_squared)).astype(complex)
    return R, D


def sl_asymptotic_frames(
    P_minus, V_minus, Q_minus, P_plus, V_plus, Q_plus, lam: float, margin: float | None = None
) -> AsymptoticFrames:
    """
    Closed-form asymptotic frames of -(P phi')' + V phi = lam Q phi in y = (phi; P phi').

    Args:
        P_minus, V_minus, Q_minus: Endstates at -infinity
        P_plus, V_plus, Q_plus: Endstates at +infinity
        lam: Spectral parameter
        margin: Required distance below kappa

    Returns:
        AsymptoticFrames with X_- = (R_-; -P_- R_- D_-), X~_+ = (R_+; P_+ R_+ D_+)
        and the growing frames with the signs of the lower blocks flipped

    Raises:
        EssentialSpectrumError: If lam is not below kappa by margin
    """
    margin = get_settings().hyperbolicity_margin if margin is None else margin
    P_minus, V_minus, Q_minus, P_plus, V_plus, Q_plus = (
        np.atleast_2d(np.asarray(M, dtype=float))
        for M in (P_minus, V_minus, Q_minus, P_plus, V_plus, Q_plus)
    )
    kappa = sl_kappa(V_minus, V_plus, Q_minus, Q_plus)
    if not lam < kappa - margin:
        raise EssentialSpectrumError(f"lambda={lam} is not below kappa={kappa}")
    R_minus, D_minus = _sl_endstate(P_minus, V_minus, Q_minus, lam)
    R_plus, D_plus = _sl_endstate(P_plus, V_plus, Q_plus, lam)
    lower_minus = P_minus @ R_minus @ D_minus
    lower_plus = P_plus @ R_plus @ D_plus
    return AsymptoticFrames(
        lam=lam,
        X_minus=LagrangianFrame(R_minus, -lower_minus),
        Xtilde_plus=LagrangianFrame(R_plus, lower_plus),
        X_minus_g=LagrangianFrame(R_minus, lower_minus),
        Xtilde_plus_g=LagrangianFrame(R_plus, -lower_plus),
        D_minus=D_minus,
        D_plus=D_plus,
        R_minus=R_minus,
        R_plus=R_plus,
    )


def sl_transversality_matrix(frames: AsymptoticFrames, P_minus) -> np.ndarray:
    """D_+ + R_+* P_- R_- D_- R_-* P_- R_+, negative definite for SL endstates."""
    P_minus = np.atleast_2d(P_minus)
    R_minus, R_plus = frames.R_minus, frames.R_plus
    bridge = R_plus.conj().T @ P_minus @ R_minus
    return frames.D_plus + bridge @ frames.D_minus @ bridge.conj().T


def fourth_order_exponents(V_a, lam: float, margin: float | None = None):
    """Eigenvectors R of V_a and D = diag((-1-i)/sqrt(2) (nu_k - lam)^{1/4})."""
    margin = get_settings().hyperbolicity_margin if margin is None else margin
    nu, R = scipy.linalg.eigh(np.atleast_2d(np.asarray(V_a, dtype=float)))
    if not lam < nu[0] - margin:
        raise EssentialSpectrumError(f"lambda={lam} is not below kappa={nu[0]}")
    R = _fix_phase(R)
    D = np.diag((-1.0 - 1.0j) / np.sqrt(2.0) * (nu - lam) ** 0.25)
    return R, D


def fourth_asymptotic_frames(V_a, lam: float, margin: float | None = None) -> AsymptoticFrames:
    """
    Closed-form asymptotic frames for phi'''' + V phi = lam phi in y = (phi, phi'', -phi''', -phi').

    The frame decaying at -infinity stacks the blocks (R, R; R D^2, R D*^2;
    R D^3, R D*^3; R D, R D*); the one decaying at +infinity negates the last
    two block rows. The growing frames are the opposite-end decaying frames.

    Raises:
        EssentialSpectrumError: If lam is not below the smallest eigenvalue of V_a
    """
    R, D = fourth_order_exponents(V_a, lam, margin)
    Dc = D.conj()
    top = np.block([[R, R], [R @ D @ D, R @ Dc @ Dc]])
    bottom = np.block([[R @ D @ D @ D, R @ Dc @ Dc @ Dc], [R @ D, R @ Dc]])
    X_minus = LagrangianFrame(top, bottom)
    Xtilde_plus = LagrangianFrame(top, -bottom)
    return AsymptoticFrames(
        lam=lam,
        X_minus=X_minus,
        Xtilde_plus=Xtilde_plus,
        X_minus_g=Xtilde_plus,
        Xtilde_plus_g=X_minus,
        D_minus=D,
        D_plus=D,
        R_minus=R,
        R_plus=R,
    )


def fourth_order_target(n: int) -> LagrangianFrame:
    """The plane {phi = 0, phi' = 0}: frame rows (0, 0; 0, I; I, 0; 0, 0)."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return LagrangianFrame(np.block([[zero, zero], [zero, eye]]), np.block([[eye, zero], [zero, zero]]))


def _schur_basis(A: np.ndarray, sort: str, n: int) -> np.ndarray:
    _, Z, sdim = scipy.linalg.schur(A, output="complex", sort=sort)
    if sdim != n:
        raise HyperbolicityError(f"invariant subspace ({sort}) has dimension {sdim}, expected {n}")
    return Z[:, :n]


def invariant_frames(
    A_minus: np.ndarray, A_plus: np.ndarray, lam: float, margin: float | None = None
) -> AsymptoticFrames:
    """
    Asymptotic frames from ordered Schur decompositions, for systems without a closed form.

    Args:
        A_minus: Asymptotic matrix at -infinity
        A_plus: Asymptotic matrix at +infinity
        lam: Spectral parameter (recorded)
        margin: Hyperbolicity margin

    Returns:
        AsymptoticFrames with orthonormal frames and closed_form=False
    """
    margin = get_settings().hyperbolicity_margin if margin is None else margin
    n = A_minus.shape[0] // 2
    for A in (A_minus, A_plus):
        closest = float(np.min(np.abs(np.linalg.eigvals(A).real)))
        if closest < margin:
            raise HyperbolicityError(
                f"exponent with |Re mu| = {closest:.3e} below the hyperbolicity margin {margin:.1e}"
            )
    return AsymptoticFrames(
        lam=lam,
        X_minus=LagrangianFrame.from_stacked(_schur_basis(A_minus, "rhp", n)),
        Xtilde_plus=LagrangianFrame.from_stacked(_schur_basis(A_plus, "lhp", n)),
        X_minus_g=LagrangianFrame.from_stacked(_schur_basis(A_minus, "lhp", n)),
        Xtilde_plus_g=LagrangianFrame.from_stacked(_schur_basis(A_plus, "rhp", n)),
        closed_form=False,
    )


def transversality_gap(frames: AsymptoticFrames) -> float:
    """Smallest singular value of the orthonormalized product X_-* J X~_+."""
    product = symplectic_inner(reframe(frames.X_minus), reframe(frames.Xtilde_plus))
    return float(np.linalg.svd(product, compute_uv=False)[-1])


def check_transversality(frames: AsymptoticFrames, gap_min: float | None = None) -> float:
    """
    Require the decaying frames at the two ends to be transversal.

    Returns:
        The transversality gap

    Raises:
        AssumptionViolationError: When the gap is below gap_min
    """
    gap_min = get_settings().transversality_gap_min if gap_min is None else gap_min
    gap = transversality_gap(frames)
    if gap < gap_min:
        raise AssumptionViolationError(
            "transversal-limits", f"asymptotic frames intersect at lambda={frames.lam}: gap {gap:.3e}"
        )
    return gap


def essential_spectrum_edge(system: HamiltonianSystem) -> EssentialSpectrumData:
    """Essential-spectrum data of a system: kappa, excluded ranges and the bounds behind them."""
    return system.essential_spectrum()

"""Symplectic linear algebra on Lagrangian frames.

All functions are pure. Frames enter unnormalized; where a computation is
frame-independent it works on the QR re-frame so that conditioning is that of
the plane, not of the chosen basis.
"""

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from maslov_count.core.config import get_settings
from maslov_count.core.errors import ConditioningError, ContractViolationError
from maslov_count.models.frames import LagrangianFrame, SymplecticForm, UnitaryMatrix


def _require_same_dimension(frame1: LagrangianFrame, frame2: LagrangianFrame) -> None:
    if frame1.n != frame2.n:
        raise ContractViolationError(
            f"frames live in different dimensions: n={frame1.n} and n={frame2.n}"
        )


def reframe(frame: LagrangianFrame) -> LagrangianFrame:
    """Return an orthonormal frame for the same plane (economic QR of [X; Y])."""
    q, _ = np.linalg.qr(frame.stacked)
    return LagrangianFrame.from_stacked(q)


def lagrangian_residual(frame: LagrangianFrame) -> float:
    """Max-abs entry of X*Y - Y*X on the orthonormal re-frame."""
    q = reframe(frame)
    return float(np.max(np.abs(q.X.conj().T @ q.Y - q.Y.conj().T @ q.X)))


def check_lagrangian(frame: LagrangianFrame, tol: float | None = None) -> bool:
    """
    Decide whether a frame spans a Lagrangian plane.

    The rank test is relative to the largest singular value of [X; Y] and the
    isotropy test is evaluated on the orthonormal re-frame, so the answer does
    not depend on the scale of the basis.

    Args:
        frame: Frame to test
        tol: Tolerance (default: settings.lagrangian_tol)

    Returns:
        True when [X; Y] has full rank and X*Y - Y*X vanishes within tol
    """
    tol = get_settings().lagrangian_tol if tol is None else tol
    singular = np.linalg.svd(frame.stacked, compute_uv=False)
    if singular[0] == 0.0 or singular[-1] <= tol * singular[0]:
        return False
    return lagrangian_residual(frame) <= tol


def symplectic_inner(frame1: LagrangianFrame, frame2: LagrangianFrame) -> np.ndarray:
    """Return the n x n matrix frame1* J frame2."""
    _require_same_dimension(frame1, frame2)
    return SymplecticForm(frame1.n).pair(frame1.stacked, frame2.stacked)


def _right_divide(A: np.ndarray, B: np.ndarray, cap: float) -> np.ndarray:
    """Return A B^{-1} by an LU solve, refusing badly conditioned B."""
    condition = np.linalg.cond(B)
    if not np.isfinite(condition) or condition > cap:
        raise ConditioningError(
            f"factor condition number {condition:.3e} exceeds cap {cap:.1e}; "
            "the frame has drifted off the Lagrangian Grassmannian"
        )
    return scipy.linalg.solve(B.T, A.T).T


def build_wtilde(frame1: LagrangianFrame, frame2: LagrangianFrame) -> UnitaryMatrix:
    """
    Build the unitary matrix whose eigenvalues at -1 mark intersections.

    W = -(X1 + iY1)(X1 - iY1)^{-1} (X2 - iY2)(X2 + iY2)^{-1}

    Args:
        frame1: First frame
        frame2: Second frame

    Returns:
        UnitaryMatrix W

    Raises:
        ContractViolationError: If the frames have different dimensions
        ConditioningError: If a factor X - iY (or X + iY) is numerically singular
    """
    _require_same_dimension(frame1, frame2)
    cap = get_settings().conditioning_cap
    q1 = reframe(frame1)
    q2 = reframe(frame2)
    first = _right_divide(q1.X + 1j * q1.Y, q1.X - 1j * q1.Y, cap)
    second = _right_divide(q2.X - 1j * q2.Y, q2.X + 1j * q2.Y, cap)
    return UnitaryMatrix(-first @ second)


def minus_one_multiplicity(W: UnitaryMatrix, tol: float | None = None) -> int:
    """Count eigenvalues of W within angular distance 2*tol of -1."""
    tol = get_settings().rank_tol if tol is None else tol
    angles = W.angles()
    distance = np.pi - np.abs(angles)
    return int(np.sum(distance < 2.0 * tol))


def intersection_dimension(
    frame1: LagrangianFrame, frame2: LagrangianFrame, tol: float | None = None
) -> int:
    """Return dim(l1 ∩ l2) as the number of small singular values of frame1* J frame2.

    Frames are orthonormalized first, so singular values lie in [0, 1] and the
    threshold is absolute.
    """
    tol = get_settings().rank_tol if tol is None else tol
    singular = np.linalg.svd(
        symplectic_inner(reframe(frame1), reframe(frame2)), compute_uv=False
    )
    return int(np.sum(singular < tol))


def intersection_basis(
    frame1: LagrangianFrame, frame2: LagrangianFrame, tol: float | None = None
) -> np.ndarray:
    """
    Coefficient vectors u with frame1 @ u lying in both planes.

    Args:
        frame1: Frame whose coordinates are returned
        frame2: Second frame
        tol: Singular value threshold (absolute, on orthonormalized frames)

    Returns:
        n x k matrix with orthonormal columns in the coordinates of frame1;
        k = 0 gives an n x 0 array
    """
    tol = get_settings().rank_tol if tol is None else tol
    q1 = reframe(frame1)
    q2 = reframe(frame2)
    _, singular, vh = np.linalg.svd(symplectic_inner(q2, q1))
    mask = singular < tol
    kernel = vh.conj().T[:, mask]
    # back to the coordinates of the caller's frame
    coords, *_ = np.linalg.lstsq(frame1.stacked, q1.stacked @ kernel, rcond=None)
    if coords.shape[1]:
        coords, _ = np.linalg.qr(coords)
    return coords


def projection(frame: LagrangianFrame) -> np.ndarray:
    """Orthogonal projection onto the plane, X(X*X)^{-1}X* computed through QR."""
    q = reframe(frame).stacked
    return q @ q.conj().T


def grassmannian_distance(
    frame1: LagrangianFrame, frame2: LagrangianFrame, ord: int | str = 2
) -> float:
    """Norm of the difference of orthogonal projections (spectral norm by default)."""
    _require_same_dimension(frame1, frame2)
    return float(np.linalg.norm(projection(frame1) - projection(frame2), ord=ord))


def lagrangian_frame_from_unitary(U: np.ndarray) -> LagrangianFrame:
    """Frame with X - iY = I and X + iY = U; every unitary U gives a Lagrangian plane."""
    U = np.asarray(U, dtype=complex)
    eye = np.eye(U.shape[0])
    return LagrangianFrame((U + eye) / 2.0, (U - eye) / 2.0j)


def unitary_from_frame(frame: LagrangianFrame) -> np.ndarray:
    """Inverse of ``lagrangian_frame_from_unitary``: (X + iY)(X - iY)^{-1}."""
    q = reframe(frame)
    return _right_divide(q.X + 1j * q.Y, q.X - 1j * q.Y, get_settings().conditioning_cap)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary; scipy handles n > 1, a random phase covers n = 1."""
    if n == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(n, random_state=rng)


def random_lagrangian_frame(n: int, rng: np.random.Generator) -> LagrangianFrame:
    """Random plane drawn from the Haar measure on U(n)."""
    return lagrangian_frame_from_unitary(haar_unitary(n, rng))


def frame_pair_with_overlap(
    n: int, k: int, rng: np.random.Generator
) -> tuple[LagrangianFrame, LagrangianFrame]:
    """
    Two random planes whose intersection has dimension exactly k.

    With planes represented by unitaries U1 and U2, the intersection is
    ker(U1 - U2). U2 = U1 V where V has the eigenvalue 1 with multiplicity k and
    its remaining eigenvalues bounded away from 1.
    """
    if not 0 <= k <= n:
        raise ContractViolationError(f"overlap {k} must lie in [0, {n}]")
    U1 = haar_unitary(n, rng)
    basis = haar_unitary(n, rng)
    phases = np.ones(n, dtype=complex)
    phases[k:] = np.exp(1j * rng.uniform(0.5, 2 * np.pi - 0.5, size=n - k))
    V = basis @ np.diag(phases) @ basis.conj().T
    return lagrangian_frame_from_unitary(U1), lagrangian_frame_from_unitary(U1 @ V)

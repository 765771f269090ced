"""Transport of Lagrangian frames along y' = J^{-1} B(x; lam) y on a truncated line.

Frames are integrated with an embedded Runge-Kutta pair in chunks short
enough that the spread of growth rates inside one chunk stays below
``growth_margin``; between chunks the frame is re-orthonormalized by QR and
the removed magnitude is accumulated in a log scale.
"""

import logging
from typing import Literal

import numpy as np
from scipy.integrate import solve_ivp

from maslov_count.core.errors import ContractViolationError, IntegrationAccuracyError
from maslov_count.interfaces.hamiltonian_system import HamiltonianSystem
from maslov_count.models.evolution import EvolvedFramePath
from maslov_count.models.frames import LagrangianFrame, standard_symplectic
from maslov_count.models.numerics import NumericsConfig, resolve
from maslov_count.models.spectral import TruncationPolicy
from maslov_count.services.symplectic import intersection_basis

logger = logging.getLogger(__name__)

METHOD = "DOP853"


def compactified_grid(c: float, points: int) -> np.ndarray:
    """
    Grid on [-c, c] uniform in tau under x = ln((1 + tau) / (1 - tau)).

    Gaps wider than 4c / points (which appear near the ends for large c) are
    filled uniformly.

    Args:
        c: Truncation half-width
        points: Number of tau samples

    Returns:
        Increasing array starting at -c and ending at c
    """
    if c <= 0 or points < 3:
        raise ContractViolationError(f"grid needs c > 0 and at least 3 points, got c={c}, points={points}")
    edge = np.tanh(c / 2.0)
    tau = np.linspace(-edge, edge, points)
    xs = np.empty(points)
    xs[1:-1] = np.log((1.0 + tau[1:-1]) / (1.0 - tau[1:-1]))
    xs[0], xs[-1] = -c, c
    widest = 4.0 * c / points
    pieces = [xs[:1]]
    for a, b in zip(xs[:-1], xs[1:]):
        extra = int(np.ceil((b - a) / widest))
        pieces.append(np.linspace(a, b, extra + 1)[1:] if extra > 1 else np.array([b]))
    return np.concatenate(pieces)


def _orthonormal(stacked: np.ndarray) -> tuple[np.ndarray, float]:
    q, r = np.linalg.qr(stacked)
    return q, float(np.sum(np.log(np.abs(np.diag(r)))))


def _isotropy_residual(q: np.ndarray) -> float:
    n = q.shape[1]
    X, Y = q[:n], q[n:]
    return float(np.max(np.abs(X.conj().T @ Y - Y.conj().T @ X)))


def growth_rate(system: HamiltonianSystem, lam: float, xs: np.ndarray, samples: int = 64) -> float:
    """Largest sampled spectral norm of A(x; lam), an upper bound on local growth."""
    picks = np.unique(np.concatenate([xs[:: max(1, len(xs) // samples)], xs[-1:]]))
    J = standard_symplectic(system.n)
    rate = max(float(np.linalg.norm(J @ system.B(x, lam), 2)) for x in picks)
    return max(rate, 1e-3)


class _FrameTransport:
    """Chunked integration of one frame between two points, emitting QR-normalized frames."""

    def __init__(self, system: HamiltonianSystem, lam: float, numerics: NumericsConfig, rate: float):
        self.system = system
        self.lam = lam
        self.numerics = numerics
        self.chunk = numerics.growth_margin / (2.0 * rate)
        self.J = standard_symplectic(system.n)

    def _rhs(self, columns: int):
        J, B, lam = self.J, self.system.B, self.lam
        rows = J.shape[0]

        def rhs(x, y):
            return (-J @ (B(x, lam) @ y.reshape(rows, columns))).ravel()

        return rhs

    def run(self, start: np.ndarray, x0: float, x1: float, stops: np.ndarray):
        """
        Integrate from x0 to x1, recording the frame at each stop in (x0, x1].

        Returns:
            (frames at stops, log scales at stops, final frame, final log scale, max residual)
        """
        rows, columns = start.shape
        rhs = self._rhs(columns)
        direction = 1.0 if x1 >= x0 else -1.0
        state, log_scale = _orthonormal(start)
        outputs: list[np.ndarray] = []
        logs: list[float] = []
        worst = _isotropy_residual(state)
        stops = np.asarray(stops, dtype=float)
        index = 0
        a = x0
        while direction * (x1 - a) > 0:
            b = a + direction * min(self.chunk, abs(x1 - a))
            if abs(x1 - b) <= 1e-13 * max(1.0, abs(x1)):
                b = x1
            end = index
            while end < len(stops) and direction * (stops[end] - b) <= 0:
                end += 1
            t_eval = list(stops[index:end])
            if not t_eval or t_eval[-1] != b:
                t_eval.append(b)
            try:
                solution = solve_ivp(
                    rhs,
                    (a, b),
                    state.ravel(),
                    method=METHOD,
                    t_eval=t_eval,
                    rtol=self.numerics.rtol,
                    atol=self.numerics.atol,
                )
            except (ValueError, np.linalg.LinAlgError) as e:
                raise IntegrationAccuracyError(f"frame integration failed on [{a:.6g}, {b:.6g}]: {e}") from e
            if not solution.success:
                raise IntegrationAccuracyError(
                    f"frame integration failed on [{a:.6g}, {b:.6g}] at lambda={self.lam}: {solution.message}"
                )
            for j in range(end - index):
                q, growth = _orthonormal(solution.y[:, j].reshape(rows, columns))
                worst = max(worst, _isotropy_residual(q))
                outputs.append(q)
                logs.append(log_scale + growth)
            state, growth = _orthonormal(solution.y[:, -1].reshape(rows, columns))
            log_scale += growth
            index = end
            a = b
        worst = max(worst, _isotropy_residual(state))
        limit = 10.0 * self.numerics.lagrangian_tol
        if worst > limit:
            raise IntegrationAccuracyError(
                f"Lagrangian drift {worst:.3e} exceeds {limit:.1e} at lambda={self.lam}; "
                "tighten rtol or lower growth_margin"
            )
        return outputs, logs, state, log_scale, worst


def _consecutive_distances(frames: np.ndarray) -> np.ndarray:
    projections = frames @ np.conj(np.swapaxes(frames, 1, 2))
    return np.linalg.norm(projections[1:] - projections[:-1], ord=2, axis=(1, 2))


def evolve_frame(
    system: HamiltonianSystem,
    lam: float,
    policy: TruncationPolicy,
    direction: Literal[-1, 1] = 1,
    numerics: NumericsConfig | None = None,
    initial: LagrangianFrame | None = None,
    grid: np.ndarray | None = None,
) -> EvolvedFramePath:
    """
    Evolve the decaying frame across [-c, c].

    The from-left path (direction +1) starts at -c from X_-(lam) and runs
    rightward; the from-right path (direction -1) starts at +c from X~_+(lam).
    Intervals on which consecutive frames jump by more than the continuity cap
    are bisected and the path recomputed.

    Args:
        system: Hamiltonian system
        lam: Spectral parameter
        policy: Truncation policy (half-width and grid size)
        direction: +1 for from-left, -1 for from-right
        numerics: Tolerances (default: from settings)
        initial: Override of the starting frame
        grid: Override of the ascending x-grid

    Returns:
        EvolvedFramePath on an ascending grid

    Raises:
        IntegrationAccuracyError: On Lagrangian drift, integrator failure, or a
            continuity cap that keeps failing after the refinement budget
    """
    numerics = resolve(numerics)
    xs = compactified_grid(policy.c, policy.grid_points) if grid is None else np.asarray(grid, dtype=float)
    if initial is None:
        frames = system.asymptotic_frames(lam)
        initial = frames.X_minus if direction > 0 else frames.Xtilde_plus
    rate = growth_rate(system, lam, xs)
    transport = _FrameTransport(system, lam, numerics, rate)

    for refinement in range(numerics.x_refine_depth + 1):
        order = xs if direction > 0 else xs[::-1]
        first, _ = _orthonormal(initial.stacked)
        outputs, logs, _, _, worst = transport.run(first, order[0], order[-1], order[1:])
        stored = np.array([first] + outputs)
        scales = np.array([0.0] + logs)
        if direction < 0:
            stored, scales = stored[::-1], scales[::-1]
        jumps = _consecutive_distances(stored)
        bad = np.flatnonzero(jumps > numerics.continuity_cap)
        if bad.size == 0:
            break
        logger.warning(
            "Continuity cap %.2f exceeded on %d intervals at lambda=%.6g; refining grid",
            numerics.continuity_cap,
            bad.size,
            lam,
        )
        xs = np.sort(np.concatenate([xs, 0.5 * (xs[bad] + xs[bad + 1])]))
    else:
        raise IntegrationAccuracyError(
            f"continuity cap still exceeded after {numerics.x_refine_depth} refinements at lambda={lam}"
        )

    logger.debug(
        "Evolved frame at lambda=%.6g direction=%+d on %d points (residual %.2e, %d refinements)",
        lam,
        direction,
        len(xs),
        worst,
        refinement,
    )
    return EvolvedFramePath(
        system_kind=getattr(system, "kind", "generic"),
        lam=float(lam),
        c=float(policy.c),
        xs=xs,
        frames=stored,
        log_scale=scales,
        direction=direction,
        max_residual=worst,
        refinements=refinement,
    )


def propagate_frame(
    system: HamiltonianSystem,
    lam: float,
    frame: LagrangianFrame,
    x0: float,
    x1: float,
    numerics: NumericsConfig | None = None,
) -> LagrangianFrame:
    """Transport a frame from x0 to x1 (either direction) and return an orthonormal frame at x1."""
    numerics = resolve(numerics)
    if x0 == x1:
        q, _ = _orthonormal(frame.stacked)
        return LagrangianFrame.from_stacked(q)
    rate = growth_rate(system, lam, np.linspace(min(x0, x1), max(x0, x1), 33))
    transport = _FrameTransport(system, lam, numerics, rate)
    _, _, state, _, _ = transport.run(frame.stacked, x0, x1, np.array([]))
    return LagrangianFrame.from_stacked(state)


def frame_at(
    system: HamiltonianSystem,
    path: EvolvedFramePath,
    x: float,
    numerics: NumericsConfig | None = None,
) -> LagrangianFrame:
    """
    Frame of a stored path at an arbitrary x in [-c, c].

    Re-integrates from the nearest stored point on the side the path was
    integrated from, so the result carries no interpolation error.
    """
    if not -path.c - 1e-12 <= x <= path.c + 1e-12:
        raise ContractViolationError(f"x={x} outside the path window [-{path.c}, {path.c}]")
    xs = path.xs
    if path.direction > 0:
        i = max(0, int(np.searchsorted(xs, x, side="right")) - 1)
    else:
        i = min(len(xs) - 1, int(np.searchsorted(xs, x, side="left")))
    anchor = path.frame(i)
    if xs[i] == x:
        return anchor
    return propagate_frame(system, path.lam, anchor, float(xs[i]), float(x), numerics)


def crossing_form(
    system: HamiltonianSystem,
    lam: float,
    x: float,
    frame: LagrangianFrame,
    target: LagrangianFrame,
    tol: float | None = None,
) -> np.ndarray:
    """
    x-direction crossing form of a solution frame against a fixed plane.

    Along solutions X' = J^{-1} B X, so -X* J X' = -X* B X; the form is this
    restricted to the intersection. For Sturm-Liouville systems against the
    Dirichlet plane it equals -Y* P^{-1} Y on the kernel, negative definite.

    Returns:
        k x k Hermitian matrix on an orthonormal basis of the intersection
        (0 x 0 when the planes are transversal)
    """
    basis = intersection_basis(frame, target, tol)
    if basis.shape[1] == 0:
        return np.zeros((0, 0), dtype=complex)
    columns = frame.stacked @ basis
    form = -columns.conj().T @ system.B(x, lam) @ columns
    return 0.5 * (form + form.conj().T)


def lambda_crossing_form(
    system: HamiltonianSystem,
    lam: float,
    x: float,
    c: float,
    numerics: NumericsConfig | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Both sides of the lambda-identity for the from-left frame on [-c, x].

    Integrates the frame X, its lambda-variation Z' = J^{-1}(B Z + B_lam X) and
    the quadrature I' = X* B_lam X together. With X(-c) = X_-(lam) and Z(-c)
    its central difference in lambda,

        X* J Z |_x - X* J Z |_{-c} = I(x).

    Returns:
        (boundary difference, quadrature), both n x n
    """
    numerics = resolve(numerics)
    n = system.n
    rows = 2 * n
    J = standard_symplectic(system.n)
    h = 1e-6 * max(1.0, abs(lam))
    X0 = system.asymptotic_frames(lam).X_minus.stacked
    Z0 = (
        system.asymptotic_frames(lam + h).X_minus.stacked
        - system.asymptotic_frames(lam - h).X_minus.stacked
    ) / (2.0 * h)

    def rhs(t, y):
        X = y[: rows * n].reshape(rows, n)
        Z = y[rows * n : 2 * rows * n].reshape(rows, n)
        B = system.B(t, lam)
        B_lam = system.B_lambda(t, lam)
        dX = -J @ (B @ X)
        dZ = -J @ (B @ Z + B_lam @ X)
        dI = X.conj().T @ B_lam @ X
        return np.concatenate([dX.ravel(), dZ.ravel(), dI.ravel()])

    y0 = np.concatenate([X0.ravel(), Z0.ravel(), np.zeros(n * n, dtype=complex)])
    solution = solve_ivp(rhs, (-c, x), y0, method=METHOD, rtol=numerics.rtol, atol=numerics.atol)
    if not solution.success:
        raise IntegrationAccuracyError(f"variational integration failed at lambda={lam}: {solution.message}")
    end = solution.y[:, -1]
    X = end[: rows * n].reshape(rows, n)
    Z = end[rows * n : 2 * rows * n].reshape(rows, n)
    quadrature = end[2 * rows * n :].reshape(n, n)
    boundary = X.conj().T @ J @ Z - X0.conj().T @ J @ Z0
    return boundary, quadrature

"""Spectral-flow Maslov index of paths of Lagrangian pairs.

The index counts eigenvalues of W = -(X1 + iY1)(X1 - iY1)^{-1}(X2 - iY2)(X2 + iY2)^{-1}
passing through -1: +1 counterclockwise, -1 clockwise. At the start of a path
an eigenvalue leaving -1 clockwise counts -1 (counterclockwise 0); at the end
an eigenvalue arriving counterclockwise counts +1 (clockwise 0). Eigenvalues
resting at -1 contribute only through these two rules.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import linear_sum_assignment

from maslov_count.core.errors import (
    ConsistencyError,
    DegenerateCrossingError,
    TrackingError,
    TruncationError,
)
from maslov_count.interfaces.hamiltonian_system import HamiltonianSystem
from maslov_count.models.evolution import EvolvedFramePath
from maslov_count.models.frames import LagrangianFrame
from maslov_count.models.maslov import (
    ConjugatePoint,
    FramePairPath,
    MaslovBox,
    MaslovResult,
    RotationTrace,
)
from maslov_count.models.numerics import NumericsConfig, resolve
from maslov_count.models.spectral import TruncationPolicy
from maslov_count.services.frame_evolution import crossing_form, evolve_frame, frame_at, propagate_frame
from maslov_count.services.symplectic import build_wtilde, intersection_dimension, reframe

logger = logging.getLogger(__name__)

MAX_STEP = np.pi / 2.0
DEGENERATE_SPEED = 1e-12
TOP_SHELF_RETRIES = 2


def wrap_angle(angle):
    """Map angles to [-pi, pi)."""
    return (np.asarray(angle) + np.pi) % (2.0 * np.pi) - np.pi


def wtilde_angles(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Eigenvalue arguments of W for two stacked frames."""
    return build_wtilde(LagrangianFrame.from_stacked(first), LagrangianFrame.from_stacked(second)).angles()


def match_angles(previous: np.ndarray, raw: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Continue each branch to the raw eigenvalue with least total angular displacement.

    Returns:
        (continued angles, permutation into raw, largest step)
    """
    cost = np.abs(wrap_angle(raw[None, :] - previous[:, None]))
    _, columns = linear_sum_assignment(cost)
    step = wrap_angle(raw[columns] - previous)
    return previous + step, columns, float(np.max(np.abs(step)))


def _angles_at(path: FramePairPath, t: float) -> np.ndarray:
    first, second = path.evaluator(t)
    return wtilde_angles(first.stacked, second.stacked)


def track_spectral_flow(path: FramePairPath, numerics: NumericsConfig | None = None) -> RotationTrace:
    """
    Follow the eigenvalues of W along a path.

    Consecutive eigenvalue sets are matched by an optimal assignment on
    angular distance. Any step that moves a branch by pi/2 or more is bisected
    through the path evaluator until it does not. On a path with a declared
    rotation, a step against it is checked at its midpoint and bisected when
    the two half steps end a full turn away from the direct one.

    Raises:
        TrackingError: If a step cannot be resolved within the refinement depth
            (or the path has no evaluator to refine with)
    """
    numerics = resolve(numerics)
    depth_cap = numerics.x_refine_depth if path.kind == "x" else numerics.lambda_refine_depth
    raw = [wtilde_angles(path.first[i], path.second[i]) for i in range(len(path.params))]

    params = [float(path.params[0])]
    angles = [np.sort(raw[0])]
    matching: list[np.ndarray] = []
    refinements = 0

    def advance(t_a: float, theta_a: np.ndarray, t_b: float, raw_b: np.ndarray, depth: int):
        nonlocal refinements
        theta_b, columns, step = match_angles(theta_a, raw_b)
        backward = path.rotation != 0 and np.any(path.rotation * (theta_b - theta_a) < -numerics.eig_tol)
        if step < MAX_STEP and not backward:
            return [(t_b, theta_b, columns)]
        if path.evaluator is None or depth >= depth_cap:
            if step < MAX_STEP:
                return [(t_b, theta_b, columns)]
            raise TrackingError(
                f"{path.label}: eigenvalue step {step:.3f} rad on [{t_a:.12g}, {t_b:.12g}] "
                f"unresolved after {depth} bisections",
                segment=(t_a, t_b),
            )
        t_mid = 0.5 * (t_a + t_b)
        raw_mid = _angles_at(path, t_mid)
        if step < MAX_STEP:
            # a step against the rotation either is one or hides a full turn
            theta_mid, _, _ = match_angles(theta_a, raw_mid)
            theta_two, _, _ = match_angles(theta_mid, raw_b)
            if np.allclose(theta_two, theta_b, rtol=0.0, atol=np.pi):
                return [(t_b, theta_b, columns)]
        refinements += 1
        left = advance(t_a, theta_a, t_mid, raw_mid, depth + 1)
        right = advance(t_mid, left[-1][1], t_b, raw_b, depth + 1)
        return left + right

    for i in range(1, len(path.params)):
        for t, theta, columns in advance(params[-1], angles[-1], float(path.params[i]), raw[i], 0):
            params.append(t)
            angles.append(theta)
            matching.append(columns)

    if refinements:
        logger.debug("%s: %d bisections to keep eigenvalue steps below pi/2", path.label, refinements)
    return RotationTrace(
        params=np.array(params),
        angles=np.array(angles),
        matching=matching,
        label=path.label,
        refinements=refinements,
    )


@dataclass
class _Event:
    branch: int
    param: float
    kind: str
    direction: int
    contribution: int


def _locate_crossing(
    path: FramePairPath, trace: RotationTrace, a: int, branch: int, level: int, tol: float
) -> float:
    """Bisect the segment [params[a], params[a + 1]] to where the branch meets -1 at the given sheet."""
    t_lo, t_hi = float(trace.params[a]), float(trace.params[a + 1])
    theta_lo = trace.angles[a]
    s_lo = (theta_lo[branch] - np.pi) / (2.0 * np.pi)
    side = np.sign(s_lo - level)
    for _ in range(200):
        if abs(t_hi - t_lo) <= tol:
            break
        t_mid = 0.5 * (t_lo + t_hi)
        theta_mid, _, _ = match_angles(theta_lo, _angles_at(path, t_mid))
        s_mid = (theta_mid[branch] - np.pi) / (2.0 * np.pi)
        if np.sign(s_mid - level) == side:
            t_lo, theta_lo = t_mid, theta_mid
        else:
            t_hi = t_mid
    return 0.5 * (t_lo + t_hi)


def _form_directions(path: FramePairPath, param: float, multiplicity: int) -> tuple[int, ...] | None:
    if path.crossing_form is None:
        return None
    form = path.crossing_form(param)
    if form.shape[0] != multiplicity:
        return None
    eigenvalues = np.linalg.eigvalsh(form)
    scale = max(1.0, float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 1.0)
    if np.any(np.abs(eigenvalues) <= 1e-12 * scale):
        return None
    return tuple(int(v) for v in np.sign(eigenvalues))


def maslov_index(
    trace: RotationTrace,
    path: FramePairPath | None = None,
    numerics: NumericsConfig | None = None,
) -> MaslovResult:
    """
    Apply the counting rules to a trace.

    Each branch contributes the change of its sheet relative to -1, where a
    branch sitting at -1 on an endpoint is assigned the sheet it rests on;
    this realizes the departure and arrival rules exactly. With the path at
    hand interior crossings are localized by bisection and their direction is
    read from the crossing form when one is available.

    Args:
        trace: Rotation trace from track_spectral_flow
        path: The tracked path (enables localization and crossing forms)
        numerics: Tolerances

    Returns:
        MaslovResult

    Raises:
        DegenerateCrossingError: If a branch at -1 on an endpoint does not move
            resolvably on the adjacent step
    """
    numerics = resolve(numerics)
    locate_tol = numerics.x_locate_tol if (path is None or path.kind == "x") else numerics.lambda_locate_tol
    s, at = trace.sheets(numerics.eig_tol)
    m = len(trace.params)
    last = m - 1
    events: list[_Event] = []
    notes: list[str] = []
    index = 0

    for k in range(trace.n):
        level = np.where(at[:, k], np.round(s[:, k]), np.floor(s[:, k])).astype(int)
        index += int(level[last] - level[0])
        if np.all(at[:, k]):
            notes.append(f"eigenvalue resting at -1 along the whole path (branch {k})")
            continue
        effective = [j for j in range(m) if not at[j, k] or j in (0, last)]
        for a, b in zip(effective[:-1], effective[1:]):
            delta = int(level[b] - level[a])
            if a == 0 and at[0, k]:
                kind = "departure"
                param = float(trace.params[0])
                direction = int(np.sign(s[b, k] - level[0]))
                resting = b > 1
            elif b == last and at[last, k]:
                kind = "arrival"
                param = float(trace.params[last])
                direction = int(np.sign(level[last] - s[a, k]))
                resting = b - a > 1
            elif delta == 0 and b == a + 1:
                continue
            else:
                kind = "interior"
                direction = int(np.sign(delta))
                resting = b - a > 2
                if b == a + 1 and path is not None and path.evaluator is not None:
                    param = _locate_crossing(path, trace, a, k, max(level[a], level[b]), locate_tol)
                elif b == a + 1:
                    crossing = max(level[a], level[b])
                    weight = (crossing - s[a, k]) / (s[b, k] - s[a, k])
                    param = float(trace.params[a] + weight * (trace.params[b] - trace.params[a]))
                else:
                    run = np.arange(a + 1, b)
                    offsets = np.abs(s[run, k] - np.round(s[run, k]))
                    param = float(trace.params[run[np.argmin(offsets)]])
            if kind in ("departure", "arrival"):
                neighbour = b if kind == "departure" else a
                endpoint = 0 if kind == "departure" else last
                speed = abs(trace.angles[neighbour, k] - trace.angles[endpoint, k])
                if abs(neighbour - endpoint) == 1 and speed < DEGENERATE_SPEED:
                    raise DegenerateCrossingError(
                        f"{trace.label}: eigenvalue at -1 at {kind} param {param:.12g} "
                        f"moves by only {speed:.2e} rad on the adjacent step; refine the path"
                    )
            if resting:
                note = f"eigenvalue resting at -1 near param {param:.10g} ({kind}, branch {k})"
                notes.append(note)
                logger.warning("%s: %s", trace.label, note)
            events.append(_Event(k, param, kind, direction, delta))

    conjugate_points = _group_events(events, path, numerics, locate_tol, notes)
    total = sum(p.contribution for p in conjugate_points)
    if total != index:
        raise ConsistencyError(
            f"{trace.label}: conjugate-point contributions sum to {total} but the sheet count gives {index}"
        )
    return MaslovResult(index=index, conjugate_points=conjugate_points, trace=trace, notes=notes)


def _group_events(
    events: list[_Event],
    path: FramePairPath | None,
    numerics: NumericsConfig,
    locate_tol: float,
    notes: list[str],
) -> list[ConjugatePoint]:
    """Merge branch events at one parameter into conjugate points with multiplicity."""
    events = sorted(events, key=lambda e: (e.kind, e.param))
    groups: list[list[_Event]] = []
    for event in events:
        span = 1e3 * locate_tol * max(1.0, abs(event.param))
        if groups and groups[-1][0].kind == event.kind and abs(groups[-1][0].param - event.param) <= span:
            groups[-1].append(event)
        else:
            groups.append([event])

    points = []
    for group in groups:
        param = float(np.mean([e.param for e in group]))
        multiplicity = len(group)
        secant = tuple(sorted(e.direction for e in group))
        directions, source = secant, "secant"
        dimension = None
        if path is not None and path.evaluator is not None:
            first, second = path.evaluator(param)
            dimension = intersection_dimension(first, second, numerics.rank_tol)
            form = _form_directions(path, param, multiplicity)
            if form is not None:
                directions, source = tuple(sorted(form)), "crossing-form"
                if group[0].kind == "interior" and all(e.contribution for e in group) and directions != secant:
                    note = f"crossing form {directions} disagrees with rotation {secant} at {param:.10g}"
                    notes.append(note)
                    logger.warning("%s: %s", path.label, note)
        points.append(
            ConjugatePoint(
                param=param,
                multiplicity=multiplicity,
                directions=directions,
                kind=group[0].kind,
                contribution=sum(e.contribution for e in group),
                intersection_dimension=dimension,
                direction_source=source,
            )
        )
    return sorted(points, key=lambda p: p.param)


def track_and_count(path: FramePairPath, numerics: NumericsConfig | None = None) -> MaslovResult:
    """track_spectral_flow followed by maslov_index with the path available for localization."""
    trace = track_spectral_flow(path, numerics)
    result = maslov_index(trace, path, numerics)
    logger.info("%s: index %d, %d conjugate points", path.label, result.index, len(result.conjugate_points))
    return result


def x_path(
    system: HamiltonianSystem,
    lam: float,
    policy: TruncationPolicy,
    target: LagrangianFrame,
    numerics: NumericsConfig | None = None,
    evolved: EvolvedFramePath | None = None,
    label: str | None = None,
) -> FramePairPath:
    """
    The from-left frame over [-c, c] at fixed lambda against a fixed plane.

    The crossing form is that of the evolving frame, the target being constant.
    """
    numerics = resolve(numerics)
    evolved = evolved if evolved is not None else evolve_frame(system, lam, policy, 1, numerics)
    target = reframe(target)
    second = np.repeat(target.stacked[None, :, :], len(evolved), axis=0)

    def evaluator(x: float):
        return frame_at(system, evolved, x, numerics), target

    def form(x: float) -> np.ndarray:
        return crossing_form(system, lam, x, frame_at(system, evolved, x, numerics), target, numerics.rank_tol)

    return FramePairPath(
        params=evolved.xs,
        first=evolved.frames,
        second=second,
        evaluator=evaluator,
        crossing_form=form,
        kind="x",
        label=label or f"x-path at lambda={lam:.6g}",
    )


def _lambda_path(
    lambdas: np.ndarray, evaluator, label: str, workers: int, rotation: Literal[-1, 0, 1] = 0
) -> FramePairPath:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(evaluator, lambdas))
    else:
        pairs = [evaluator(lam) for lam in lambdas]
    return FramePairPath(
        params=lambdas,
        first=np.array([reframe(p[0]).stacked for p in pairs]),
        second=np.array([reframe(p[1]).stacked for p in pairs]),
        evaluator=evaluator,
        kind="lambda",
        label=label,
        rotation=rotation,
    )


def bottom_shelf(system: HamiltonianSystem, lam1: float, lam2: float, points: int = 21, workers: int = 1) -> FramePairPath:
    """(X_-(lam), X~_+(lam)) at x = -c for lam from lam1 to lam2."""

    def evaluator(lam: float):
        frames = system.asymptotic_frames(float(lam))
        return frames.X_minus, frames.Xtilde_plus

    return _lambda_path(np.linspace(lam1, lam2, points), evaluator, "bottom shelf", workers)


def matching_pair(
    system: HamiltonianSystem,
    lam: float,
    c: float,
    numerics: NumericsConfig | None = None,
    matching_point: float = 0.0,
) -> tuple[LagrangianFrame, LagrangianFrame]:
    """
    The pair (l(c; lam), l~(c; lam)) carried to the matching point by the common flow.

    Returns the from-left frame integrated from -c and the from-right frame
    integrated from +c, both evaluated at the matching point.
    """
    frames = system.asymptotic_frames(float(lam))
    left = propagate_frame(system, lam, frames.X_minus, -c, matching_point, numerics)
    right = propagate_frame(system, lam, frames.Xtilde_plus, c, matching_point, numerics)
    return left, right


def top_shelf(
    system: HamiltonianSystem,
    lam1: float,
    lam2: float,
    policy: TruncationPolicy,
    numerics: NumericsConfig | None = None,
    workers: int = 1,
    matching_point: float = 0.0,
) -> FramePairPath:
    """The top shelf, lambda running from lam2 down to lam1, evaluated at the matching point."""
    numerics = resolve(numerics)

    def evaluator(lam: float):
        return matching_pair(system, float(lam), policy.c, numerics, matching_point)

    lambdas = np.linspace(lam2, lam1, numerics.top_shelf_points)
    return _lambda_path(lambdas, evaluator, "top shelf", workers, rotation=1)


def maslov_box(
    system: HamiltonianSystem,
    lam1: float,
    lam2: float,
    policy: TruncationPolicy,
    numerics: NumericsConfig | None = None,
    workers: int = 1,
) -> MaslovBox:
    """
    Track the four shelves of the box [lam1, lam2] x [-c, c].

    Bottom: x = -c, lambda from lam1 to lam2. Right: lambda = lam2, x from -c
    to c against X~_+(lam2). Top: lambda from lam2 to lam1. Left: lambda = lam1,
    x from c back to -c.

    Raises:
        TruncationError: If the bottom shelf has a nonzero index
        ConsistencyError: If the four indices do not sum to zero, even after
            retracking the top shelf on doubled grids
    """
    numerics = resolve(numerics)
    c = policy.c
    system.check_admissible(lam1)
    system.check_admissible(lam2)

    bottom = track_and_count(bottom_shelf(system, lam1, lam2, workers=workers), numerics)
    if bottom.index != 0:
        raise TruncationError("transversality", f"bottom shelf index {bottom.index} at x=-{c}; increase c")

    right_target = system.asymptotic_frames(lam2).Xtilde_plus
    right = track_and_count(
        x_path(system, lam2, policy, right_target, numerics, label=f"right shelf (lambda={lam2:.6g})"), numerics
    )
    top = track_and_count(top_shelf(system, lam1, lam2, policy, numerics, workers), numerics)
    left_target = system.asymptotic_frames(lam1).Xtilde_plus
    left = track_and_count(
        x_path(system, lam1, policy, left_target, numerics, label=f"left shelf (lambda={lam1:.6g})").reversed(),
        numerics,
    )
    for _ in range(TOP_SHELF_RETRIES):
        if bottom.index + right.index + top.index + left.index == 0:
            break
        points = 2 * numerics.top_shelf_points - 1
        logger.warning(
            "shelf indices bottom=%d right=%d top=%d left=%d do not sum to zero; retracking the top shelf "
            "with %d points",
            bottom.index,
            right.index,
            top.index,
            left.index,
            points,
        )
        numerics = numerics.model_copy(update={"top_shelf_points": points})
        top = track_and_count(top_shelf(system, lam1, lam2, policy, numerics, workers), numerics)
    box = MaslovBox(lambda1=lam1, lambda2=lam2, c=c, bottom=bottom, right=right, top=top, left=left)
    if box.homotopy_sum != 0:
        raise ConsistencyError(
            f"shelf indices bottom={bottom.index} right={right.index} top={top.index} left={left.index} "
            f"do not sum to zero"
        )
    logger.info(
        "Maslov box [%.6g, %.6g] x [-%.4g, %.4g]: right=%d top=%d left=%d",
        lam1,
        lam2,
        c,
        c,
        right.index,
        top.index,
        left.index,
    )
    return box

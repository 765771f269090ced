"""Eigenvalue counts from Maslov indices.

Two routes are offered. The Maslov box tracks the four shelves of
[lambda1, lambda2] x [-c, c] and reads the count off the top shelf. The
kernel sum counts conjugate points of the from-left frame against the monotone
target of the system class (Dirichlet, or its fourth-order analogue), which
all rotate clockwise, so that N((-inf, lam)) is their number.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from maslov_count.core.errors import (
    ConditioningError,
    ConsistencyError,
    ContractViolationError,
    MonotonicityViolationError,
    UnsupportedConfigurationError,
)
from maslov_count.interfaces.hamiltonian_system import HamiltonianSystem
from maslov_count.models.counting import (
    CountArtifacts,
    CountMethod,
    CountResult,
    HormanderData,
    KernelSum,
)
from maslov_count.models.evolution import EvolvedFramePath
from maslov_count.models.frames import LagrangianFrame, SymplecticForm
from maslov_count.models.maslov import ConjugatePoint, FramePairPath
from maslov_count.models.numerics import NumericsConfig, resolve
from maslov_count.models.spectral import SpectralInterval, TruncationPolicy
from maslov_count.services.frame_evolution import crossing_form, evolve_frame, frame_at
from maslov_count.services.hamiltonian import left_shelf_bound
from maslov_count.services.maslov_engine import matching_pair, maslov_box, track_and_count, x_path
from maslov_count.services.symplectic import (
    intersection_dimension,
    lagrangian_frame_from_unitary,
    reframe,
    symplectic_inner,
    unitary_from_frame,
)
from maslov_count.services.truncation import choose_truncation

logger = logging.getLogger(__name__)

CLOSED_FORM_EXCHANGE = {"sturm-liouville", "fourth-order", "differential-algebraic"}
ENDPOINT_SHIFT_TRIES = 8


def _sigma_min(target: LagrangianFrame, frame: LagrangianFrame) -> float:
    return float(np.linalg.svd(symplectic_inner(target, reframe(frame)), compute_uv=False)[-1])


def endpoint_defect(
    system: HamiltonianSystem, lam: float, c: float, numerics: NumericsConfig | None = None
) -> float:
    """Smallest singular value of the pairing of l(c; lam) and l~(c; lam) at the matching point."""
    left, right = matching_pair(system, lam, c, numerics)
    return _sigma_min(reframe(left), right)


def resolve_endpoint(
    system: HamiltonianSystem, lam: float, c: float, numerics: NumericsConfig | None = None
) -> tuple[float, bool]:
    """
    Move an interval end off the point spectrum.

    An end that is numerically an eigenvalue is shifted down; this keeps the
    half-open convention: an eigenvalue at lambda1 is counted and one at
    lambda2 is not.

    Returns:
        (lambda to use, whether it was shifted)
    """
    numerics = resolve(numerics)
    threshold = 10.0 * numerics.rank_tol
    if endpoint_defect(system, lam, c, numerics) >= threshold:
        return lam, False
    step = np.sqrt(numerics.rank_tol) * max(1.0, abs(lam))
    for _ in range(ENDPOINT_SHIFT_TRIES):
        shifted = lam - step
        system.check_admissible(shifted)
        if endpoint_defect(system, shifted, c, numerics) >= threshold:
            logger.warning("lambda=%.12g is numerically an eigenvalue; using %.12g", lam, shifted)
            return shifted, True
        step *= 2.0
    raise ConsistencyError(f"no transversal lambda found below the eigenvalue {lam}")


def kernel_sum_count(
    system: HamiltonianSystem,
    lam: float,
    policy: TruncationPolicy,
    target: LagrangianFrame | None = None,
    numerics: NumericsConfig | None = None,
    evolved: EvolvedFramePath | None = None,
) -> KernelSum:
    """
    Sum of dim(l(x; lam) ∩ target) over x in (-c, c).

    The smallest singular value of target* J X(x) is scanned on the evolution
    grid; each interior local minimum is refined by a bounded scalar
    minimization and kept when it reaches zero. Every kept point must have a
    negative definite crossing form. An intersection at x = c is an arrival
    and does not count.

    Args:
        system: Hamiltonian system
        lam: Spectral parameter
        policy: Truncation policy
        target: Fixed plane (default: the system's monotone target)
        numerics: Tolerances
        evolved: Precomputed from-left path at lam

    Returns:
        KernelSum

    Raises:
        MonotonicityViolationError: If a crossing rotates counterclockwise
    """
    numerics = resolve(numerics)
    target = reframe(target if target is not None else system.monotone_target())
    evolved = evolved if evolved is not None else evolve_frame(system, lam, policy, 1, numerics)
    xs = evolved.xs
    sigma = np.array([_sigma_min(target, evolved.frame(i)) for i in range(len(xs))])
    threshold = np.sqrt(numerics.rank_tol)

    def objective(x: float) -> float:
        return _sigma_min(target, frame_at(system, evolved, x, numerics))

    excluded = []
    if sigma[0] < threshold:
        excluded.append(float(xs[0]))
    if sigma[-1] < threshold:
        excluded.append(float(xs[-1]))

    located: list[float] = []
    for i in range(1, len(xs) - 1):
        if not (sigma[i] <= sigma[i - 1] and sigma[i] <= sigma[i + 1]):
            continue
        found = minimize_scalar(
            objective,
            bounds=(float(xs[i - 1]), float(xs[i + 1])),
            method="bounded",
            options={"xatol": numerics.x_locate_tol},
        )
        if found.fun >= threshold:
            continue
        x = float(found.x)
        at_start = sigma[0] < threshold and x <= xs[1]
        at_end = sigma[-1] < threshold and x >= xs[-2]
        if at_start or at_end:
            continue
        if located and abs(x - located[-1]) <= 1e3 * numerics.x_locate_tol:
            continue
        located.append(x)

    points = []
    for x in located:
        frame = frame_at(system, evolved, x, numerics)
        multiplicity = intersection_dimension(frame, target, threshold)
        form = crossing_form(system, lam, x, frame, target, threshold)
        signs = np.sign(np.linalg.eigvalsh(form)).astype(int)
        if np.any(signs > 0):
            raise MonotonicityViolationError(
                f"crossing of the monotone target at x={x:.10g}, lambda={lam} rotates counterclockwise"
            )
        points.append(
            ConjugatePoint(
                param=x,
                multiplicity=multiplicity,
                directions=tuple(int(s) for s in signs),
                kind="interior",
                contribution=-multiplicity,
                intersection_dimension=multiplicity,
                direction_source="crossing-form",
            )
        )

    total = sum(p.multiplicity for p in points)
    logger.debug("Kernel sum at lambda=%.8g: %d (%d excluded ends)", lam, total, len(excluded))
    return KernelSum(
        lam=float(lam),
        total=total,
        conjugate_points=points,
        xs=xs,
        sigma=sigma,
        excluded=excluded,
        path=evolved,
    )


def _require_below_bands(system: HamiltonianSystem, lam: float) -> None:
    ranges = system.essential_spectrum().excluded_ranges
    if ranges and lam >= min(r.lower for r in ranges):
        raise UnsupportedConfigurationError(
            f"counting from -infinity is defined only below every excluded range; lambda={lam} is not"
        )


def _policy_for(
    system: HamiltonianSystem, lam1: float, lam2: float, numerics: NumericsConfig
) -> TruncationPolicy:
    interval = SpectralInterval(lambda1=lam1, lambda2=lam2, kappa=system.essential_spectrum().kappa)
    return choose_truncation(system, interval, numerics=numerics)


def count_below(
    system: HamiltonianSystem,
    lam2: float,
    policy: TruncationPolicy | None = None,
    numerics: NumericsConfig | None = None,
) -> CountResult:
    """
    Count eigenvalues in (-inf, lam2) as the kernel sum at lam2.

    The floor shelf at the left-shelf bound is checked to be empty.

    Raises:
        UnsupportedConfigurationError: For lam2 above an excluded range
        ConsistencyError: If the floor shelf has conjugate points
    """
    numerics = resolve(numerics)
    _require_below_bands(system, lam2)
    system.check_admissible(lam2)
    floor = left_shelf_bound(system, lam2)
    if floor >= lam2:
        floor = lam2 - (1.0 + abs(lam2))
    policy = policy or _policy_for(system, floor, lam2, numerics)

    notes = []
    endpoints = []
    lam_used, shifted = resolve_endpoint(system, lam2, policy.c, numerics)
    if shifted:
        endpoints.append(lam2)
        notes.append(f"lambda2={lam2!r} is an eigenvalue; counted at {lam_used!r}")

    at_floor = kernel_sum_count(system, floor, policy, numerics=numerics)
    if at_floor.total:
        raise ConsistencyError(f"{at_floor.total} conjugate points on the floor shelf lambda={floor}")
    at_top = kernel_sum_count(system, lam_used, policy, numerics=numerics)

    logger.info("N(-inf, %.8g) = %d (c=%.4g, floor %.6g)", lam2, at_top.total, policy.c, floor)
    result = CountResult(
        N=at_top.total,
        lambda2=lam2,
        kappa=system.essential_spectrum().kappa,
        method="kernel-sum",
        c=policy.c,
        conjugate_points=at_top.records(),
        eigenvalue_endpoints=endpoints,
        floor=floor,
        notes=notes,
    )
    return result.attach(CountArtifacts(policy=policy, kernel_sums=[at_floor, at_top]))


def count_interval(
    system: HamiltonianSystem,
    lam1: float,
    lam2: float,
    policy: TruncationPolicy | None = None,
    numerics: NumericsConfig | None = None,
    method: CountMethod = "maslov-box",
    workers: int = 1,
) -> CountResult:
    """
    Count eigenvalues in [lam1, lam2).

    Args:
        system: Hamiltonian system
        lam1: Lower end (included)
        lam2: Upper end (excluded)
        policy: Truncation policy (default: chosen for the interval)
        numerics: Tolerances
        method: "maslov-box", "kernel-sum", or "both" (which cross-checks)
        workers: Threads for lambda sweeps

    Raises:
        ConsistencyError: If the box is inconsistent or the two methods disagree
    """
    numerics = resolve(numerics)
    if not lam1 < lam2:
        raise ContractViolationError(f"lambda1={lam1} must be below lambda2={lam2}")
    system.check_admissible(lam1)
    system.check_admissible(lam2)
    policy = policy or _policy_for(system, lam1, lam2, numerics)

    notes: list[str] = []
    endpoints: list[float] = []
    ends = []
    for name, lam in (("lambda1", lam1), ("lambda2", lam2)):
        used, shifted = resolve_endpoint(system, lam, policy.c, numerics)
        if shifted:
            endpoints.append(lam)
            notes.append(f"{name}={lam!r} is an eigenvalue; evaluated at {used!r}")
        ends.append(used)
    lo, hi = ends

    counts: dict[str, int] = {}
    box = None
    kernel_sums: list[KernelSum] = []
    traces = {}
    records = []
    if method in ("maslov-box", "both"):
        box = maslov_box(system, lo, hi, policy, numerics, workers)
        if box.top.index < 0:
            raise ConsistencyError(f"top shelf index {box.top.index} is negative")
        counts["maslov-box"] = box.top.index
        traces = {name: result.trace for name, result in box.shelves.items()}
        records = box.top.summary().conjugate_points
        notes.extend(f"{name}: {note}" for name, result in box.shelves.items() for note in result.notes)
    if method in ("kernel-sum", "both"):
        kernel_sums = [kernel_sum_count(system, lam, policy, numerics=numerics) for lam in (lo, hi)]
        difference = kernel_sums[1].total - kernel_sums[0].total
        if difference < 0:
            raise MonotonicityViolationError(
                f"kernel sum decreased from {kernel_sums[0].total} at {lo} to {kernel_sums[1].total} at {hi}"
            )
        counts["kernel-sum"] = difference
        if not records:
            records = kernel_sums[1].records()
    if len(set(counts.values())) > 1:
        raise ConsistencyError(f"methods disagree on [{lam1}, {lam2}): {counts}")

    N = next(iter(counts.values()))
    logger.info("N[%.8g, %.8g) = %d by %s (c=%.4g)", lam1, lam2, N, method, policy.c)
    result = CountResult(
        N=N,
        lambda1=lam1,
        lambda2=lam2,
        kappa=system.essential_spectrum().kappa,
        method=method,
        c=policy.c,
        shelf_indices={name: r.index for name, r in box.shelves.items()} if box else None,
        conjugate_points=records,
        eigenvalue_endpoints=endpoints,
        box=box.to_result() if box else None,
        notes=notes,
    )
    return result.attach(CountArtifacts(policy=policy, kernel_sums=kernel_sums, traces=traces))


def interpolation_index(plane: LagrangianFrame, target: LagrangianFrame, transversal: LagrangianFrame) -> int:
    """
    n_+ + n_0 of the Hermitian S with plane = span(F^ + T S).

    F^ = F (T* J F)^{-1} normalizes the transversal F against the target T, so
    that T* J F^ = I. The plane must be transversal to the target.

    Raises:
        ConditioningError: If the plane or the transversal meets the target
    """
    T = reframe(target).stacked
    F = reframe(transversal).stacked
    n = plane.n
    pairing = SymplecticForm(n).pair(T, F)
    if np.linalg.svd(pairing, compute_uv=False)[-1] < np.sqrt(np.finfo(float).eps):
        raise ConditioningError("transversal meets the target")
    F_hat = F @ np.linalg.inv(pairing)
    coords = np.linalg.solve(np.hstack([F_hat, T]), reframe(plane).stacked)
    a, b = coords[:n], coords[n:]
    if np.linalg.svd(a, compute_uv=False)[-1] < np.sqrt(np.finfo(float).eps):
        raise ConditioningError("plane is not transversal to the target")
    S = b @ np.linalg.inv(a)
    eigenvalues = np.linalg.eigvalsh(0.5 * (S + S.conj().T))
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    return int(np.sum(eigenvalues > -1e-10 * scale))


def unitary_geodesic(start: LagrangianFrame, end: LagrangianFrame):
    """Path t -> plane of U0 exp(t log(U0* U1)) between two planes, t in [0, 1]."""
    U0 = unitary_from_frame(start)
    U1 = unitary_from_frame(end)
    T, Z = scipy.linalg.schur(U0.conj().T @ U1, output="complex")
    phases = np.angle(np.diag(T))

    def at(t: float) -> LagrangianFrame:
        return lagrangian_frame_from_unitary(U0 @ Z @ np.diag(np.exp(1j * t * phases)) @ Z.conj().T)

    return at


def hormander_index(
    target_new: LagrangianFrame,
    target_old: LagrangianFrame,
    start: LagrangianFrame,
    end: LagrangianFrame,
    numerics: NumericsConfig | None = None,
    points: int = 33,
) -> int:
    """
    Mas(g, target_new) - Mas(g, target_old) for a path g from start to end.

    The difference does not depend on the path; the unitary geodesic is used.
    """
    numerics = resolve(numerics)
    path_at = unitary_geodesic(start, end)
    ts = np.linspace(0.0, 1.0, points)
    frames = np.array([reframe(path_at(t)).stacked for t in ts])
    indices = []
    for label, target in (("new target", target_new), ("old target", target_old)):
        target = reframe(target)
        path = FramePairPath(
            params=ts,
            first=frames,
            second=np.repeat(target.stacked[None], points, axis=0),
            evaluator=lambda t, target=target: (path_at(t), target),
            kind="lambda",
            label=f"exchange path against {label}",
        )
        indices.append(track_and_count(path, numerics).index)
    return indices[0] - indices[1]


def exchange_index(
    target_new: LagrangianFrame,
    target_old: LagrangianFrame,
    start: LagrangianFrame,
    end: LagrangianFrame,
) -> int:
    """
    Mas(g, target_new) - Mas(g, target_old) for any path g from start to end, as I(end) - I(start).

    I is the interpolation index against target_old with target_new as the
    transversal: in the chart of planes transversal to target_old the straight
    path between the endpoint graphs never meets target_old and meets
    target_new where its graph matrix is singular.

    Raises:
        ConditioningError: If the targets meet, or an endpoint meets target_old
    """
    return interpolation_index(end, target_old, target_new) - interpolation_index(start, target_old, target_new)


def hormander_exchange(
    system: HamiltonianSystem,
    lam: float,
    policy: TruncationPolicy | None = None,
    numerics: NumericsConfig | None = None,
    verify: bool = False,
) -> HormanderData:
    """
    Exchange the target l~_+(lam) for the monotone target.

    For Sturm-Liouville and fourth-order systems the index is 0 at any lambda
    that is not an eigenvalue; differential-algebraic systems reuse that
    result and are flagged ``asserted``. Other systems compute it as the
    interpolation-index difference I(l_+) - I(l_-), tracking a unitary
    geodesic between l_- and l_+ when the targets meet. At an eigenvalue the
    exchange is made at a slightly smaller lambda.

    Args:
        verify: Also compute both Maslov indices of the from-left path and
            check the exchange identity; a computed index is also checked
            against the geodesic

    Raises:
        ConsistencyError: If ``verify`` finds the identity violated
    """
    numerics = resolve(numerics)
    system.check_admissible(lam)
    policy = policy or _policy_for(system, lam - (1.0 + abs(lam)), lam, numerics)
    used, shifted = resolve_endpoint(system, lam, policy.c, numerics)

    evolved = evolve_frame(system, used, policy, 1, numerics)
    target_old = system.asymptotic_frames(used).Xtilde_plus
    target_new = system.monotone_target()
    closed = system.kind in CLOSED_FORM_EXCHANGE
    if closed:
        s = 0
    else:
        try:
            s = exchange_index(target_new, target_old, evolved.start, evolved.end)
        except ConditioningError as e:
            logger.info("Interpolation index unavailable at lambda=%.8g (%s); tracking a geodesic", used, e)
            s = hormander_index(target_new, target_old, evolved.start, evolved.end, numerics)

    maslov_old = maslov_new = None
    if verify:
        if not closed:
            geodesic = hormander_index(target_new, target_old, evolved.start, evolved.end, numerics)
            if geodesic != s:
                raise ConsistencyError(f"exchange at lambda={used}: interpolation index {s}, geodesic {geodesic}")
        maslov_old = track_and_count(x_path(system, used, policy, target_old, numerics, evolved), numerics).index
        maslov_new = track_and_count(x_path(system, used, policy, target_new, numerics, evolved), numerics).index
        if -maslov_old != -maslov_new + s:
            raise ConsistencyError(
                f"exchange at lambda={used}: -Mas(old)={-maslov_old}, -Mas(new)={-maslov_new}, s={s}"
            )
    logger.info("Target exchange at lambda=%.8g: s=%d (%s)", used, s, "closed form" if closed else "computed")
    return HormanderData(
        lam=float(used),
        target_old=target_old,
        target_new=target_new,
        ell_minus=evolved.start,
        ell_plus=evolved.end,
        s=s,
        closed_form=closed,
        asserted=system.kind == "differential-algebraic",
        shifted_from=float(lam) if shifted else None,
        maslov_old=maslov_old,
        maslov_new=maslov_new,
    )


def conjugate_point_totals(
    system: HamiltonianSystem,
    lambdas,
    policy: TruncationPolicy,
    numerics: NumericsConfig | None = None,
    workers: int = 1,
) -> list[KernelSum]:
    """
    Kernel sums over a lambda grid, in increasing lambda.

    Raises:
        MonotonicityViolationError: If the totals decrease along increasing lambda
    """
    numerics = resolve(numerics)
    lambdas = sorted(float(lam) for lam in lambdas)

    def scan(lam: float) -> KernelSum:
        return kernel_sum_count(system, lam, policy, numerics=numerics)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(scan, lambdas))
    else:
        sums = [scan(lam) for lam in lambdas]
    totals = [s.total for s in sums]
    drops = [i for i in range(1, len(totals)) if totals[i] < totals[i - 1]]
    if drops:
        i = drops[0]
        raise MonotonicityViolationError(
            f"conjugate-point total drops from {totals[i - 1]} at {lambdas[i - 1]} to {totals[i]} at {lambdas[i]}"
        )
    return sums

"""Orchestration of one configured run: build, count, compare, export."""

import logging
from pathlib import Path

from maslov_count.core.config import get_settings
from maslov_count.core.errors import ContractViolationError
from maslov_count.models.config import (
    ConjugatePointsQuery,
    CountBelowQuery,
    CountIntervalQuery,
    MaslovBoxQuery,
    OracleCompareQuery,
    RunConfig,
)
from maslov_count.models.counting import CountArtifacts, LambdaTotal
from maslov_count.models.numerics import NumericsConfig
from maslov_count.models.results import OracleComparison, RunResult
from maslov_count.models.spectral import SpectralInterval, TruncationPolicy
from maslov_count.services.asymptotics import essential_spectrum_edge
from maslov_count.services.counting import conjugate_point_totals, count_below, count_interval
from maslov_count.services.export import package_versions, write_run
from maslov_count.services.hamiltonian import HamiltonianSystemBase, left_shelf_bound
from maslov_count.services.maslov_engine import maslov_box
from maslov_count.services.oracle import DiscretizationSpec, oracle_count, oracle_eigenvalues
from maslov_count.services.system_factory import build_system
from maslov_count.services.truncation import choose_truncation, fixed_truncation

logger = logging.getLogger(__name__)

ORACLE_MIN_HALF_WIDTH = 20.0


def resolve_numerics(config: RunConfig) -> NumericsConfig:
    """Settings defaults with the config's overrides applied."""
    return NumericsConfig.from_settings(**config.numerics.tolerances())


def truncation_for(
    system: HamiltonianSystemBase,
    config: RunConfig,
    numerics: NumericsConfig,
    lam1: float,
    lam2: float,
) -> TruncationPolicy:
    """The configured fixed half-width, or one chosen for [lam1, lam2]."""
    if config.numerics.c is not None:
        return fixed_truncation(config.numerics.c, numerics)
    interval = SpectralInterval(lambda1=lam1, lambda2=lam2, kappa=essential_spectrum_edge(system).kappa)
    return choose_truncation(system, interval, numerics=numerics)


def _floor_below(system: HamiltonianSystemBase, lam2: float) -> float:
    floor = left_shelf_bound(system, lam2)
    return floor if floor < lam2 else lam2 - (1.0 + abs(lam2))


def execute(
    config: RunConfig,
    base_dir: Path | None = None,
    workers: int | None = None,
) -> tuple[RunResult, CountArtifacts | None]:
    """
    Run the configured query.

    Args:
        config: Validated run config with a query
        base_dir: Directory tabulated coefficient paths are relative to
        workers: Thread count for lambda sweeps (default: config, then settings)

    Returns:
        (result document, side artifacts for export)

    Raises:
        ContractViolationError: If the config has no query
        MaslovCountError: From any computation step
    """
    query = config.query
    if query is None:
        raise ContractViolationError("the config has no query")
    workers = workers or config.workers or get_settings().workers
    numerics = resolve_numerics(config)
    system = build_system(config.system, base_dir)

    result = RunResult(
        query=query.query,
        system_kind=system.kind,
        config=config.model_dump(mode="json"),
        numerics=numerics,
        versions=package_versions(),
    )
    artifacts = None

    match query:
        case CountIntervalQuery():
            policy = truncation_for(system, config, numerics, query.lambda1, query.lambda2)
            count = count_interval(
                system, query.lambda1, query.lambda2, policy, numerics, query.method, workers
            )
            artifacts = count.artifacts
            result = result.model_copy(update={"policy": policy, "count": count, "notes": count.notes})
        case CountBelowQuery():
            policy = truncation_for(system, config, numerics, _floor_below(system, query.lambda2), query.lambda2)
            count = count_below(system, query.lambda2, policy, numerics)
            artifacts = count.artifacts
            result = result.model_copy(update={"policy": policy, "count": count, "notes": count.notes})
        case MaslovBoxQuery():
            policy = truncation_for(system, config, numerics, query.lambda1, query.lambda2)
            box = maslov_box(system, query.lambda1, query.lambda2, policy, numerics, workers)
            artifacts = CountArtifacts(
                policy=policy, traces={name: shelf.trace for name, shelf in box.shelves.items()}
            )
            summary = box.to_result()
            result = result.model_copy(update={"policy": policy, "box": summary, "notes": summary.notes})
        case ConjugatePointsQuery():
            grid = query.grid()
            policy = truncation_for(system, config, numerics, min(grid), max(grid))
            sums = conjugate_point_totals(system, grid, policy, numerics, workers)
            totals = [LambdaTotal(lam=s.lam, total=s.total) for s in sums]
            artifacts = CountArtifacts(policy=policy, kernel_sums=sums)
            result = result.model_copy(update={"policy": policy, "totals": totals})
        case OracleCompareQuery():
            result, artifacts = _compare_with_oracle(system, config, query, numerics, workers, result)
    return result, artifacts


def _compare_with_oracle(
    system: HamiltonianSystemBase,
    config: RunConfig,
    query: OracleCompareQuery,
    numerics: NumericsConfig,
    workers: int,
    result: RunResult,
) -> tuple[RunResult, CountArtifacts | None]:
    if query.lambda1 is None:
        policy = truncation_for(system, config, numerics, _floor_below(system, query.lambda2), query.lambda2)
        count = count_below(system, query.lambda2, policy, numerics)
    else:
        policy = truncation_for(system, config, numerics, query.lambda1, query.lambda2)
        count = count_interval(system, query.lambda1, query.lambda2, policy, numerics, workers=workers)
    spec = DiscretizationSpec(L=query.L or max(ORACLE_MIN_HALF_WIDTH, 2.0 * policy.c), N=query.N)
    oracle_N = oracle_count(system, query.lambda1, query.lambda2, spec, c=policy.c)
    low = float("-inf") if query.lambda1 is None else query.lambda1
    eigenvalues = oracle_eigenvalues(system, spec, (low, query.lambda2))
    comparison = OracleComparison(
        lambda1=query.lambda1,
        lambda2=query.lambda2,
        maslov_N=count.N,
        oracle_N=oracle_N,
        agree=count.N == oracle_N,
        L=spec.L,
        N=spec.N,
        oracle_eigenvalues=[float(v) for v in eigenvalues],
    )
    if not comparison.agree:
        logger.warning("Maslov count %d disagrees with the oracle count %d", count.N, oracle_N)
    notes = list(count.notes)
    return (
        result.model_copy(update={"policy": policy, "count": count, "oracle": comparison, "notes": notes}),
        count.artifacts,
    )


def run(
    config: RunConfig,
    base_dir: Path | None = None,
    out: Path | None = None,
    workers: int | None = None,
) -> tuple[RunResult, list[Path]]:
    """Execute a run and write its result files; returns the result and the written paths."""
    result, artifacts = execute(config, base_dir, workers)
    directory = out or config.output.directory or get_settings().output_directory
    written = write_run(result, Path(directory), artifacts, config.output.csv)
    return result, written

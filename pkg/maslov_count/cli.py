"""Command-line front end using Click.

Exit status: 0 on success, 2 when the config fails schema validation, 3 when
a computation fails (the error code is printed).
"""

from functools import wraps
from pathlib import Path

import click
from pydantic import TypeAdapter, ValidationError

from maslov_count.core.errors import MaslovCountError
from maslov_count.core.logging_setup import configure_logging
from maslov_count.models.config import QueryConfig, RunConfig
from maslov_count.models.results import RunResult
from maslov_count.services.hamiltonian import validate_system
from maslov_count.services.pipeline import run
from maslov_count.services.system_factory import build_system

SCHEMA_ERROR = 2
COMPUTATION_ERROR = 3

_queries = TypeAdapter(QueryConfig)


def _schema_error(error: ValidationError) -> None:
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        click.echo(f"config error at {location}: {item['msg']}", err=True)
    raise SystemExit(SCHEMA_ERROR)


def _load_config(path: Path) -> RunConfig:
    try:
        return RunConfig.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        _schema_error(e)


def run_options(func):
    """--config, --out, --workers and --verbose, shared by every subcommand."""

    @click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        required=True,
        help="JSON run config",
    )
    @click.option(
        "--out",
        type=click.Path(file_okay=False, path_type=Path),
        default=None,
        help="Result directory (default: config output.directory, then settings)",
    )
    @click.option("--workers", type=click.IntRange(min=1), default=None, help="Threads for lambda sweeps")
    @click.option("--verbose", is_flag=True, default=False, help="Log at DEBUG level")
    @wraps(func)
    def wrapper(*args, **kwargs):
        configure_logging(kwargs["verbose"])
        return func(*args, **kwargs)

    return wrapper


def _with_query(config: RunConfig, kind: str, **options) -> RunConfig:
    """Query of the given kind from the config, overridden by command-line options."""
    base = config.query.model_dump() if config.query is not None and config.query.query == kind else {}
    base.update({k: v for k, v in options.items() if v is not None})
    base["query"] = kind
    try:
        query = _queries.validate_python(base)
    except ValidationError as e:
        _schema_error(e)
    return config.model_copy(update={"query": query})


def _summarize(result: RunResult) -> None:
    if result.count is not None:
        count = result.count
        low = "-inf" if count.lambda1 is None else repr(count.lambda1)
        click.echo(f"N[{low}, {count.lambda2!r}) = {count.N} ({count.method}, c={count.c:.6g})")
        if count.shelf_indices:
            click.echo("shelves: " + ", ".join(f"{k}={v}" for k, v in count.shelf_indices.items()))
        for value in count.eigenvalue_endpoints:
            click.echo(f"endpoint {value!r} is an eigenvalue")
    if result.box is not None:
        box = result.box
        click.echo(
            f"bottom={box.bottom.index} right={box.right.index} top={box.top.index} "
            f"left={box.left.index} sum={box.homotopy_sum} count={box.count}"
        )
    if result.totals is not None:
        for item in result.totals:
            click.echo(f"lambda={item.lam!r}: {item.total} conjugate points")
    if result.oracle is not None:
        oracle = result.oracle
        verdict = "agree" if oracle.agree else "DISAGREE"
        click.echo(f"maslov N={oracle.maslov_N}, oracle N={oracle.oracle_N}: {verdict}")
    for note in result.notes:
        click.echo(f"note: {note}")


def _execute(config: RunConfig, config_path: Path, out: Path | None, workers: int | None) -> None:
    try:
        result, written = run(config, base_dir=config_path.parent, out=out, workers=workers)
    except MaslovCountError as e:
        click.echo(f"error [{e.code}]: {e}", err=True)
        raise SystemExit(COMPUTATION_ERROR) from e
    _summarize(result)
    click.echo(f"Wrote {written[0]}")


@click.group()
def cli() -> None:
    """Maslov count - eigenvalue counting for Hamiltonian systems via spectral flow."""
    pass


@cli.command()
@run_options
@click.option("--lambda1", type=float, default=None, help="Lower end (included)")
@click.option("--lambda2", type=float, default=None, help="Upper end (excluded)")
@click.option(
    "--method",
    type=click.Choice(["maslov-box", "kernel-sum", "both"]),
    default=None,
    help="Counting method (default: maslov-box)",
)
def count(config_path, out, workers, verbose, lambda1, lambda2, method) -> None:
    """Count eigenvalues in [lambda1, lambda2)."""
    config = _with_query(_load_config(config_path), "count_interval", lambda1=lambda1, lambda2=lambda2, method=method)
    _execute(config, config_path, out, workers)


@cli.command()
@run_options
@click.option("--lambda2", type=float, default=None, help="Upper end (excluded)")
def below(config_path, out, workers, verbose, lambda2) -> None:
    """Count eigenvalues below lambda2."""
    config = _with_query(_load_config(config_path), "count_below", lambda2=lambda2)
    _execute(config, config_path, out, workers)


@cli.command()
@run_options
@click.option("--lambda1", type=float, default=None)
@click.option("--lambda2", type=float, default=None)
def box(config_path, out, workers, verbose, lambda1, lambda2) -> None:
    """Track the four shelves of the Maslov box."""
    config = _with_query(_load_config(config_path), "maslov_box", lambda1=lambda1, lambda2=lambda2)
    _execute(config, config_path, out, workers)


@cli.command()
@run_options
@click.option("--lambda-min", type=float, default=None)
@click.option("--lambda-max", type=float, default=None)
@click.option("--points", type=click.IntRange(min=1), default=None)
def conjugates(config_path, out, workers, verbose, lambda_min, lambda_max, points) -> None:
    """Conjugate-point totals against the monotone target on a lambda grid."""
    config = _with_query(
        _load_config(config_path),
        "conjugate_points",
        lambda_min=lambda_min,
        lambda_max=lambda_max,
        points=points,
    )
    _execute(config, config_path, out, workers)


@cli.command()
@run_options
@click.option("--lambda1", type=float, default=None, help="Lower end; omit to count from -infinity")
@click.option("--lambda2", type=float, default=None)
@click.option("--half-width", "L", type=float, default=None, help="Oracle domain half-width")
@click.option("--points", "N", type=click.IntRange(min=200), default=None, help="Oracle grid points")
def oracle(config_path, out, workers, verbose, lambda1, lambda2, L, N) -> None:
    """Compare the Maslov count with the finite-difference count."""
    config = _with_query(_load_config(config_path), "oracle_compare", lambda1=lambda1, lambda2=lambda2, L=L, N=N)
    _execute(config, config_path, out, workers)


@cli.command(name="run")
@run_options
def run_config(config_path, out, workers, verbose) -> None:
    """Run the query given in the config."""
    config = _load_config(config_path)
    if config.query is None:
        click.echo("config error at query: a query is required for run", err=True)
        raise SystemExit(SCHEMA_ERROR)
    _execute(config, config_path, out, workers)


@cli.command()
@run_options
def validate(config_path, out, workers, verbose) -> None:
    """Check the config schema and sample the system against its assumptions."""
    config = _load_config(config_path)
    try:
        system = build_system(config.system, config_path.parent)
        report = validate_system(system)
    except MaslovCountError as e:
        click.echo(f"error [{e.code}]: {e}", err=True)
        raise SystemExit(COMPUTATION_ERROR) from e
    click.echo(report.model_dump_json(indent=2))


if __name__ == "__main__":
    cli()

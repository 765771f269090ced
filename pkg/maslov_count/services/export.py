"""Result files: the JSON result document and RFC-4180 CSV side files.

Floats are written in shortest round-trip form so that files re-ingest
bit-for-bit.
"""

import csv
import logging
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np
import scipy

from maslov_count import __version__
from maslov_count.models.counting import CountArtifacts, KernelSum
from maslov_count.models.evolution import EvolvedFramePath
from maslov_count.models.maslov import ConjugatePointRecord, RotationTrace
from maslov_count.models.results import RunResult

logger = logging.getLogger(__name__)


def package_versions() -> dict[str, str]:
    """Versions of this package and of the numerical stack."""
    try:
        own = version("maslov-count")
    except PackageNotFoundError:
        own = __version__
    return {"maslov-count": own, "numpy": np.__version__, "scipy": scipy.__version__}


def _number(value: float) -> str:
    return repr(float(value))


def _write_rows(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    logger.debug("Wrote %s", path)
    return path


def write_trace_csv(trace: RotationTrace, path: Path) -> Path:
    """param, angle_1 .. angle_n (unwrapped)."""
    header = ["param"] + [f"angle_{k + 1}" for k in range(trace.n)]
    rows = ([_number(t)] + [_number(a) for a in angles] for t, angles in zip(trace.params, trace.angles))
    return _write_rows(path, header, rows)


def write_scan_csv(kernel_sum: KernelSum, path: Path) -> Path:
    """x, sigma_min of the pairing with the monotone target."""
    rows = ([_number(x), _number(s)] for x, s in zip(kernel_sum.xs, kernel_sum.sigma))
    return _write_rows(path, ["x", "sigma_min"], rows)


def write_path_csv(path_data: EvolvedFramePath, path: Path) -> Path:
    """x, log_scale and the real and imaginary parts of every frame entry (row-major)."""
    rows_n, cols_n = path_data.frames.shape[1:]
    header = ["x", "log_scale"]
    for i in range(rows_n):
        for j in range(cols_n):
            header += [f"re_{i + 1}_{j + 1}", f"im_{i + 1}_{j + 1}"]

    def rows():
        for x, scale, frame in zip(path_data.xs, path_data.log_scale, path_data.frames):
            entries = []
            for value in frame.ravel():
                entries += [_number(value.real), _number(value.imag)]
            yield [_number(x), _number(scale)] + entries

    return _write_rows(path, header, rows())


def write_conjugate_points_csv(records: list[ConjugatePointRecord], path: Path) -> Path:
    rows = (
        [_number(r.param), r.multiplicity, r.kind, r.contribution, " ".join(str(d) for d in r.directions)]
        for r in records
    )
    return _write_rows(path, ["param", "multiplicity", "kind", "contribution", "directions"], rows)


def write_result(result: RunResult, directory: Path) -> Path:
    """Write result.json and return its path."""
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "result.json"
    path.write_text(result.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


def write_run(
    result: RunResult,
    directory: Path,
    artifacts: CountArtifacts | None = None,
    write_csv: bool = True,
) -> list[Path]:
    """Write the result document and, when requested, its CSV side files."""
    written = [write_result(result, directory)]
    if not write_csv:
        return written
    if result.count is not None and result.count.conjugate_points:
        written.append(write_conjugate_points_csv(result.count.conjugate_points, directory / "conjugate_points.csv"))
    if artifacts is not None:
        for name, trace in artifacts.traces.items():
            written.append(write_trace_csv(trace, directory / f"trace_{name}.csv"))
        for kernel_sum in artifacts.kernel_sums:
            written.append(write_scan_csv(kernel_sum, directory / f"scan_{kernel_sum.lam!r}.csv"))
            if kernel_sum.path is not None:
                written.append(write_path_csv(kernel_sum.path, directory / f"path_{kernel_sum.lam!r}.csv"))
    return written

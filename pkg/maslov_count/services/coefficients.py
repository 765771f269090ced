"""Coefficient families and matrix-valued coefficients.

Scalar profiles are the built-in analytic families (sech^2 wells, Gaussian
wells, algebraic tails, constants) and tabulated samples. A MatrixCoefficient
places profiles on the diagonal or in a full symmetric pattern.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Literal

import numpy as np
from scipy.interpolate import CubicSpline

from maslov_count.core.errors import AssumptionViolationError, ContractViolationError
from maslov_count.models.spectral import DecayProfile


def sech(x):
    return 1.0 / np.cosh(x)


class ScalarProfile:
    """Base class: value(x) = offset + shape(x)."""

    offset: float = 0.0

    def shape(self, x):
        raise NotImplementedError

    def shape_limit(self, side: int) -> float:
        return 0.0

    def decay(self) -> DecayProfile:
        return DecayProfile(kind="compact")

    def __call__(self, x):
        return self.offset + self.shape(x)

    def limit(self, side: int) -> float:
        return self.offset + self.shape_limit(side)


@dataclass(frozen=True)
class Constant(ScalarProfile):
    offset: float = 0.0
    value: float = 0.0

    def shape(self, x):
        return self.value + 0.0 * np.asarray(x, dtype=float)

    def shape_limit(self, side: int) -> float:
        return self.value


@dataclass(frozen=True)
class SechSquared(ScalarProfile):
    """amplitude * sech^2(x / width)."""

    offset: float = 0.0
    amplitude: float = -2.0
    width: float = 1.0

    def shape(self, x):
        return self.amplitude * sech(np.asarray(x, dtype=float) / self.width) ** 2

    def decay(self) -> DecayProfile:
        return DecayProfile(kind="exponential", rate=2.0 / self.width)


def poschl_teller(m: float, offset: float = 0.0) -> SechSquared:
    """Reflectionless well -m(m+1) sech^2 x; for integer m its bound states sit at -k^2, k = 1..m."""
    return SechSquared(offset=offset, amplitude=-m * (m + 1.0))


@dataclass(frozen=True)
class Sech(ScalarProfile):
    """amplitude * sech(x); a decaying coupling profile."""

    offset: float = 0.0
    amplitude: float = 1.0

    def shape(self, x):
        return self.amplitude * sech(np.asarray(x, dtype=float))

    def decay(self) -> DecayProfile:
        return DecayProfile(kind="exponential", rate=1.0)


@dataclass(frozen=True)
class GaussianWell(ScalarProfile):
    """-depth * exp(-(x / width)^2)."""

    offset: float = 0.0
    depth: float = 1.0
    width: float = 1.0

    def shape(self, x):
        return -self.depth * np.exp(-((np.asarray(x, dtype=float) / self.width) ** 2))

    def decay(self) -> DecayProfile:
        return DecayProfile(kind="superexponential")


@dataclass(frozen=True)
class Algebraic(ScalarProfile):
    """amplitude * (1 + |x|)^(-power)."""

    offset: float = 0.0
    amplitude: float = -1.0
    power: float = 3.0

    def shape(self, x):
        return self.amplitude * (1.0 + np.abs(np.asarray(x, dtype=float))) ** (-self.power)

    def decay(self) -> DecayProfile:
        return DecayProfile(kind="polynomial", rate=self.power)


class Tabulated(ScalarProfile):
    """Cubic-spline interpolant of (x, value) samples, constant beyond the table."""

    def __init__(self, xs, values, offset: float = 0.0, source: str | None = None):
        xs = np.asarray(xs, dtype=float)
        values = np.asarray(values, dtype=float)
        if xs.ndim != 1 or xs.shape != values.shape or len(xs) < 4:
            raise ContractViolationError("tabulated coefficient needs at least 4 matching samples")
        if np.any(np.diff(xs) <= 0):
            raise ContractViolationError("tabulated x samples must be strictly increasing")
        self.offset = offset
        self.xs = xs
        self.values = values
        self.source = source
        self._spline = CubicSpline(xs, values, bc_type="clamped")

    @classmethod
    def from_csv(cls, path: Path, offset: float = 0.0) -> "Tabulated":
        """Read a two-column CSV (x, value); a non-numeric first row is a header."""
        xs: list[float] = []
        values: list[float] = []
        with open(path, newline="", encoding="utf-8") as handle:
            for row_number, row in enumerate(csv.reader(handle)):
                if not row:
                    continue
                try:
                    xs.append(float(row[0]))
                    values.append(float(row[1]))
                except (ValueError, IndexError) as e:
                    if row_number == 0:
                        continue
                    raise ContractViolationError(f"{path}: bad row {row_number + 1}: {row}") from e
        return cls(xs, values, offset=offset, source=str(path))

    def shape(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.xs[0], self.xs[-1])
        return self._spline(x)

    def shape_limit(self, side: int) -> float:
        return float(self.values[-1] if side > 0 else self.values[0])

    def decay(self) -> DecayProfile:
        return DecayProfile(kind="compact")

    @property
    def support(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])


class MatrixCoefficient:
    """Real matrix of scalar profiles, symmetric unless built as a coupling block.

    Entries left as None are zero. Symmetry is checked on a handful of sample
    points.
    """

    def __init__(self, entries: list[list[ScalarProfile | None]], symmetric: bool = True):
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if rows == 0 or cols == 0 or any(len(row) != cols for row in entries):
            raise ContractViolationError("matrix coefficient needs a rectangular table of entries")
        if symmetric and rows != cols:
            raise ContractViolationError("a symmetric coefficient must be square")
        self._entries = [
            (i, j, profile)
            for i, row in enumerate(entries)
            for j, profile in enumerate(row)
            if profile is not None
        ]
        self._shape = (rows, cols)
        for x in (-3.0, -0.7, 0.0, 1.3, 4.0):
            value = self.value(x)
            if symmetric and not np.allclose(value, value.T, atol=1e-12):
                raise AssumptionViolationError("symmetric", f"coefficient is not symmetric at x={x}")

    @classmethod
    def scalar(cls, profile: ScalarProfile, n: int = 1) -> "MatrixCoefficient":
        """profile(x) times the n x n identity."""
        return cls([[profile if i == j else None for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, profiles: list[ScalarProfile]) -> "MatrixCoefficient":
        n = len(profiles)
        return cls([[profiles[i] if i == j else None for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return self._shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    def value(self, x: float) -> np.ndarray:
        out = np.zeros(self._shape)
        for i, j, profile in self._entries:
            out[i, j] = profile(x)
        return out

    def limit(self, side: Literal[-1, 1]) -> np.ndarray:
        out = np.zeros(self._shape)
        for i, j, profile in self._entries:
            out[i, j] = profile.limit(side)
        return out

    def decay(self) -> DecayProfile:
        profile = DecayProfile(kind="compact")
        for _, _, entry in self._entries:
            profile = profile.combine(entry.decay())
        return profile

    def support_hint(self) -> tuple[float, float] | None:
        """Union of tabulated supports, if any entry is tabulated."""
        spans = [entry.support for _, _, entry in self._entries if isinstance(entry, Tabulated)]
        if not spans:
            return None
        return min(s[0] for s in spans), max(s[1] for s in spans)


class CallableCoefficient:
    """Coefficient given as a Python callable with explicit endstates."""

    def __init__(
        self,
        func: Callable[[float], np.ndarray],
        minus: np.ndarray,
        plus: np.ndarray,
        decay: DecayProfile | None = None,
    ):
        self._func = func
        self._minus = np.atleast_2d(np.asarray(minus, dtype=float))
        self._plus = np.atleast_2d(np.asarray(plus, dtype=float))
        if self._minus.shape != self._plus.shape:
            raise ContractViolationError("endstates must have one shape")
        self._decay = decay or DecayProfile(kind="exponential", rate=1.0)

    @classmethod
    def constant(cls, matrix) -> "CallableCoefficient":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        return cls(lambda x: matrix, matrix, matrix, DecayProfile(kind="compact"))

    @property
    def n(self) -> int:
        return self._minus.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self._minus.shape

    def value(self, x: float) -> np.ndarray:
        return np.atleast_2d(np.asarray(self._func(x), dtype=float))

    def limit(self, side: Literal[-1, 1]) -> np.ndarray:
        return self._plus if side > 0 else self._minus

    def decay(self) -> DecayProfile:
        return self._decay

    def support_hint(self) -> tuple[float, float] | None:
        return None

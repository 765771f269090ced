"""Paths of frame pairs, rotation traces and Maslov index results."""

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from pydantic import BaseModel, Field

from maslov_count.core.errors import ContractViolationError
from maslov_count.models.frames import LagrangianFrame

PairEvaluator = Callable[[float], tuple[LagrangianFrame, LagrangianFrame]]
FormEvaluator = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class FramePairPath:
    """A path of frame pairs sampled at ordered parameters.

    ``first[i]`` and ``second[i]`` are stacked 2n x n frames at ``params[i]``.
    ``evaluator`` returns the pair at any parameter inside the path and makes
    refinement and crossing localization possible. ``crossing_form`` returns
    the Hermitian crossing form at a parameter, restricted to the intersection,
    oriented along increasing parameter. A nonzero ``rotation`` declares the sign
    every eigenvalue of W turns with as the path is traversed.
    """

    params: np.ndarray
    first: np.ndarray
    second: np.ndarray
    evaluator: PairEvaluator | None = None
    crossing_form: FormEvaluator | None = None
    kind: Literal["x", "lambda"] = "x"
    label: str = "path"
    rotation: Literal[-1, 0, 1] = 0

    def __post_init__(self) -> None:
        params = np.asarray(self.params, dtype=float)
        first = np.asarray(self.first, dtype=complex)
        second = np.asarray(self.second, dtype=complex)
        if len(params) < 2 or first.shape != second.shape or first.shape[0] != len(params):
            raise ContractViolationError(
                f"path needs at least two points with matching frames, got {len(params)} params, "
                f"frames {first.shape} and {second.shape}"
            )
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    @property
    def n(self) -> int:
        return self.first.shape[2]

    def pair(self, index: int) -> tuple[LagrangianFrame, LagrangianFrame]:
        return (
            LagrangianFrame.from_stacked(self.first[index]),
            LagrangianFrame.from_stacked(self.second[index]),
        )

    def reversed(self) -> "FramePairPath":
        """The same path traversed backwards; crossing forms change sign."""
        form = self.crossing_form
        return FramePairPath(
            params=self.params[::-1],
            first=self.first[::-1],
            second=self.second[::-1],
            evaluator=self.evaluator,
            crossing_form=(lambda t: -form(t)) if form is not None else None,
            kind=self.kind,
            label=f"{self.label} (reversed)",
            rotation=-self.rotation,
        )


@dataclass(frozen=True)
class RotationTrace:
    """Matched, unwrapped eigenvalue angles of W along a (possibly refined) path.

    ``angles[i, k]`` is the continuous angle of branch k at ``params[i]``;
    ``matching[i]`` is the permutation mapping sorted raw eigenvalues at
    ``params[i + 1]`` to branches.
    """

    params: np.ndarray
    angles: np.ndarray
    matching: list[np.ndarray]
    label: str = "path"
    refinements: int = 0

    @property
    def n(self) -> int:
        return self.angles.shape[1]

    def sheets(self, tol: float) -> tuple[np.ndarray, np.ndarray]:
        """
        Position of each branch relative to -1.

        Returns:
            (s, at) with s = (angle - pi) / 2pi and ``at`` marking samples
            within tol of -1
        """
        s = (self.angles - np.pi) / (2.0 * np.pi)
        offset = np.abs(s - np.round(s)) * 2.0 * np.pi
        return s, offset < tol


@dataclass(frozen=True)
class ConjugatePoint:
    """An intersection of the pair with its signed contribution to the index."""

    param: float
    multiplicity: int
    directions: tuple[int, ...]
    kind: Literal["interior", "arrival", "departure"]
    contribution: int
    intersection_dimension: int | None = None
    direction_source: Literal["crossing-form", "secant", "none"] = "secant"


@dataclass(frozen=True)
class MaslovResult:
    """Index of a path of pairs with its conjugate points and trace."""

    index: int
    conjugate_points: list[ConjugatePoint]
    trace: RotationTrace
    notes: list[str] = field(default_factory=list)

    def summary(self) -> "ShelfSummary":
        return ShelfSummary(
            label=self.trace.label,
            index=self.index,
            start=float(self.trace.params[0]),
            end=float(self.trace.params[-1]),
            samples=len(self.trace.params),
            conjugate_points=[
                ConjugatePointRecord(
                    param=p.param,
                    multiplicity=p.multiplicity,
                    directions=list(p.directions),
                    kind=p.kind,
                    contribution=p.contribution,
                )
                for p in self.conjugate_points
            ],
            notes=list(self.notes),
        )


class ConjugatePointRecord(BaseModel):
    """Serializable conjugate point."""

    param: float
    multiplicity: int = Field(..., ge=1)
    directions: list[int]
    kind: Literal["interior", "arrival", "departure"]
    contribution: int


class ShelfSummary(BaseModel):
    """Serializable summary of one tracked path."""

    label: str
    index: int
    start: float
    end: float
    samples: int
    conjugate_points: list[ConjugatePointRecord] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)


class BoxResult(BaseModel):
    """Four shelves of the Maslov box; the top shelf counts the eigenvalues."""

    lambda1: float
    lambda2: float
    c: float
    bottom: ShelfSummary
    right: ShelfSummary
    top: ShelfSummary
    left: ShelfSummary
    homotopy_sum: int
    count: int = Field(..., description="Eigenvalues in [lambda1, lambda2), equal to the top-shelf index")
    notes: list[str] = Field(default_factory=list)


@dataclass(frozen=True)
class MaslovBox:
    """Tracked shelves of the box [lambda1, lambda2] x [-c, c]."""

    lambda1: float
    lambda2: float
    c: float
    bottom: MaslovResult
    right: MaslovResult
    top: MaslovResult
    left: MaslovResult

    @property
    def shelves(self) -> dict[str, MaslovResult]:
        return {"bottom": self.bottom, "right": self.right, "top": self.top, "left": self.left}

    @property
    def homotopy_sum(self) -> int:
        return sum(result.index for result in self.shelves.values())

    def to_result(self) -> BoxResult:
        notes = [f"{name}: {note}" for name, result in self.shelves.items() for note in result.notes]
        return BoxResult(
            lambda1=self.lambda1,
            lambda2=self.lambda2,
            c=self.c,
            bottom=self.bottom.summary(),
            right=self.right.summary(),
            top=self.top.summary(),
            left=self.left.summary(),
            homotopy_sum=self.homotopy_sum,
            count=self.top.index,
            notes=notes,
        )

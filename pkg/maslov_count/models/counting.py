"""Eigenvalue counts, kernel sums and target-exchange data."""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, PrivateAttr

from maslov_count.models.evolution import EvolvedFramePath
from maslov_count.models.frames import LagrangianFrame
from maslov_count.models.maslov import BoxResult, ConjugatePoint, ConjugatePointRecord, RotationTrace
from maslov_count.models.spectral import TruncationPolicy

CountMethod = Literal["maslov-box", "kernel-sum", "both"]


@dataclass(frozen=True)
class KernelSum:
    """Conjugate points of the from-left frame against a monotone target at one lambda.

    ``xs`` and ``sigma`` hold the scan of the smallest singular value of
    T* J X(x) on the evolution grid.
    """

    lam: float
    total: int
    conjugate_points: list[ConjugatePoint]
    xs: np.ndarray
    sigma: np.ndarray
    excluded: list[float] = field(default_factory=list)
    path: EvolvedFramePath | None = field(default=None, repr=False)

    def records(self) -> list[ConjugatePointRecord]:
        return [
            ConjugatePointRecord(
                param=p.param,
                multiplicity=p.multiplicity,
                directions=list(p.directions),
                kind=p.kind,
                contribution=p.contribution,
            )
            for p in self.conjugate_points
        ]


@dataclass(frozen=True)
class HormanderData:
    """Data of a target exchange at one lambda.

    ``s`` relates the two Maslov indices of the from-left path:
    -Mas(l, target_old) = -Mas(l, target_new) + s.
    """

    lam: float
    target_old: LagrangianFrame
    target_new: LagrangianFrame
    ell_minus: LagrangianFrame
    ell_plus: LagrangianFrame
    s: int
    closed_form: bool
    asserted: bool = False
    shifted_from: float | None = None
    maslov_old: int | None = None
    maslov_new: int | None = None


@dataclass(frozen=True)
class CountArtifacts:
    """Side products of a count that exporters write next to the result."""

    policy: TruncationPolicy
    kernel_sums: list[KernelSum] = field(default_factory=list)
    traces: dict[str, RotationTrace] = field(default_factory=dict)


class CountResult(BaseModel):
    """Number of eigenvalues in [lambda1, lambda2), counted with geometric multiplicity."""

    _artifacts: CountArtifacts | None = PrivateAttr(default=None)

    N: int = Field(..., ge=0, description="Eigenvalue count")
    lambda1: float | None = Field(default=None, description="Lower end; None counts from -infinity")
    lambda2: float
    kappa: float
    method: CountMethod
    c: float
    shelf_indices: dict[str, int] | None = Field(default=None, description="bottom, right, top, left")
    conjugate_points: list[ConjugatePointRecord] = Field(default_factory=list)
    eigenvalue_endpoints: list[float] = Field(
        default_factory=list, description="Interval ends found to be eigenvalues and shifted down"
    )
    floor: float | None = Field(default=None, description="Left-shelf floor checked empty")
    box: BoxResult | None = None
    notes: list[str] = Field(default_factory=list)

    @property
    def artifacts(self) -> CountArtifacts | None:
        return self._artifacts

    def attach(self, artifacts: CountArtifacts) -> "CountResult":
        self._artifacts = artifacts
        return self


class LambdaTotal(BaseModel):
    """Conjugate-point total against the monotone target at one lambda."""

    lam: float
    total: int = Field(..., ge=0)



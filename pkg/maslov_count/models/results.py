"""Result document written by a run."""

from typing import Any

from pydantic import BaseModel, Field

from maslov_count.models.counting import CountResult, LambdaTotal
from maslov_count.models.maslov import BoxResult
from maslov_count.models.numerics import NumericsConfig
from maslov_count.models.spectral import TruncationPolicy


class OracleComparison(BaseModel):
    """Maslov and finite-difference counts of the same interval."""

    lambda1: float | None
    lambda2: float
    maslov_N: int
    oracle_N: int
    agree: bool
    L: float
    N: int
    oracle_eigenvalues: list[float] = Field(default_factory=list)


class RunResult(BaseModel):
    """Everything needed to reproduce and audit one run."""

    query: str
    system_kind: str
    config: dict[str, Any] = Field(..., description="The resolved run config")
    numerics: NumericsConfig
    policy: TruncationPolicy | None = None
    count: CountResult | None = None
    box: BoxResult | None = None
    totals: list[LambdaTotal] | None = None
    oracle: OracleComparison | None = None
    versions: dict[str, str] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)

"""Run configuration schema.

A run config is a JSON document with a ``system`` (tagged by ``kind``), an
optional ``query`` (tagged by ``query``), numeric overrides and output
options. Coefficients are built-in families or tabulated samples.
"""

from pathlib import Path
from typing import Annotated, Any, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from maslov_count.models.counting import CountMethod


class _Profile(BaseModel):
    offset: float = Field(default=0.0, description="Constant added to the profile")

    model_config = ConfigDict(extra="forbid")


class ConstantProfile(_Profile):
    family: Literal["constant"]
    value: float = 0.0


class PoschlTellerProfile(_Profile):
    family: Literal["poschl_teller"]
    m: float = Field(..., gt=0, description="Well -m(m+1) sech^2 x")


class SechSquaredProfile(_Profile):
    family: Literal["sech_squared"]
    amplitude: float = -2.0
    width: float = Field(default=1.0, gt=0)


class SechProfile(_Profile):
    family: Literal["sech"]
    amplitude: float = 1.0


class GaussianWellProfile(_Profile):
    family: Literal["gaussian_well"]
    depth: float = 1.0
    width: float = Field(default=1.0, gt=0)


class AlgebraicProfile(_Profile):
    family: Literal["algebraic"]
    amplitude: float = -1.0
    power: float = Field(default=3.0, gt=1, description="Decay power; above 1 for an integrable tail")


class TabulatedProfile(_Profile):
    family: Literal["tabulated"]
    path: Path = Field(..., description="Two-column CSV (x, value); relative to the config file")


ProfileSpec = Annotated[
    Union[
        ConstantProfile,
        PoschlTellerProfile,
        SechSquaredProfile,
        SechProfile,
        GaussianWellProfile,
        AlgebraicProfile,
        TabulatedProfile,
    ],
    Field(discriminator="family"),
]


class CoefficientSpec(BaseModel):
    """A matrix coefficient: one profile times the identity, a diagonal, or a full table.

    A bare profile object is accepted as shorthand for ``{"profile": ...}``.
    """

    profile: ProfileSpec | None = None
    diagonal: list[ProfileSpec] | None = None
    matrix: list[list[ProfileSpec | None]] | None = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="before")
    @classmethod
    def wrap_bare_profile(cls, data: Any) -> Any:
        if isinstance(data, dict) and "family" in data:
            return {"profile": data}
        return data

    @model_validator(mode="after")
    def exactly_one(self) -> "CoefficientSpec":
        given = [name for name in ("profile", "diagonal", "matrix") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"give exactly one of profile, diagonal, matrix (got {given or 'none'})")
        return self


def _constant(value: float) -> CoefficientSpec:
    return CoefficientSpec(profile=ConstantProfile(family="constant", value=value))


class SturmLiouvilleConfig(BaseModel):
    """-(P phi')' + V phi = lam Q phi."""

    kind: Literal["sturm_liouville"]
    n: int = Field(default=1, ge=1)
    P: CoefficientSpec = Field(default_factory=lambda: _constant(1.0))
    V: CoefficientSpec
    Q: CoefficientSpec = Field(default_factory=lambda: _constant(1.0))
    theta_P: float | None = Field(default=None, gt=0)
    theta_Q: float | None = Field(default=None, gt=0)
    C_V: float | None = Field(default=None, ge=0)

    model_config = ConfigDict(extra="forbid")


class TravelingWaveConfig(BaseModel):
    """-phi'' - s phi' + V phi = lam phi."""

    kind: Literal["traveling"]
    n: int = Field(default=1, ge=1)
    V: CoefficientSpec
    s: float = 0.0
    C_V: float | None = Field(default=None, ge=0)

    model_config = ConfigDict(extra="forbid")


class FourthOrderConfig(BaseModel):
    """phi'''' + V phi = lam phi with equal endstates."""

    kind: Literal["fourth_order"]
    n: int = Field(default=1, ge=1)
    V: CoefficientSpec
    V_norm: float | None = Field(default=None, ge=0)

    model_config = ConfigDict(extra="forbid")


class DifferentialAlgebraicConfig(BaseModel):
    """m differential components coupled to k algebraic ones."""

    kind: Literal["differential_algebraic"]
    m: int = Field(default=1, ge=1)
    k: int = Field(default=1, ge=1)
    P11: CoefficientSpec = Field(default_factory=lambda: _constant(1.0))
    V11: CoefficientSpec
    V12: CoefficientSpec
    V22: CoefficientSpec
    range_margin: float = Field(default=1e-3, gt=0)

    model_config = ConfigDict(extra="forbid")


SystemConfig = Annotated[
    Union[SturmLiouvilleConfig, TravelingWaveConfig, FourthOrderConfig, DifferentialAlgebraicConfig],
    Field(discriminator="kind"),
]


class CountIntervalQuery(BaseModel):
    query: Literal["count_interval"]
    lambda1: float
    lambda2: float
    method: CountMethod = "maslov-box"

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def ordered(self) -> "CountIntervalQuery":
        if not self.lambda1 < self.lambda2:
            raise ValueError("lambda1 must be below lambda2")
        return self


class CountBelowQuery(BaseModel):
    query: Literal["count_below"]
    lambda2: float

    model_config = ConfigDict(extra="forbid")


class MaslovBoxQuery(BaseModel):
    query: Literal["maslov_box"]
    lambda1: float
    lambda2: float

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def ordered(self) -> "MaslovBoxQuery":
        if not self.lambda1 < self.lambda2:
            raise ValueError("lambda1 must be below lambda2")
        return self


class ConjugatePointsQuery(BaseModel):
    """Kernel sums against the monotone target on a lambda grid."""

    query: Literal["conjugate_points"]
    lambdas: list[float] | None = Field(default=None, min_length=1)
    lambda_min: float | None = None
    lambda_max: float | None = None
    points: int = Field(default=20, ge=1)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def grid_given(self) -> "ConjugatePointsQuery":
        if self.lambdas is None and (self.lambda_min is None or self.lambda_max is None):
            raise ValueError("give lambdas, or lambda_min and lambda_max")
        return self

    def grid(self) -> list[float]:
        if self.lambdas is not None:
            return list(self.lambdas)
        if self.points == 1:
            return [self.lambda_max]
        step = (self.lambda_max - self.lambda_min) / (self.points - 1)
        return [self.lambda_min + i * step for i in range(self.points)]


class OracleCompareQuery(BaseModel):
    """Maslov count next to the finite-difference count."""

    query: Literal["oracle_compare"]
    lambda1: float | None = Field(default=None, description="None counts from -infinity")
    lambda2: float
    L: float | None = Field(default=None, gt=0, description="Oracle half-width (default: max(20, 2c))")
    N: int = Field(default=400, ge=200)

    model_config = ConfigDict(extra="forbid")


QueryConfig = Annotated[
    Union[CountIntervalQuery, CountBelowQuery, MaslovBoxQuery, ConjugatePointsQuery, OracleCompareQuery],
    Field(discriminator="query"),
]


class NumericsOverrides(BaseModel):
    """Per-run overrides of the numeric defaults; unset fields keep the settings value."""

    rank_tol: float | None = Field(default=None, gt=0)
    lagrangian_tol: float | None = Field(default=None, gt=0)
    unitary_tol: float | None = Field(default=None, gt=0)
    eig_tol: float | None = Field(default=None, gt=0)
    conditioning_cap: float | None = Field(default=None, gt=1)
    rtol: float | None = Field(default=None, gt=0)
    atol: float | None = Field(default=None, gt=0)
    grid_points: int | None = Field(default=None, ge=11)
    continuity_cap: float | None = Field(default=None, gt=0, le=1)
    growth_margin: float | None = Field(default=None, gt=0)
    x_refine_depth: int | None = Field(default=None, ge=1)
    lambda_refine_depth: int | None = Field(default=None, ge=1)
    x_locate_tol: float | None = Field(default=None, gt=0)
    lambda_locate_tol: float | None = Field(default=None, gt=0)
    top_shelf_points: int | None = Field(default=None, ge=3)
    truncation_tol: float | None = Field(default=None, gt=0)
    c_floor: float | None = Field(default=None, gt=0)
    c_cap: float | None = Field(default=None, gt=0)
    transversality_gap_min: float | None = Field(default=None, gt=0)
    c: float | None = Field(default=None, gt=0, description="Fixed truncation half-width")

    model_config = ConfigDict(extra="forbid")

    def tolerances(self) -> dict[str, float | int]:
        """Set fields other than the truncation override."""
        return {k: v for k, v in self.model_dump(exclude={"c"}).items() if v is not None}


class OutputConfig(BaseModel):
    directory: Path | None = Field(default=None, description="Result directory (default: settings)")
    csv: bool = Field(default=True, description="Write traces, scans and conjugate points as CSV")

    model_config = ConfigDict(extra="forbid")


class RunConfig(BaseModel):
    """A complete, validated description of one run."""

    system: SystemConfig
    query: QueryConfig | None = None
    numerics: NumericsOverrides = Field(default_factory=NumericsOverrides)
    output: OutputConfig = Field(default_factory=OutputConfig)
    workers: int | None = Field(default=None, ge=1)

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "system": {
                    "kind": "sturm_liouville",
                    "V": {"family": "poschl_teller", "m": 1},
                },
                "query": {"query": "count_below", "lambda2": -0.5},
            }
        },
    )

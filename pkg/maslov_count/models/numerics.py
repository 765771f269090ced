"""Per-run numeric knobs."""

from pydantic import BaseModel, ConfigDict, Field

from maslov_count.core.config import Settings, get_settings


class NumericsConfig(BaseModel):
    """Tolerances and refinement limits for one computation.

    Every field defaults from :class:`~maslov_count.core.config.Settings`; a run
    config may override any of them.
    """

    rank_tol: float = Field(default=1e-8, gt=0, description="Singular-value threshold for intersections")
    lagrangian_tol: float = Field(default=1e-8, gt=0)
    unitary_tol: float = Field(default=1e-10, gt=0)
    eig_tol: float = Field(default=1e-8, gt=0, description="Eigen-angle tolerance at -1")
    conditioning_cap: float = Field(default=1e10, gt=1)
    rtol: float = Field(default=1e-11, gt=0)
    atol: float = Field(default=1e-13, gt=0)
    grid_points: int = Field(default=2001, ge=11)
    continuity_cap: float = Field(default=0.5, gt=0, le=1)
    growth_margin: float = Field(default=4.0, gt=0)
    x_refine_depth: int = Field(default=20, ge=1)
    lambda_refine_depth: int = Field(default=48, ge=1)
    x_locate_tol: float = Field(default=1e-10, gt=0)
    lambda_locate_tol: float = Field(default=1e-9, gt=0)
    top_shelf_points: int = Field(default=41, ge=3)
    truncation_tol: float = Field(default=1e-8, gt=0)
    c_floor: float = Field(default=2.0, gt=0)
    c_cap: float = Field(default=60.0, gt=0)
    transversality_gap_min: float = Field(default=1e-6, gt=0)

    model_config = ConfigDict(frozen=True, extra="forbid")

    @classmethod
    def from_settings(cls, settings: Settings | None = None, **overrides) -> "NumericsConfig":
        """Build from process settings, then apply explicit overrides."""
        settings = settings or get_settings()
        values = {name: getattr(settings, name) for name in cls.model_fields}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def resolve(numerics: NumericsConfig | None) -> NumericsConfig:
    """The given config, or the settings-derived default."""
    return numerics if numerics is not None else NumericsConfig.from_settings()

"""Pydantic models describing spectral data, validation reports and truncation."""

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class DecayProfile(BaseModel):
    """How fast a coefficient approaches its endstates."""

    kind: Literal["exponential", "polynomial", "superexponential", "compact", "none"] = Field(
        ..., description="Decay class of |B(x) - B_±|"
    )
    rate: float = Field(
        default=0.0,
        ge=0.0,
        description="Exponential rate, or polynomial power for polynomial decay",
    )

    model_config = ConfigDict(frozen=True)

    def combine(self, other: "DecayProfile") -> "DecayProfile":
        """Return the slower of two profiles."""
        order = {"none": 0, "polynomial": 1, "exponential": 2, "superexponential": 3, "compact": 4}
        if order[self.kind] != order[other.kind]:
            return self if order[self.kind] < order[other.kind] else other
        return self if self.rate <= other.rate else other


class SpectralInterval(BaseModel):
    """A half-open interval [lambda1, lambda2) below the essential-spectrum edge."""

    lambda1: float = Field(..., description="Lower end (included)")
    lambda2: float = Field(..., description="Upper end (excluded)")
    kappa: float = Field(default=math.inf, description="Essential-spectrum edge")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"lambda1": -2.0, "lambda2": -0.5, "kappa": 0.0}},
    )

    @model_validator(mode="after")
    def check_order(self) -> "SpectralInterval":
        if not self.lambda1 < self.lambda2:
            raise ValueError(f"lambda1={self.lambda1} must be below lambda2={self.lambda2}")
        if math.isfinite(self.kappa) and not self.lambda2 < self.kappa:
            raise ValueError(f"lambda2={self.lambda2} must be below kappa={self.kappa}")
        return self


class ExcludedRange(BaseModel):
    """A closed lambda-range excluded from the admissible set."""

    lower: float
    upper: float

    model_config = ConfigDict(frozen=True)

    def contains(self, lam: float) -> bool:
        return self.lower <= lam <= self.upper


class EssentialSpectrumData(BaseModel):
    """Essential-spectrum edge and admissibility data for a system."""

    kappa: float = Field(..., description="Counting is valid for lambda < kappa")
    excluded_ranges: list[ExcludedRange] = Field(default_factory=list)
    sufficient_bound: float | None = Field(
        default=None, description="Closed-form lower estimate of kappa where available"
    )

    model_config = ConfigDict(frozen=True)


class ValidationReport(BaseModel):
    """Outcome of sampling a system against its structural assumptions."""

    self_adjoint_residual: float
    derivative_residual: float
    reconstruction_residual: float
    hyperbolic_gap: float
    samples: int = Field(..., ge=1)
    passed: bool = True


class TruncationPolicy(BaseModel):
    """Finite window [-c, c] and the data that justified it."""

    c: float = Field(..., gt=0, description="Truncation half-width")
    growth_margin: float = Field(default=4.0, gt=0, description="Log-spread of growth rates allowed per QR chunk")
    transversality_gap_min: float = Field(default=1e-6, gt=0)
    tail_bound: float = Field(default=0.0, ge=0, description="Integrated tail of |B - B_±|")
    transversality_gap: float | None = Field(default=None, description="Smallest observed transversality gap")
    grid_points: int = Field(default=2001, ge=11)
    limiting_criterion: Literal["tail", "floor", "override"] = "tail"

    model_config = ConfigDict(frozen=True)

    def doubled(self) -> "TruncationPolicy":
        """Same policy on [-2c, 2c] with twice the grid density."""
        return self.model_copy(
            update={"c": 2 * self.c, "grid_points": 2 * self.grid_points - 1, "limiting_criterion": "override"}
        )

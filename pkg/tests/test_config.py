"""Tests for configuration management."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from maslov_count.core.config import Settings, get_settings
from maslov_count.models.config import (
    CoefficientSpec,
    ConjugatePointsQuery,
    CountIntervalQuery,
    NumericsOverrides,
    RunConfig,
    SechSquaredProfile,
)
from maslov_count.models.numerics import NumericsConfig, resolve


class TestSettings:
    """Tests for Settings class."""

    def test_settings_loads_from_env(self, monkeypatch):
        """Test that settings load from MASLOV_ prefixed environment variables."""
        monkeypatch.setenv("MASLOV_RANK_TOL", "1e-6")
        monkeypatch.setenv("MASLOV_OUTPUT_DIRECTORY", "/test/output")

        settings = Settings()

        assert settings.rank_tol == 1e-6
        assert settings.output_directory == Path("/test/output")

    def test_settings_has_defaults(self, monkeypatch):
        """Test that settings have the documented defaults."""
        monkeypatch.delenv("MASLOV_RANK_TOL", raising=False)
        settings = Settings()

        assert settings.rank_tol == 1e-8
        assert settings.hyperbolicity_margin == 1e-6
        assert settings.growth_margin == 4.0
        assert settings.output_directory == Path("output")

    def test_settings_rejects_invalid_values(self, monkeypatch):
        """Test that a non-positive tolerance fails validation."""
        monkeypatch.setenv("MASLOV_EIG_TOL", "0")

        with pytest.raises(ValidationError):
            Settings()

    def test_get_settings_is_cached(self):
        """Test that get_settings returns one instance until the cache is cleared."""
        assert get_settings() is get_settings()


class TestNumericsConfig:
    """Tests for per-run numerics."""

    def test_from_settings_copies_defaults(self, monkeypatch):
        """Test that numerics start from the environment-backed settings."""
        monkeypatch.setenv("MASLOV_GRID_POINTS", "801")

        numerics = NumericsConfig.from_settings()

        assert numerics.grid_points == 801

    def test_overrides_win(self):
        """Test that explicit overrides replace settings values and None is ignored."""
        numerics = NumericsConfig.from_settings(rank_tol=1e-6, eig_tol=None)

        assert numerics.rank_tol == 1e-6
        assert numerics.eig_tol == get_settings().eig_tol

    def test_unknown_field_rejected(self):
        """Test that misspelled knobs are rejected."""
        with pytest.raises(ValidationError):
            NumericsConfig(rank_tl=1e-6)

    def test_resolve_keeps_given_config(self):
        """Test that resolve passes a given config through."""
        numerics = NumericsConfig(grid_points=101)
        assert resolve(numerics) is numerics
        assert resolve(None).grid_points == get_settings().grid_points


class TestRunConfig:
    """Tests for the JSON run config schema."""

    def test_parses_example(self, sl_config_dict):
        """Test that a Sturm-Liouville count_below config parses."""
        config = RunConfig.model_validate(sl_config_dict)

        assert config.system.kind == "sturm_liouville"
        assert config.system.V.profile.m == 1
        assert config.query.lambda2 == -0.5
        assert config.numerics.c == 12.0

    def test_bare_profile_is_wrapped(self):
        """Test that a bare profile object is accepted as a coefficient."""
        spec = CoefficientSpec.model_validate({"family": "sech_squared", "amplitude": -6.0})

        assert isinstance(spec.profile, SechSquaredProfile)
        assert spec.profile.amplitude == -6.0

    def test_coefficient_needs_exactly_one_form(self):
        """Test that giving both profile and diagonal is rejected."""
        with pytest.raises(ValidationError, match="exactly one"):
            CoefficientSpec.model_validate(
                {"profile": {"family": "constant"}, "diagonal": [{"family": "constant"}]}
            )

    def test_unknown_family_rejected(self):
        """Test that the family discriminator rejects unknown names."""
        with pytest.raises(ValidationError):
            CoefficientSpec.model_validate({"family": "lorentzian"})

    def test_unknown_key_rejected(self, sl_config_dict):
        """Test that extra keys anywhere in the document are rejected."""
        sl_config_dict["system"]["potential"] = 3
        with pytest.raises(ValidationError) as info:
            RunConfig.model_validate(sl_config_dict)

        locations = [error["loc"] for error in info.value.errors()]
        assert any("potential" in loc for loc in locations)

    def test_interval_must_be_ordered(self):
        """Test that lambda1 >= lambda2 is rejected."""
        with pytest.raises(ValidationError, match="lambda1 must be below lambda2"):
            CountIntervalQuery(query="count_interval", lambda1=-0.5, lambda2=-2.0)

    def test_default_method_is_box(self):
        """Test that count_interval defaults to the Maslov box."""
        query = CountIntervalQuery(query="count_interval", lambda1=-2.0, lambda2=-0.5)
        assert query.method == "maslov-box"

    def test_conjugate_point_grid(self):
        """Test that a min/max/points grid is evenly spaced and includes both ends."""
        query = ConjugatePointsQuery(query="conjugate_points", lambda_min=-3.0, lambda_max=-1.0, points=5)

        assert query.grid() == pytest.approx([-3.0, -2.5, -2.0, -1.5, -1.0])

    def test_conjugate_point_grid_required(self):
        """Test that a conjugate-point query without a grid is rejected."""
        with pytest.raises(ValidationError, match="give lambdas"):
            ConjugatePointsQuery(query="conjugate_points", lambda_min=-1.0)

    def test_overrides_exclude_truncation(self):
        """Test that the fixed c is not passed on as a tolerance."""
        overrides = NumericsOverrides(c=10.0, rank_tol=1e-7)

        assert overrides.tolerances() == {"rank_tol": 1e-7}

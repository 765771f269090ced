"""Tests for run orchestration and result export."""

import csv
import json
from unittest.mock import patch

import pytest

from maslov_count.core.errors import ContractViolationError
from maslov_count.models.config import RunConfig
from maslov_count.services.pipeline import execute, resolve_numerics, run


def with_query(config_dict: dict, query: dict) -> RunConfig:
    return RunConfig.model_validate({**config_dict, "query": query})


class TestExecute:
    """Tests for execute."""

    def test_count_below(self, sl_config_dict):
        """Test that the sech^2 well has one eigenvalue below -0.5."""
        result, artifacts = execute(RunConfig.model_validate(sl_config_dict))

        assert result.query == "count_below"
        assert result.system_kind == "sturm-liouville"
        assert result.count.N == 1
        assert result.policy.c == 12.0
        assert artifacts is not None and artifacts.kernel_sums
        assert "numpy" in result.versions

    def test_numeric_overrides_applied(self, sl_config_dict):
        numerics = resolve_numerics(RunConfig.model_validate(sl_config_dict))

        assert numerics.grid_points == 601
        assert numerics.rtol == 1e-10

    def test_maslov_box(self, sl_config_dict):
        config = with_query(sl_config_dict, {"query": "maslov_box", "lambda1": -2.0, "lambda2": -0.5})

        result, artifacts = execute(config)

        assert result.box.count == 1
        assert result.box.homotopy_sum == 0
        assert set(artifacts.traces) == {"bottom", "right", "top", "left"}

    def test_conjugate_points(self, sl_config_dict):
        config = with_query(sl_config_dict, {"query": "conjugate_points", "lambdas": [-1.5, -0.5]})

        result, _ = execute(config, workers=2)

        assert [(t.lam, t.total) for t in result.totals] == [(-1.5, 0), (-0.5, 1)]

    def test_oracle_compare(self, sl_config_dict):
        """Test that the oracle half-width defaults to at least twice the truncation."""
        config = with_query(sl_config_dict, {"query": "oracle_compare", "lambda2": -0.5})

        result, _ = execute(config)

        assert result.oracle.agree
        assert result.oracle.maslov_N == result.oracle.oracle_N == 1
        assert result.oracle.L == 24.0
        assert result.oracle.oracle_eigenvalues[0] == pytest.approx(-1.0, abs=1e-2)

    def test_oracle_disagreement_is_reported(self, sl_config_dict):
        config = with_query(sl_config_dict, {"query": "oracle_compare", "lambda2": -0.5})

        with patch("maslov_count.services.pipeline.oracle_count", return_value=0):
            result, _ = execute(config)

        assert not result.oracle.agree

    def test_query_required(self, sl_config_dict):
        config = RunConfig.model_validate({**sl_config_dict, "query": None})

        with pytest.raises(ContractViolationError, match="no query"):
            execute(config)


class TestRun:
    """Tests for run and the files it writes."""

    def test_writes_result_document(self, sl_config_dict, temp_dir):
        """Test that result.json holds the count and re-ingests its floats exactly."""
        result, written = run(RunConfig.model_validate(sl_config_dict), out=temp_dir)

        assert written[0] == temp_dir / "result.json"
        document = json.loads(written[0].read_text(encoding="utf-8"))
        assert document["count"]["N"] == 1
        assert document["count"]["floor"] == result.count.floor
        assert document["config"]["query"]["lambda2"] == -0.5

    def test_writes_csv_side_files(self, sl_config_dict, temp_dir):
        _, written = run(RunConfig.model_validate(sl_config_dict), out=temp_dir)

        scans = [path for path in written if path.name.startswith("scan_")]
        assert len(scans) == 2
        with open(scans[0], newline="", encoding="utf-8") as handle:
            header = next(csv.reader(handle))
        assert header == ["x", "sigma_min"]

    def test_csv_disabled(self, sl_config_dict, temp_dir):
        config = RunConfig.model_validate({**sl_config_dict, "output": {"csv": False}})

        _, written = run(config, out=temp_dir)

        assert written == [temp_dir / "result.json"]

    def test_output_directory_from_settings(self, sl_config_dict, temp_dir, monkeypatch):
        monkeypatch.setenv("MASLOV_OUTPUT_DIRECTORY", str(temp_dir / "from_env"))

        _, written = run(RunConfig.model_validate(sl_config_dict))

        assert written[0] == temp_dir / "from_env" / "result.json"

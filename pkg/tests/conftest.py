"""Pytest configuration and shared fixtures."""

import json
from pathlib import Path

import numpy as np
import pytest

from maslov_count.core.config import get_settings
from maslov_count.models.numerics import NumericsConfig
from maslov_count.services.coefficients import Constant, MatrixCoefficient, Sech, SechSquared, poschl_teller
from maslov_count.services.differential_algebraic import DASystem, da_reduce
from maslov_count.services.fourth_order import FourthOrderSystem, fourth_to_hamiltonian
from maslov_count.services.sturm_liouville import SturmLiouvilleSystem, sl_to_hamiltonian
from maslov_count.services.truncation import fixed_truncation


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings so monkeypatched environment variables take effect."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def temp_dir(tmp_path: Path) -> Path:
    """Create temporary directory for test outputs."""
    test_dir = tmp_path / "test_output"
    test_dir.mkdir(parents=True, exist_ok=True)
    return test_dir


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def fast_numerics() -> NumericsConfig:
    """Looser integration and a coarser grid than the defaults; enough for the wells used here."""
    return NumericsConfig.from_settings(
        grid_points=601,
        rtol=1e-10,
        atol=1e-12,
        top_shelf_points=25,
    )


@pytest.fixture
def policy(fast_numerics):
    """Truncation [-12, 12], wide enough for sech^2 wells at the tested lambdas."""
    return fixed_truncation(12.0, fast_numerics)


def make_sl(V_profile, n: int = 1):
    """Scalar-coefficient Sturm-Liouville system with P = Q = I."""
    one = Constant(value=1.0)
    return sl_to_hamiltonian(
        SturmLiouvilleSystem(
            P=MatrixCoefficient.scalar(one, n),
            V=MatrixCoefficient.scalar(V_profile, n),
            Q=MatrixCoefficient.scalar(one, n),
        )
    )


@pytest.fixture
def free_system():
    """-phi'' = lam phi: no eigenvalues, kappa = 0."""
    return make_sl(Constant(value=0.0))


@pytest.fixture
def sech_well():
    """-phi'' - 2 sech^2(x) phi: single eigenvalue -1."""
    return make_sl(poschl_teller(1))


@pytest.fixture
def deep_well():
    """-phi'' - 6 sech^2(x) phi: eigenvalues -4 and -1."""
    return make_sl(poschl_teller(2))


@pytest.fixture
def poschl_teller_well():
    """Factory for -m(m+1) sech^2 x wells, eigenvalues -k^2 for k = 1..m."""
    return lambda m: make_sl(poschl_teller(m))


@pytest.fixture
def fourth_order_well():
    """phi'''' - 20 sech^2(x) phi: eigenvalues near -14.15, -4.58 and -0.43."""
    return fourth_to_hamiltonian(FourthOrderSystem(V=MatrixCoefficient.scalar(SechSquared(amplitude=-20.0))))


@pytest.fixture
def coupled_da_well():
    """-2 sech^2 coupled by 0.5 sech to the algebraic level 2: one eigenvalue near -1.055."""
    one = MatrixCoefficient.scalar(Constant(value=1.0))
    return da_reduce(
        DASystem(
            P11=one,
            V11=MatrixCoefficient.scalar(poschl_teller(1)),
            V12=MatrixCoefficient.scalar(Sech(amplitude=0.5)),
            V22=MatrixCoefficient.scalar(Constant(value=2.0)),
        )
    )


@pytest.fixture
def sl_config_dict() -> dict:
    """Run config for the sech^2 well counted below -0.5."""
    return {
        "system": {
            "kind": "sturm_liouville",
            "V": {"family": "poschl_teller", "m": 1},
        },
        "query": {"query": "count_below", "lambda2": -0.5},
        "numerics": {"grid_points": 601, "rtol": 1e-10, "atol": 1e-12, "c": 12.0},
    }


@pytest.fixture
def config_file(temp_dir: Path, sl_config_dict: dict) -> Path:
    """The sech^2 config written to disk."""
    path = temp_dir / "run.json"
    path.write_text(json.dumps(sl_config_dict), encoding="utf-8")
    return path

"""
Pytest configuration and fixtures for Bellscope tests.

Markers:
    @pytest.mark.slow: Tests that take longer to run (large Monte Carlo runs)

Run tests:
    pytest                  # Run all tests
    pytest -m "not slow"    # Skip the large Monte Carlo runs
"""

import json
import tempfile
from pathlib import Path
from typing import Generator

import pytest

from bellscope import BellScope
from bellscope.models import BELL_ORDER, BellLabel, TwoPhotonState


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )


@pytest.fixture(autouse=True)
def clear_seed_env(monkeypatch):
    """Keep BELLSCOPE_SEED from leaking into tests that don't set it."""
    monkeypatch.delenv("BELLSCOPE_SEED", raising=False)


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def scope() -> BellScope:
    """A fully wired Bellscope instance."""
    return BellScope()


@pytest.fixture
def bell_states() -> dict[BellLabel, TwoPhotonState]:
    """The four normalized Bell states."""
    return {label: TwoPhotonState.bell(label) for label in BELL_ORDER}


@pytest.fixture
def cg(scope: BellScope):
    """The frozen Clebsch-Gordan table."""
    return scope.selection.cg


@pytest.fixture
def sample_model_data() -> dict:
    """Exciton-biexciton style model: one G4- intermediate, one G1+ final."""
    return {
        "schema": 1,
        "E0": 0.0,
        "intermediates": [{"E": 3.202, "M": [1.0, 0.0], "name": "exciton"}],
        "finals": [{"irrep": "G1+", "E": 6.372, "name": "biexciton"}],
        "sigma": 0.001,
    }


@pytest.fixture
def sample_model_file(temp_dir: Path, sample_model_data: dict) -> Path:
    """Transition model document on disk."""
    path = temp_dir / "model.json"
    path.write_text(json.dumps(sample_model_data))
    return path


@pytest.fixture
def sample_device_data() -> dict:
    """Two Phi+ crystals around a retarder pair, ending in no-click."""
    return {
        "schema": 1,
        "name": "two-crystal",
        "stages": [
            {"kind": "crystal", "detector": 1, "eta": 1.0, "absorbed": "PhiPlus", "announces": "PhiPlus"},
            {"kind": "retarder_both"},
            {"kind": "crystal", "detector": 2, "eta": 1.0, "absorbed": "PhiPlus", "announces": "PhiMinus"},
        ],
        "terminal": "no-click",
    }


@pytest.fixture
def sample_device_file(temp_dir: Path) -> Path:
    """The same two-crystal device written as YAML."""
    path = temp_dir / "device.yaml"
    path.write_text(
        "schema: 1\n"
        "name: two-crystal\n"
        "stages:\n"
        "  - {kind: crystal, detector: 1, eta: 1.0, absorbed: PhiPlus, announces: PhiPlus}\n"
        "  - {kind: retarder_both}\n"
        "  - {kind: crystal, detector: 2, eta: 1.0, absorbed: PhiPlus, announces: PhiMinus}\n"
        "terminal: no-click\n"
    )
    return path


@pytest.fixture
def sample_params_file(temp_dir: Path) -> Path:
    """CuCl cavity parameters with explicit units."""
    data = {
        "schema": 1,
        "photon_energy": {"value": 3.186, "unit": "eV"},
        "refractive_index": 3.0,
        "tpa_coefficient": "0.1 cm/W",
        "mode_volume": {"value": 1.0, "unit": "um^3"},
    }
    path = temp_dir / "cucl.json"
    path.write_text(json.dumps(data))
    return path

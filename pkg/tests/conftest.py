"""
Pytest configuration and fixtures for tests.

Author: Ahmad Yateem & Hassan Fouani
"""

import pytest
import sys
import os
import json

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from configs.config import Config, get_config
from propagators.coefficients import CoefficientSpec
from propagators.models import quintic
from spectral_core.field import sample_profile
from spectral_core.grid import TorusGrid

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
EXAMPLE_CONFIGS = os.path.join(REPO_ROOT, 'configs', 'examples')


@pytest.fixture(autouse=True)
def testing_config(monkeypatch):
    """Run every test with the testing worker cap."""
    monkeypatch.setattr(Config, 'THREADS', get_config('testing').THREADS)
    yield


@pytest.fixture
def small_grid():
    """Grid used by most unit tests."""
    return TorusGrid(16.0, 64)


@pytest.fixture
def medium_grid():
    """Grid wide enough for sech data to be negligible at the edge."""
    return TorusGrid(32.0, 256)


@pytest.fixture
def sech_data(medium_grid):
    """Unit sech profile on the medium grid."""
    return sample_profile(medium_grid, 'sech')


@pytest.fixture
def gaussian_data(medium_grid):
    """Unit gaussian profile on the medium grid."""
    return sample_profile(medium_grid, 'gaussian')


@pytest.fixture
def quintic_model():
    """Defocusing quintic equation with unit coupling."""
    return quintic(1.0)


@pytest.fixture
def cosine_coefficient():
    """h(y) = 1 + cos(2 pi y)."""
    return CoefficientSpec('cosine', 1.0, 1.0)


@pytest.fixture
def minimal_config():
    """Smallest valid run configuration document."""
    return {'version': 1, 'model': {'variant': 'quintic'}}


@pytest.fixture
def write_config(tmp_path):
    """Write a configuration document and return its path."""
    def _write(document, name='config.json'):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding='utf-8')
        return path
    return _write


@pytest.fixture
def example_config():
    """Load one of the shipped example configurations."""
    def _load(name):
        with open(os.path.join(EXAMPLE_CONFIGS, name), encoding='utf-8') as handle:
            return json.load(handle)
    return _load

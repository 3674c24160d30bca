"""Shared fixtures; puts the grlab module directory on sys.path."""

import os
import sys

import numpy as np
import pytest

GRLAB_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'grlab')
sys.path.insert(0, GRLAB_DIR)

from fixture_store import FixtureStore  # noqa: E402


@pytest.fixture
def tmp_data_dir(tmp_path, monkeypatch):
    """Empty data directory selected through GRLAB_DATA_DIR"""
    directory = tmp_path / 'data'
    directory.mkdir()
    monkeypatch.setenv('GRLAB_DATA_DIR', str(directory))
    return directory


@pytest.fixture
def store():
    """Store over the committed data directory"""
    return FixtureStore(os.path.join(GRLAB_DIR, 'data'))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)

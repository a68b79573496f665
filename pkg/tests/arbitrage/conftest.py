"""Shared fixtures for arbitrage tests."""

import pytest
from spm_arbitrage.solvers import HighsBackend


@pytest.fixture(scope="session")
def highs() -> HighsBackend:
    """Return the in-process backend."""
    return HighsBackend()

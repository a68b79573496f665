"""Shared fixtures for linearize tests."""

import numpy as np
import pytest


@pytest.fixture
def square_table() -> np.ndarray:
    """Return ``x**2`` tabulated on 1001 points of [0, 1]."""
    x = np.linspace(0.0, 1.0, 1001)
    return np.column_stack([x, x**2])

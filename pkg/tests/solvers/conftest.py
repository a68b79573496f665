"""Shared fixtures for solvers tests."""

import pytest
from spm_arbitrage.milp_model import MilpModel, Sense, VarKind
from spm_arbitrage.solvers import find_cbc


@pytest.fixture
def toy_milp() -> MilpModel:
    """Return max 3a + 2b + c s.t. a + b + c <= 1.5, optimum 3.5 at (1, 0, 0.5)."""
    model = MilpModel("toy")
    a = model.add_variable("a", 0.0, 1.0, VarKind.BINARY)
    b = model.add_variable("b", 0.0, 1.0, VarKind.BINARY)
    c = model.add_variable("c", 0.0, 0.5)
    model.add_constraint("cap", {a: 1.0, b: 1.0, c: 1.0}, Sense.LE, 1.5)
    model.set_objective({a: 3.0, b: 2.0, c: 1.0})
    return model


@pytest.fixture
def infeasible_milp() -> MilpModel:
    """Return a model asking x in [0, 1] to exceed 2."""
    model = MilpModel("infeas")
    x = model.add_variable("x", 0.0, 1.0)
    model.add_constraint("high", {x: 1.0}, Sense.GE, 2.0)
    model.set_objective({x: 1.0})
    return model


@pytest.fixture
def cbc_path() -> str:
    """Return the CBC executable, skipping when none is installed."""
    path = find_cbc()
    if path is None:
        pytest.skip("CBC executable not available")
    return path

"""Shared fixtures for milp_model tests."""

import pytest
from spm_arbitrage.milp_model import MilpModel, Sense, VarKind


@pytest.fixture
def knapsack() -> MilpModel:
    """Return a two-item knapsack: max 3a + 2b + c, a + b + c <= 1.5."""
    model = MilpModel("knapsack")
    a = model.add_variable("a", 0.0, 1.0, VarKind.BINARY)
    b = model.add_variable("b", 0.0, 1.0, VarKind.BINARY)
    c = model.add_variable("c", 0.0, 0.5)
    model.add_constraint("cap", {a: 1.0, b: 1.0, c: 1.0}, Sense.LE, 1.5)
    model.add_constraint("floor", {c: 1.0}, Sense.GE, 0.1)
    model.set_objective({a: 3.0, b: 2.0, c: 1.0})
    return model

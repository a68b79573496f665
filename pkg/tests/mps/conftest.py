"""Shared fixtures for mps tests."""

import pytest
from spm_arbitrage.milp_model import MilpModel, Sense, VarKind


@pytest.fixture
def small_model() -> MilpModel:
    """Return a mixed model with one name too long for fixed-format MPS."""
    model = MilpModel("mps_test")
    x = model.add_variable("x", -1.0, 4.0)
    on = model.add_variable("on", 0.0, 1.0, VarKind.BINARY)
    fixed = model.add_variable("fixed", 2.0, 2.0)
    long = model.add_variable("charge_power_h01_s02", 0.0, 3.0)
    model.add_constraint("gate", {x: 1.0, on: -4.0}, Sense.LE, 0.0)
    model.add_constraint("mix", {x: 1.0, long: 2.0}, Sense.GE, 1.5)
    model.add_constraint("fix", {fixed: 1.0, long: -1.0}, Sense.EQ, 0.5)
    model.set_objective({x: 2.0, long: -1.0})
    return model

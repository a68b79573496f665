"""Shared fixtures for calibrate tests."""

import numpy as np
import pytest
from spm_arbitrage.arbitrage import POWER_ENERGY, Schedule
from spm_arbitrage.solvers import SolveStatus


@pytest.fixture
def one_hour_discharge() -> Schedule:
    """Return a two-hour plan discharging 0.1 MW in the first hour only."""
    charge = np.zeros((2, 5))
    discharge = np.zeros((2, 5))
    discharge[0] = 0.1
    return Schedule(
        model=POWER_ENERGY,
        prices=np.array([100.0, 50.0]),
        subintervals=5,
        charge=charge,
        discharge=discharge,
        energy=np.array([0.1, 0.0]),
        degradation_cost=np.array([5.67, 0.0]),
        soc=np.ones((2, 5)),
        objective=4.33,
        status=SolveStatus.OPTIMAL,
        solve_time=0.0,
    )

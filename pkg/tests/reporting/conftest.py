"""Shared fixtures for reporting tests."""

import numpy as np
import pytest
from spm_arbitrage.arbitrage import PHYSICS, POWER_ENERGY, Schedule
from spm_arbitrage.calibrate import AuditReport
from spm_arbitrage.solvers import SolveStatus


def make_schedule(model: str, scale: float) -> Schedule:
    """Charge in hour 1, discharge in hour 2, idle in hour 3."""
    charge = np.zeros((3, 2))
    discharge = np.zeros((3, 2))
    charge[0] = 0.1 * scale
    discharge[1] = 0.09 * scale
    energy = (discharge - charge).mean(axis=1)
    cost = 50.0 * discharge.mean(axis=1)
    prices = np.array([20.0, 120.0, 60.0])
    return Schedule(
        model=model,
        prices=prices,
        subintervals=2,
        charge=charge,
        discharge=discharge,
        energy=energy,
        degradation_cost=cost,
        soc=np.array([[0.8, 1.0], [0.75, 0.5], [0.5, 0.5]]),
        objective=float(prices @ energy - cost.sum()),
        status=SolveStatus.OPTIMAL,
        solve_time=0.25,
        dimensions={"constraints": 10, "continuous": 8, "binary": 3},
    )


def make_audit(schedule: Schedule, pct: float) -> AuditReport:
    """Audit that achieved 95% of every committed hour."""
    return AuditReport(
        model=schedule.model,
        step=10.0,
        active_hours=[1, 2],
        active_steps=720,
        violating_steps=round(7.2 * pct),
        violations_pct=pct,
        by_category={"voltage": round(7.2 * pct)},
        committed_energy=[float(e) for e in schedule.energy],
        achieved_energy=[0.95 * float(e) for e in schedule.energy],
    )


@pytest.fixture
def pe_schedule() -> Schedule:
    """Return a small power-energy schedule."""
    return make_schedule(POWER_ENERGY, 1.0)


@pytest.fixture
def phys_schedule() -> Schedule:
    """Return a small physics-based schedule trading a bit more."""
    return make_schedule(PHYSICS, 1.1)


@pytest.fixture
def pe_audit(pe_schedule: Schedule) -> AuditReport:
    """Return an audit with 10% violations."""
    return make_audit(pe_schedule, 10.0)


@pytest.fixture
def phys_audit(phys_schedule: Schedule) -> AuditReport:
    """Return an audit with 2.5% violations."""
    return make_audit(phys_schedule, 2.5)

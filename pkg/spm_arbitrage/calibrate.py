"""Links between the physics oracle and the optimization models.

Round-trip efficiency for the power-energy model, the map between negative
surface concentration and stored energy, and the replay of optimized
schedules through the single particle model.
"""

import json
import logging
from collections.abc import Iterable
from pathlib import Path
import numpy as np
from pydantic import BaseModel, ConfigDict
from spm_arbitrage.arbitrage import Schedule
from spm_arbitrage.cell_params import CellParams
from spm_arbitrage.errors import CalibrationError, ConcentrationError, ErrorCategory
from spm_arbitrage.spm import (
    CellState,
    Protocol,
    SimTrace,
    SingleParticleModel,
    Violation,
    run_protocol,
    simulate,
)


LOGGER = logging.getLogger(__name__)

CALIBRATION_STEP = 10.0
AUDIT_STEP = 10.0
ACTIVE_POWER_TOL = 1e-9
WATT_SECONDS_PER_MWH = 3.6e9


def _leg(
    model: SingleParticleModel,
    state: CellState,
    current: float,
    n_steps: int,
    dt: float,
) -> SimTrace:
    """Constant current until the leg ends or the voltage reaches its limit."""
    params = model.params
    protocol = Protocol.constant_current(current, n_steps * dt, dt)

    def past_limit(candidate: CellState) -> bool:
        if current < 0:
            return candidate.v_cell > params.v_max
        return candidate.v_cell < params.v_min

    return run_protocol(model, protocol, state, strict=True, stop=past_limit)


def _energy(trace: SimTrace) -> float:
    """Energy delivered by the cell over a trace, in J."""
    return float(sum(s.i_app * s.v_cell for s in trace.states[1:]))


def round_trip_efficiency(
    params: CellParams, c_rate: float = 1.0, dt: float = CALIBRATION_STEP
) -> float:
    """Discharged over charged energy for one constant-current cycle.

    The cell starts at rest at the SoC floor and is charged towards full, then
    discharged for as many steps as the charge took. Each leg ends early when
    the terminal voltage would leave ``[v_min, v_max]``.

    Args:
        params: Cell parameters.
        c_rate: Current as a fraction of the 1C rating, within (0, 1].
        dt: Simulation step in s.

    Raises:
        ValueError: If ``c_rate`` is outside (0, 1].
        CalibrationError: If the cycle leaves the concentration, current or
            voltage limits, or the charge leg cannot start.
    """
    if not 0.0 < c_rate <= 1.0:
        raise ValueError(f"c_rate must be within (0, 1], got {c_rate}")
    duration = (1.0 - params.soc_floor) / c_rate * 3600.0
    n_steps = max(1, int(duration // dt))
    current = c_rate * params.i_max
    model = SingleParticleModel(params)
    try:
        charge = _leg(model, model.rest_state(params.soc_floor), -current, n_steps, dt)
        if len(charge) < 2:
            raise CalibrationError(
                f"Calibration at {c_rate}C aborted: the first charge step "
                f"leaves [{params.v_min}, {params.v_max}] V"
            )
        discharge = _leg(model, charge.states[-1], current, len(charge) - 1, dt)
    except ConcentrationError as exc:
        raise CalibrationError(f"Calibration at {c_rate}C aborted: {exc}") from exc

    for name, leg in (("charge", charge), ("discharge", discharge)):
        for step, flags in enumerate(leg.violations):
            if flags:
                raise CalibrationError(
                    f"Calibration at {c_rate}C aborted at t={leg.times[step]:.0f} s "
                    f"of the {name}: {', '.join(sorted(f.value for f in flags))} "
                    "limit violated"
                )
    if len(charge) - 1 < n_steps:
        LOGGER.info(
            "Charge at %.2fC reached %.2f V after %d of %d steps",
            c_rate,
            params.v_max,
            len(charge) - 1,
            n_steps,
        )
    charged = -_energy(charge)
    if charged <= 0:
        raise CalibrationError("Calibration charged no energy")
    efficiency = _energy(discharge) / charged
    LOGGER.info("Round-trip efficiency at %.2fC: %.4f", c_rate, efficiency)
    return efficiency


def efficiency_curve(
    params: CellParams, c_rates: Iterable[float], dt: float = CALIBRATION_STEP
) -> dict[float, float]:
    """Round-trip efficiency for several C-rates."""
    return {rate: round_trip_efficiency(params, rate, dt) for rate in c_rates}


def soc_map(c_surf_n: float, params: CellParams) -> float:
    """Stored energy in MWh implied by the negative surface concentration.

    The map is affine and increasing: the lower edge of the negative operating
    window is empty, the upper edge is ``q_max``.

    Raises:
        ValueError: If the concentration is outside the operating window.
    """
    neg = params.neg
    if not neg.c_min <= c_surf_n <= neg.c_op_max:
        raise ValueError(
            f"Negative surface concentration {c_surf_n} outside "
            f"[{neg.c_min}, {neg.c_op_max}] mol/m³"
        )
    return (c_surf_n - neg.c_min) / (neg.c_op_max - neg.c_min) * params.q_max


def soc_map_inverse(energy: float, params: CellParams) -> float:
    """Negative surface concentration for a stored energy in MWh."""
    if not 0.0 <= energy <= params.q_max:
        raise ValueError(f"Energy {energy} outside [0, {params.q_max}] MWh")
    neg = params.neg
    return neg.c_min + energy / params.q_max * (neg.c_op_max - neg.c_min)


class AuditReport(BaseModel):
    """Outcome of replaying a schedule through the single particle model.

    Attributes:
        model: Model that produced the schedule.
        step: Simulation step in s.
        active_hours: Hours with nonzero scheduled power (1-based).
        active_steps: Simulation steps inside active hours.
        violating_steps: Active steps with at least one violation.
        violations_pct: ``100 * violating_steps / active_steps``.
        by_category: Active steps per violation category.
        committed_energy: Scheduled net discharged energy per hour, MWh.
        achieved_energy: Simulated net discharged energy per hour, MWh.
    """

    model_config = ConfigDict(frozen=True)

    model: str
    step: float
    active_hours: list[int]
    active_steps: int
    violating_steps: int
    violations_pct: float
    by_category: dict[str, int]
    committed_energy: list[float]
    achieved_energy: list[float]

    @property
    def max_energy_mismatch(self) -> float:
        """Largest absolute committed-versus-achieved gap in MWh."""
        gaps = np.abs(np.subtract(self.committed_energy, self.achieved_energy))
        return float(gaps.max()) if gaps.size else 0.0

    def to_json(self) -> str:
        """Deterministic JSON text."""
        return json.dumps(self.model_dump(), indent=2, sort_keys=True) + "\n"

    def write(self, path: Path) -> Path:
        """Write the report as JSON."""
        try:
            Path(path).write_text(self.to_json(), encoding="utf-8")
        except OSError as exc:
            error = CalibrationError(f"Could not write audit report {path}: {exc}")
            error.category = ErrorCategory.IO
            raise error from exc
        return path


def audit_schedule(
    schedule: Schedule,
    params: CellParams,
    step: float = AUDIT_STEP,
    initial_soc: float = 1.0,
) -> AuditReport:
    """Replay a schedule and count limit violations during active hours.

    Args:
        schedule: Schedule to replay; its signed power is applied per
            subinterval.
        params: Cell parameters.
        step: Simulation step in s; must divide the subinterval length.
        initial_soc: State of charge at the start of the horizon.
    """
    power = schedule.power
    protocol = Protocol.from_schedule(power, schedule.tau, step)
    trace = simulate(params, protocol, initial_soc)
    hours = protocol.hours if protocol.hours is not None else np.zeros(0, dtype=int)

    active = np.abs(power).max(axis=1) > ACTIVE_POWER_TOL
    counts = {violation.value: 0 for violation in Violation}
    active_steps = violating = 0
    achieved = np.zeros(schedule.hours)
    for k, hour in enumerate(hours):
        state = trace.states[k + 1]
        achieved[hour] += state.p_cell * step / WATT_SECONDS_PER_MWH
        if not active[hour]:
            continue
        active_steps += 1
        flags = trace.violations[k + 1]
        if flags:
            violating += 1
            for flag in flags:
                counts[flag.value] += 1
    pct = 100.0 * violating / active_steps if active_steps else 0.0
    LOGGER.info(
        "Audit of %s schedule: %.1f%% of %d active steps violate limits (%s)",
        schedule.model,
        pct,
        active_steps,
        ", ".join(f"{k}={v}" for k, v in counts.items() if v),
    )
    return AuditReport(
        model=schedule.model,
        step=step,
        active_hours=[int(h) + 1 for h in np.flatnonzero(active)],
        active_steps=active_steps,
        violating_steps=violating,
        violations_pct=pct,
        by_category=counts,
        committed_energy=[float(e) for e in schedule.energy],
        achieved_energy=[float(e) for e in achieved],
    )


__all__ = [
    "AUDIT_STEP",
    "AuditReport",
    "audit_schedule",
    "efficiency_curve",
    "round_trip_efficiency",
    "soc_map",
    "soc_map_inverse",
]

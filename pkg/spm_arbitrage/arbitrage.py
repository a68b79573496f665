"""Energy arbitrage models and schedule extraction.

Two models share the same horizon layout (hours split into ``M`` equal
subintervals), the same hourly charge/discharge exclusivity binary and the
same degradation cost on discharged energy:

* the power-energy model tracks a state of energy with a constant round-trip
  efficiency;
* the physics-based model carries the reduced electrochemistry of every cell:
  average and surface stoichiometries, linear overpotentials, piecewise-linear
  open-circuit potentials and the cell power written as a difference of
  piecewise-linear squares.

Internally the physics-based model works in stoichiometry, amperes per cell
and MW so that coefficients stay close to one.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any
import numpy as np
from spm_arbitrage.cell_params import CellParams, Electrode
from spm_arbitrage.errors import ModelBuildError
from spm_arbitrage.linearize import (
    PiecewiseLinearFn,
    bv_constant,
    fit_pwl,
    pwl_square,
    square_domains,
)
from spm_arbitrage.milp_model import MilpModel, Sense, VarKind
from spm_arbitrage.reduced_model import ReducedState
from spm_arbitrage.solvers import SolverBackend, SolveStatus
from spm_arbitrage.spm import molar_flux


LOGGER = logging.getLogger(__name__)

POWER_ENERGY = "power-energy"
PHYSICS = "physics"
SECONDS_PER_HOUR = 3600.0
DEFAULT_SUBINTERVALS = 5
MICRO = 1e-6
# Widening of the stoichiometry windows so a start on a window edge is interior.
WINDOW_TOL = 1e-6


@dataclass(frozen=True)
class PwlSettings:
    """Linearization settings of the physics-based model.

    Attributes:
        ocp_segments_neg: Segments of the negative open-circuit potential.
        ocp_segments_pos: Segments of the positive open-circuit potential.
        square_segments: Segments of each square in the power split.
        power_band: Allowed spread of the power within one hour, as a fraction
            of the larger power rating.
    """

    ocp_segments_neg: int = 1
    ocp_segments_pos: int = 3
    square_segments: int = 6
    power_band: float = 0.01

    def __post_init__(self) -> None:
        """Check the counts."""
        for name in ("ocp_segments_neg", "ocp_segments_pos", "square_segments"):
            if getattr(self, name) < 1:
                raise ModelBuildError(f"{name} must be at least 1")
        if self.power_band < 0:
            raise ModelBuildError(
                f"power_band must be non-negative, got {self.power_band}"
            )


@dataclass(frozen=True)
class Schedule:
    """Solved charge/discharge plan.

    Attributes:
        model: ``power-energy`` or ``physics``.
        prices: Hourly prices in $/MWh.
        subintervals: Subintervals per hour.
        charge: Charging power per hour and subinterval, MW.
        discharge: Discharging power per hour and subinterval, MW.
        energy: Net discharged energy per hour, MWh.
        degradation_cost: Degradation cost per hour, $.
        soc: State of charge after every subinterval, as a fraction.
        objective: Objective value in $, ``None`` without a solution.
        status: Solver status.
        solve_time: Solver wall-clock time in s.
        dimensions: Constraint, continuous and binary counts of the model.
    """

    model: str
    prices: np.ndarray
    subintervals: int
    charge: np.ndarray
    discharge: np.ndarray
    energy: np.ndarray
    degradation_cost: np.ndarray
    soc: np.ndarray
    objective: float | None
    status: SolveStatus
    solve_time: float
    dimensions: dict[str, int] = field(default_factory=dict)

    @property
    def power(self) -> np.ndarray:
        """Signed power per hour and subinterval, MW, positive on discharge."""
        return self.discharge - self.charge

    @property
    def hours(self) -> int:
        """Horizon length."""
        return len(self.prices)

    @property
    def tau(self) -> float:
        """Subinterval length in s."""
        return SECONDS_PER_HOUR / self.subintervals

    @property
    def has_solution(self) -> bool:
        """Whether the solver returned a plan."""
        return self.objective is not None

    @property
    def revenue(self) -> float:
        """Market revenue ``sum(price * energy)`` in $."""
        return float(self.prices @ self.energy)

    @classmethod
    def idle(cls, model: str, prices: Sequence[float], subintervals: int) -> "Schedule":
        """All-idle plan, feasible for both models."""
        hours = len(prices)
        zeros = np.zeros((hours, subintervals))
        return cls(
            model=model,
            prices=np.asarray(prices, dtype=float),
            subintervals=subintervals,
            charge=zeros,
            discharge=zeros.copy(),
            energy=np.zeros(hours),
            degradation_cost=np.zeros(hours),
            soc=np.ones((hours, subintervals)),
            objective=0.0,
            status=SolveStatus.OPTIMAL,
            solve_time=0.0,
        )


def degradation_rate(params: CellParams) -> float:
    """Cost of discharging one MWh, in $/MWh."""
    return params.capital_cost / params.cycle_life


def _check_horizon(prices: Sequence[float], subintervals: int) -> np.ndarray:
    if subintervals < 1:
        raise ModelBuildError(f"subintervals must be at least 1, got {subintervals}")
    values = np.asarray(prices, dtype=float)
    if values.ndim != 1 or values.size == 0 or not np.all(np.isfinite(values)):
        raise ModelBuildError("prices must be a non-empty sequence of finite values")
    return values


def _add_hourly_accounting(
    model: MilpModel,
    params: CellParams,
    prices: np.ndarray,
    charge: np.ndarray,
    discharge: np.ndarray,
) -> None:
    """Hourly net energy, degradation cost, objective and exclusivity gate."""
    hours, subintervals = charge.shape
    tau_h = 1.0 / subintervals
    rate = degradation_rate(params)
    energy = np.empty(hours, dtype=int)
    cost = np.empty(hours, dtype=int)
    gate = np.empty(hours, dtype=int)
    for t in range(hours):
        gate[t] = model.add_variable(f"u_{t}", 0.0, 1.0, VarKind.BINARY)
        energy[t] = model.add_variable(f"e_{t}", -params.p_max_ch, params.p_max_dis)
        cost[t] = model.add_variable(f"cost_{t}", 0.0, rate * params.p_max_dis)
        energy_row = {int(energy[t]): 1.0}
        cost_row = {int(cost[t]): 1.0}
        for r in range(subintervals):
            ch, dis = int(charge[t, r]), int(discharge[t, r])
            energy_row[dis] = -tau_h
            energy_row[ch] = tau_h
            cost_row[dis] = -rate * tau_h
            model.add_constraint(
                f"gch_{t}_{r}", {ch: 1.0, int(gate[t]): -params.p_max_ch}, Sense.LE, 0.0
            )
            model.add_constraint(
                f"gdis_{t}_{r}",
                {dis: 1.0, int(gate[t]): params.p_max_dis},
                Sense.LE,
                params.p_max_dis,
            )
        model.add_constraint(f"energy_{t}", energy_row, Sense.EQ, 0.0)
        model.add_constraint(f"degr_{t}", cost_row, Sense.EQ, 0.0)

    objective: dict[int, float] = {}
    for t in range(hours):
        objective[int(energy[t])] = float(prices[t])
        objective[int(cost[t])] = -1.0
    model.set_objective(objective)
    model.metadata.update(
        {"charge": charge, "discharge": discharge, "energy": energy, "cost": cost}
    )
    model.metadata["gate"] = gate


def build_power_energy(
    params: CellParams,
    prices: Sequence[float],
    subintervals: int = DEFAULT_SUBINTERVALS,
    eta_rt: float = 0.9,
    soe0: float | None = None,
) -> MilpModel:
    """Power-energy arbitrage model.

    Args:
        params: Stack ratings and economics.
        prices: Hourly prices in $/MWh.
        subintervals: Subintervals per hour.
        eta_rt: Round-trip efficiency applied on charging.
        soe0: Initial state of energy in MWh; full when ``None``.

    Raises:
        ModelBuildError: If ``eta_rt`` or ``soe0`` are out of range.
    """
    price_arr = _check_horizon(prices, subintervals)
    if not 0.0 < eta_rt <= 1.0:
        raise ModelBuildError(f"eta_rt must be within (0, 1], got {eta_rt}")
    floor = params.soc_floor * params.q_max
    soe_init = params.q_max if soe0 is None else soe0
    if not floor - 1e-12 <= soe_init <= params.q_max + 1e-12:
        raise ModelBuildError(
            f"soe0={soe_init} MWh outside the window [{floor}, {params.q_max}]"
        )

    hours = len(price_arr)
    tau_h = 1.0 / subintervals
    model = MilpModel(name="pe_arb")
    charge = np.empty((hours, subintervals), dtype=int)
    discharge = np.empty((hours, subintervals), dtype=int)
    soe = np.empty((hours, subintervals), dtype=int)
    previous: int | None = None
    for t in range(hours):
        for r in range(subintervals):
            charge[t, r] = model.add_variable(f"ch_{t}_{r}", 0.0, params.p_max_ch)
            discharge[t, r] = model.add_variable(f"dis_{t}_{r}", 0.0, params.p_max_dis)
            soe[t, r] = model.add_variable(f"soe_{t}_{r}", floor, params.q_max)
            row = {
                int(soe[t, r]): 1.0,
                int(charge[t, r]): -eta_rt * tau_h,
                int(discharge[t, r]): tau_h,
            }
            rhs = soe_init
            if previous is not None:
                row[previous] = -1.0
                rhs = 0.0
            model.add_constraint(f"soe_{t}_{r}", row, Sense.EQ, rhs)
            previous = int(soe[t, r])

    _add_hourly_accounting(model, params, price_arr, charge, discharge)
    model.metadata["soc"] = soe
    model.info.update(
        {
            "kind": POWER_ENERGY,
            "prices": price_arr,
            "subintervals": subintervals,
            "soc_affine": (1.0 / params.q_max, 0.0),
            "eta_rt": eta_rt,
        }
    )
    LOGGER.info("Built power-energy model: %s", model.dimensions())
    return model


def _stoichiometry_windows(
    params: CellParams, margin: float = 0.0
) -> dict[Electrode, tuple[float, float]]:
    """Surface stoichiometry bounds, the negative floor tied to the SoC floor.

    Args:
        params: Cell parameters.
        margin: Widening applied to both ends of every window.
    """
    neg, pos = params.neg, params.pos
    c_floor, _ = params.concentrations_at_soc(params.soc_floor)
    return {
        Electrode.NEG: (
            c_floor / neg.c_max - margin,
            neg.c_op_max / neg.c_max + margin,
        ),
        Electrode.POS: (
            pos.c_min / pos.c_max - margin,
            pos.c_op_max / pos.c_max + margin,
        ),
    }


def _bounds_of(fn: PiecewiseLinearFn) -> tuple[float, float]:
    return float(fn.values.min()), float(fn.values.max())


class _PhysicsModelBuilder:
    """Assembles the physics-based model one subinterval at a time."""

    def __init__(
        self,
        params: CellParams,
        subintervals: int,
        cfg: PwlSettings,
        state: ReducedState,
    ) -> None:
        self.params = params
        self.cfg = cfg
        self.model = MilpModel(name="phys_arb")
        self.windows = _stoichiometry_windows(params, WINDOW_TOL)
        segments = {
            Electrode.NEG: cfg.ocp_segments_neg,
            Electrode.POS: cfg.ocp_segments_pos,
        }
        self.ocp_fns = {
            which: fit_pwl(
                params.electrode(which).ocp_curve, segments[which], self.windows[which]
            )
            for which in Electrode
        }
        (y_lo, y_hi), _ = square_domains(params)
        self.square = pwl_square((y_lo, y_hi), cfg.square_segments)
        self.model.pwl.update(
            {
                "ocp_negative": self.ocp_fns[Electrode.NEG],
                "ocp_positive": self.ocp_fns[Electrode.POS],
                "square": self.square,
            }
        )

        # Per-amp changes of the average and surface stoichiometry and of the
        # overpotential over one subinterval.
        tau = SECONDS_PER_HOUR / subintervals
        rt = params.gas_const_R * params.temperature_T
        self.avg_gain: dict[Electrode, float] = {}
        self.surf_gain: dict[Electrode, float] = {}
        self.eta_gain: dict[Electrode, float] = {}
        for which in Electrode:
            e = params.electrode(which)
            flux_per_amp = molar_flux(1.0, e, which, params)
            self.avg_gain[which] = 3.0 * tau * flux_per_amp / (e.radius_R * e.c_max)
            self.surf_gain[which] = (
                e.radius_R * flux_per_amp / (5.0 * e.diffusion_D * e.c_max)
            )
            self.eta_gain[which] = rt * flux_per_amp / bv_constant(e, params)
        # Average stoichiometry of the previous subinterval, or its initial value.
        self.previous_avg: dict[Electrode, int | None] = dict.fromkeys(Electrode)
        self.initial_avg = {
            Electrode.NEG: state.c_avg_neg / params.neg.c_max,
            Electrode.POS: state.c_avg_pos / params.pos.c_max,
        }

    def electrode_rows(self, k: str, which: Electrode, cur: int) -> tuple[int, int]:
        """Concentrations, overpotential and potential of one electrode.

        Returns:
            Indices of the surface stoichiometry and the solid potential.
        """
        model = self.model
        tag = "n" if which is Electrode.NEG else "p"
        eta_hi = abs(self.eta_gain[which]) * self.params.i_max
        ocp_lo, ocp_hi = _bounds_of(self.ocp_fns[which])

        avg = model.add_variable(f"sa{tag}_{k}", 0.0, 1.0)
        surf = model.add_variable(f"ss{tag}_{k}", *self.windows[which])
        eta = model.add_variable(f"eta{tag}_{k}", -eta_hi, eta_hi)
        ocp = model.add_variable(f"ocp{tag}_{k}", ocp_lo, ocp_hi)
        phi = model.add_variable(f"phi{tag}_{k}", ocp_lo - eta_hi, ocp_hi + eta_hi)

        avg_row = {avg: 1.0, cur: self.avg_gain[which]}
        previous = self.previous_avg[which]
        if previous is None:
            avg_rhs = self.initial_avg[which]
        else:
            avg_row[previous] = -1.0
            avg_rhs = 0.0
        model.add_constraint(f"avg{tag}_{k}", avg_row, Sense.EQ, avg_rhs)
        self.previous_avg[which] = avg
        model.add_constraint(
            f"surf{tag}_{k}",
            {surf: 1.0, avg: -1.0, cur: self.surf_gain[which]},
            Sense.EQ,
            0.0,
        )
        model.add_constraint(
            f"eta{tag}_{k}", {eta: 1.0, cur: -self.eta_gain[which]}, Sense.EQ, 0.0
        )
        model.add_pwl(surf, ocp, self.ocp_fns[which], f"pocp{tag}_{k}")
        model.add_constraint(
            f"phi{tag}_{k}", {phi: 1.0, eta: -1.0, ocp: -1.0}, Sense.EQ, 0.0
        )
        return surf, phi

    def power_rows(
        self, k: str, cur: int, volt: int, pbar: int
    ) -> tuple[int, int, int, int, int]:
        """Stack power from ``v * i`` as a difference of squares.

        Returns:
            Indices of the signed, charging and discharging power and of the
            two squares.
        """
        model = self.model
        params = self.params
        y_lo, y_hi = self.square.domain
        sq_hi = max(y_lo**2, y_hi**2)
        y1 = model.add_variable(f"ya_{k}", y_lo, y_hi)
        y2 = model.add_variable(f"yb_{k}", y_lo, y_hi)
        sq1 = model.add_variable(f"sqa_{k}", 0.0, sq_hi)
        sq2 = model.add_variable(f"sqb_{k}", 0.0, sq_hi)
        model.add_constraint(f"ya_{k}", {y1: 1.0, volt: -0.5, cur: -0.5}, Sense.EQ, 0.0)
        model.add_constraint(f"yb_{k}", {y2: 1.0, volt: -0.5, cur: 0.5}, Sense.EQ, 0.0)
        model.add_pwl(y1, sq1, self.square, f"psqa_{k}")
        model.add_pwl(y2, sq2, self.square, f"psqb_{k}")

        power = model.add_variable(f"p_{k}", -params.p_max_ch, params.p_max_dis)
        ch = model.add_variable(f"pch_{k}", 0.0, params.p_max_ch)
        dis = model.add_variable(f"pdis_{k}", 0.0, params.p_max_dis)
        scale = params.n_cells * MICRO
        model.add_constraint(
            f"pow_{k}", {power: 1.0, sq1: -scale, sq2: scale}, Sense.EQ, 0.0
        )
        model.add_constraint(
            f"split_{k}", {power: 1.0, dis: -1.0, ch: 1.0}, Sense.EQ, 0.0
        )
        half_band = self.cfg.power_band * max(params.p_max_ch, params.p_max_dis) / 2
        model.add_constraint(f"bup_{k}", {power: 1.0, pbar: -1.0}, Sense.LE, half_band)
        model.add_constraint(f"blo_{k}", {pbar: 1.0, power: -1.0}, Sense.LE, half_band)
        return power, ch, dis, sq1, sq2

    def gate_rows(
        self, k: str, cur: int, volt: int, squares: tuple[int, int], gate: int
    ) -> None:
        """Current sign and power envelope under the hourly charge/discharge binary.

        The envelope bounds ``sqa - sqb`` by the products of the voltage and
        current bounds, widened by the chord error of the square.
        """
        params = self.params
        model = self.model
        i_max, v_hi, v_lo = params.i_max, params.v_max, params.v_min
        big = (v_hi - v_lo) * i_max
        slack = self.square.max_error
        sq1, sq2 = squares
        model.add_constraint(f"gi_{k}", {cur: 1.0, gate: i_max}, Sense.LE, i_max)
        model.add_constraint(f"gic_{k}", {cur: -1.0, gate: -i_max}, Sense.LE, 0.0)
        # Upper envelope, global then per gate.
        model.add_constraint(
            f"mcu_{k}",
            {sq1: 1.0, sq2: -1.0, cur: -v_hi, volt: i_max},
            Sense.LE,
            slack + v_hi * i_max,
        )
        model.add_constraint(
            f"mcl_{k}",
            {sq1: 1.0, sq2: -1.0, cur: -v_lo, volt: -i_max},
            Sense.LE,
            slack - v_lo * i_max,
        )
        model.add_constraint(
            f"envd_{k}",
            {sq1: 1.0, sq2: -1.0, cur: -v_hi, gate: -big},
            Sense.LE,
            slack,
        )
        model.add_constraint(
            f"envc_{k}",
            {sq1: 1.0, sq2: -1.0, cur: -v_lo, gate: big},
            Sense.LE,
            slack + big,
        )
        # Lower envelope per gate.
        model.add_constraint(
            f"flrd_{k}",
            {sq1: -1.0, sq2: 1.0, cur: v_lo, gate: -big},
            Sense.LE,
            slack,
        )
        model.add_constraint(
            f"flrc_{k}",
            {sq1: -1.0, sq2: 1.0, cur: v_hi, gate: big},
            Sense.LE,
            slack + big,
        )

    def build(self, prices: np.ndarray, subintervals: int) -> MilpModel:
        """Add every subinterval, the hourly accounting and the gates."""
        model = self.model
        params = self.params
        roles = (
            "current",
            "voltage",
            "power",
            "charge",
            "discharge",
            "square_a",
            "square_b",
            "surf_neg",
        )
        shape = (len(prices), subintervals)
        index = {role: np.empty(shape, dtype=int) for role in roles}
        for t in range(len(prices)):
            pbar = model.add_variable(f"pbar_{t}", -params.p_max_ch, params.p_max_dis)
            for r in range(subintervals):
                k = f"{t}_{r}"
                cur = model.add_variable(f"i_{k}", -params.i_max, params.i_max)
                volt = model.add_variable(f"v_{k}", params.v_min, params.v_max)
                surf_n, phi_n = self.electrode_rows(k, Electrode.NEG, cur)
                _, phi_p = self.electrode_rows(k, Electrode.POS, cur)
                model.add_constraint(
                    f"volt_{k}", {volt: 1.0, phi_p: -1.0, phi_n: 1.0}, Sense.EQ, 0.0
                )
                power_vars = self.power_rows(k, cur, volt, pbar)
                for role, var in zip(
                    roles, (cur, volt, *power_vars, surf_n), strict=True
                ):
                    index[role][t, r] = var

        _add_hourly_accounting(
            model, params, prices, index["charge"], index["discharge"]
        )
        gate = model.metadata["gate"]
        for (t, r), cur in np.ndenumerate(index["current"]):
            squares = (int(index["square_a"][t, r]), int(index["square_b"][t, r]))
            self.gate_rows(
                f"{t}_{r}", int(cur), int(index["voltage"][t, r]), squares, int(gate[t])
            )
        model.metadata.update(index)
        model.metadata["soc"] = index["surf_neg"]
        return model


def build_physics_based(
    params: CellParams,
    prices: Sequence[float],
    subintervals: int = DEFAULT_SUBINTERVALS,
    pwl_cfg: PwlSettings | None = None,
    state0: ReducedState | None = None,
) -> MilpModel:
    """Physics-based arbitrage model on the reduced cell dynamics.

    Args:
        params: Cell, stack and economic parameters.
        prices: Hourly prices in $/MWh.
        subintervals: Subintervals per hour.
        pwl_cfg: Linearization settings; defaults when ``None``.
        state0: Initial reduced state; fully charged rest when ``None``.

    Raises:
        ModelBuildError: If ``state0`` is outside the concentration windows.
        PwlDomainError: If a piecewise-linear function does not cover the
            range of its variable.
    """
    price_arr = _check_horizon(prices, subintervals)
    cfg = pwl_cfg or PwlSettings()
    state = state0 or ReducedState.from_soc(params, 1.0)
    windows = _stoichiometry_windows(params, WINDOW_TOL)
    initial_surf = {Electrode.NEG: state.c_surf_neg, Electrode.POS: state.c_surf_pos}
    for which, c_surf in initial_surf.items():
        lo, hi = windows[which]
        sto = c_surf / params.electrode(which).c_max
        if not lo <= sto <= hi:
            raise ModelBuildError(
                f"Initial {which.value} surface stoichiometry {sto:.6f} outside "
                f"[{lo:.6f}, {hi:.6f}]"
            )

    model = _PhysicsModelBuilder(params, subintervals, cfg, state).build(
        price_arr, subintervals
    )
    neg = params.neg
    span = neg.c_op_max - neg.c_min
    model.info.update(
        {
            "kind": PHYSICS,
            "prices": price_arr,
            "subintervals": subintervals,
            "soc_affine": (neg.c_max / span, -neg.c_min / span),
            "pwl_settings": cfg,
        }
    )
    LOGGER.info("Built physics-based model: %s", model.dimensions())
    return model


def solve(
    model: MilpModel,
    backend: SolverBackend,
    gap: float = 1e-3,
    time_limit: float = 120.0,
) -> Schedule:
    """Solve an arbitrage model and extract its schedule.

    Args:
        model: Model from :func:`build_power_energy` or
            :func:`build_physics_based`.
        backend: Solver backend.
        gap: Relative MIP gap.
        time_limit: Time limit in s.

    Returns:
        The schedule; without a solution its arrays are zero and ``objective``
        is ``None``.
    """
    result = backend.solve(model, gap, time_limit)
    LOGGER.info(
        "Solved %s with %s: %s in %.2f s, objective %s",
        model.name,
        result.backend,
        result.status.value,
        result.solve_time,
        result.objective,
    )
    info: dict[str, Any] = model.info
    prices = np.asarray(info["prices"], dtype=float)
    subintervals = int(info["subintervals"])
    if result.values is None:
        if result.status is not SolveStatus.INFEASIBLE:
            LOGGER.warning("No solution for %s: %s", model.name, result.status.value)
        empty = Schedule.idle(info["kind"], prices, subintervals)
        return Schedule(
            model=empty.model,
            prices=empty.prices,
            subintervals=subintervals,
            charge=empty.charge,
            discharge=empty.discharge,
            energy=empty.energy,
            degradation_cost=empty.degradation_cost,
            soc=np.full_like(empty.soc, np.nan),
            objective=None,
            status=result.status,
            solve_time=result.solve_time,
            dimensions=model.dimensions(),
        )

    values = result.values
    scale, offset = info["soc_affine"]
    charge = np.clip(model.values_of("charge", values), 0.0, None)
    discharge = np.clip(model.values_of("discharge", values), 0.0, None)
    return Schedule(
        model=info["kind"],
        prices=prices,
        subintervals=subintervals,
        charge=charge,
        discharge=discharge,
        energy=model.values_of("energy", values),
        degradation_cost=model.values_of("cost", values),
        soc=scale * model.values_of("soc", values) + offset,
        objective=result.objective,
        status=result.status,
        solve_time=result.solve_time,
        dimensions=model.dimensions(),
    )


__all__ = [
    "DEFAULT_SUBINTERVALS",
    "PHYSICS",
    "POWER_ENERGY",
    "PwlSettings",
    "Schedule",
    "build_physics_based",
    "build_power_energy",
    "degradation_rate",
    "solve",
]

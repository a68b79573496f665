"""Nonlinear single particle model used as the physics oracle.

Each electrode is one sphere discretized into ``n_r`` shells of equal
thickness. Diffusion is integrated with a conservative finite-volume scheme and
explicit Euler sub-steps; for a fixed step length the update is linear, so the
propagator over a whole step is precomputed once and reused. Positive current
is discharge.
"""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
import numpy as np
import pandas as pd
from scipy import optimize
from spm_arbitrage.cell_params import CellParams, Electrode, ElectrodeParams
from spm_arbitrage.errors import ConcentrationError, SimulationError, StabilityError


LOGGER = logging.getLogger(__name__)

DEFAULT_SHELLS = 30
# Fraction of the explicit stability bound used when sub-stepping automatically.
STABILITY_SAFETY = 0.9
VOLTAGE_TOL = 1e-9


class Violation(StrEnum):
    """Categories of operating-limit violations recorded per step."""

    VOLTAGE = "voltage"
    CURRENT = "current"
    CONCENTRATION = "concentration"
    POWER = "power"


def molar_flux(
    i_app: float, e: ElectrodeParams, which: Electrode, cell: CellParams
) -> float:
    """Pore-wall molar flux in mol/(m² s) for an applied cell current."""
    magnitude = i_app * e.radius_R / (3.0 * e.volume_nu * e.vol_fraction_eps)
    magnitude /= cell.faraday_F
    return -magnitude if which is Electrode.POS else magnitude


def exchange_current_density(
    c_surf: float, e: ElectrodeParams, cell: CellParams
) -> float:
    """Exchange current density in A/m²."""
    return e.rate_const_k * math.sqrt(
        (e.c_max - c_surf) * c_surf * cell.electrolyte_conc
    )


def butler_volmer_eta(
    flux: float, c_surf: float, e: ElectrodeParams, cell: CellParams
) -> float:
    """Exact overpotential from symmetric Butler-Volmer kinetics.

    Raises:
        SimulationError: If ``c_surf`` is not strictly inside ``(0, c_max)``.
    """
    if not 0.0 < c_surf < e.c_max:
        raise SimulationError(
            f"Surface concentration {c_surf} outside (0, {e.c_max}); "
            "exchange current density vanishes"
        )
    j0 = exchange_current_density(c_surf, e, cell)
    return 2.0 * cell.thermal_voltage * math.asinh(cell.faraday_F * flux / (2.0 * j0))


def open_circuit_potential(c_surf: float, e: ElectrodeParams) -> float:
    """Open-circuit potential at a surface concentration."""
    return float(e.ocp(c_surf / e.c_max))


class SphericalDiffusion:
    """Finite-volume discretization of radial diffusion in one particle."""

    def __init__(self, e: ElectrodeParams, n_r: int = DEFAULT_SHELLS) -> None:
        """Assemble the shell geometry and the diffusion operator."""
        if n_r < 2:
            raise ValueError(f"n_r must be at least 2, got {n_r}")
        self.e = e
        self.n_r = n_r
        self.dr = e.radius_R / n_r
        faces = np.arange(n_r + 1) * self.dr
        self.weights = faces[1:] ** 3 - faces[:-1] ** 3
        self.face_areas = faces**2

        coupling = e.diffusion_D * self.face_areas[1:-1] / self.dr
        scale = 3.0 / self.weights
        operator = np.zeros((n_r, n_r))
        for i, k in enumerate(coupling):
            operator[i, i] -= k
            operator[i, i + 1] += k
            operator[i + 1, i + 1] -= k
            operator[i + 1, i] += k
        self.operator = operator * scale[:, None]
        self.boundary = np.zeros(n_r)
        self.boundary[-1] = -e.radius_R**2 * scale[-1]
        self._propagators: dict[tuple[float, int], tuple[np.ndarray, np.ndarray]] = {}

    @property
    def stable_step(self) -> float:
        """Largest explicit Euler step that keeps the scheme stable."""
        outer = self.face_areas[1:] + self.face_areas[:-1]
        outer[-1] = self.face_areas[-2]
        bound = self.weights * self.dr / (3.0 * self.e.diffusion_D * outer)
        return float(bound.min())

    def substeps_for(self, dt: float) -> int:
        """Smallest number of sub-steps that keeps ``dt`` stable."""
        return max(1, math.ceil(dt / (STABILITY_SAFETY * self.stable_step)))

    def propagator(self, dt: float, n_sub: int) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(P, g)`` so that one step maps ``c`` to ``P @ c + g * J``."""
        key = (dt, n_sub)
        if key not in self._propagators:
            h = dt / n_sub
            step = np.eye(self.n_r) + h * self.operator
            transition = np.eye(self.n_r)
            response = np.zeros(self.n_r)
            for _ in range(n_sub):
                transition = step @ transition
                response = step @ response + h * self.boundary
            self._propagators[key] = (transition, response)
        return self._propagators[key]

    def surface(self, profile: np.ndarray, flux: float) -> float:
        """Extrapolate the outer shell value to the particle surface."""
        return float(profile[-1] - flux * self.dr / (2.0 * self.e.diffusion_D))

    def average(self, profile: np.ndarray) -> float:
        """Volume-averaged concentration."""
        return float(self.weights @ profile / self.e.radius_R**3)

    def total(self, profile: np.ndarray) -> float:
        """Amount of lithium up to the constant factor ``4π/3``."""
        return float(self.weights @ profile)


@dataclass(frozen=True)
class CellState:
    """Electrochemical state of one cell at a time point.

    Attributes:
        c_profile_neg: Radial concentrations of the negative particle (mol/m³).
        c_profile_pos: Radial concentrations of the positive particle (mol/m³).
        c_surf_neg: Negative surface concentration (mol/m³).
        c_surf_pos: Positive surface concentration (mol/m³).
        eta_neg: Negative overpotential (V).
        eta_pos: Positive overpotential (V).
        phi_neg: Negative solid potential (V).
        phi_pos: Positive solid potential (V).
        v_cell: Terminal voltage (V).
        i_app: Applied current (A), positive on discharge.
        p_cell: Stack power (W).
        soc: State of charge of the negative electrode window.
    """

    c_profile_neg: np.ndarray
    c_profile_pos: np.ndarray
    c_surf_neg: float
    c_surf_pos: float
    eta_neg: float
    eta_pos: float
    phi_neg: float
    phi_pos: float
    v_cell: float
    i_app: float
    p_cell: float
    soc: float


@dataclass
class SimTrace:
    """Time series produced by :func:`simulate`.

    Attributes:
        times: Time points in s, strictly increasing, starting at 0.
        states: One state per time point.
        violations: Violations recorded for the step ending at each time point.
    """

    times: list[float] = field(default_factory=list)
    states: list[CellState] = field(default_factory=list)
    violations: list[frozenset[Violation]] = field(default_factory=list)

    def append(self, t: float, state: CellState, flags: frozenset[Violation]) -> None:
        """Record one step."""
        if self.times and t <= self.times[-1]:
            raise ValueError(f"Trace time {t} does not increase past {self.times[-1]}")
        self.times.append(t)
        self.states.append(state)
        self.violations.append(flags)

    def __len__(self) -> int:
        """Number of recorded time points."""
        return len(self.times)

    def to_frame(self) -> pd.DataFrame:
        """Tabulate the trace."""
        return pd.DataFrame(
            {
                "t_s": self.times,
                "i_A": [s.i_app for s in self.states],
                "v_V": [s.v_cell for s in self.states],
                "p_W": [s.p_cell for s in self.states],
                "soc": [s.soc for s in self.states],
                "c_surf_n": [s.c_surf_neg for s in self.states],
                "c_surf_p": [s.c_surf_pos for s in self.states],
                "violation_flags": [
                    ";".join(sorted(flag.value for flag in flags))
                    for flags in self.violations
                ],
            }
        )

    def to_csv(self, path: Path) -> Path:
        """Write the trace as CSV."""
        self.to_frame().to_csv(path, index=False)
        return path


class ProtocolKind(StrEnum):
    """Quantity prescribed by a protocol."""

    CURRENT = "current"
    POWER = "power"


@dataclass(frozen=True)
class Protocol:
    """Piecewise-constant load applied to the cell.

    Attributes:
        kind: Whether ``values`` are cell currents (A) or stack powers (W).
        values: One value per step.
        dt: Step length in s.
        hours: Optional hour index (0-based) of every step.
    """

    kind: ProtocolKind
    values: np.ndarray
    dt: float
    hours: np.ndarray | None = None

    def __post_init__(self) -> None:
        """Validate the step length."""
        if self.dt <= 0:
            raise ValueError(f"Protocol step must be positive, got {self.dt}")

    def __len__(self) -> int:
        """Number of steps."""
        return len(self.values)

    @classmethod
    def constant_current(cls, current: float, duration: float, dt: float) -> "Protocol":
        """Hold one current for ``duration`` seconds."""
        n_steps = max(1, round(duration / dt))
        return cls(ProtocolKind.CURRENT, np.full(n_steps, float(current)), dt)

    @classmethod
    def from_schedule(
        cls, power_mw: Sequence[Sequence[float]], tau: float, dt: float
    ) -> "Protocol":
        """Sample a per-subinterval stack power schedule on a fine grid.

        Args:
            power_mw: Signed stack power per hour and subinterval, MW,
                positive on discharge.
            tau: Subinterval length in s.
            dt: Simulation step in s; must divide ``tau``.
        """
        per_interval = round(tau / dt)
        if per_interval < 1 or not math.isclose(per_interval * dt, tau):
            raise ValueError(f"Step {dt} s does not divide the subinterval {tau} s")
        grid = np.asarray(power_mw, dtype=float)
        values = np.repeat(grid.reshape(-1), per_interval) * 1e6
        hours = np.repeat(np.arange(grid.shape[0]), grid.shape[1] * per_interval)
        return cls(ProtocolKind.POWER, values, dt, hours)

    def then(self, other: "Protocol") -> "Protocol":
        """Concatenate two protocols of the same kind and step."""
        if other.kind is not self.kind or not math.isclose(other.dt, self.dt):
            raise ValueError("Only protocols of equal kind and step can be chained")
        return Protocol(self.kind, np.concatenate([self.values, other.values]), self.dt)


class SingleParticleModel:
    """Stateless stepping engine bound to one parameter set."""

    def __init__(self, params: CellParams, n_r: int = DEFAULT_SHELLS) -> None:
        """Build the diffusion operators of both electrodes."""
        self.params = params
        self.diffusion = {
            Electrode.NEG: SphericalDiffusion(params.neg, n_r),
            Electrode.POS: SphericalDiffusion(params.pos, n_r),
        }

    def rest_state(self, soc: float) -> CellState:
        """Uniform equilibrium state at a state of charge."""
        c_n, c_p = self.params.concentrations_at_soc(soc)
        n_r = self.diffusion[Electrode.NEG].n_r
        return self.evaluate(np.full(n_r, c_n), np.full(n_r, c_p), 0.0)

    def evaluate(
        self, profile_neg: np.ndarray, profile_pos: np.ndarray, i_app: float
    ) -> CellState:
        """Derive surface values, potentials and power from profiles."""
        params = self.params
        surf: dict[Electrode, float] = {}
        eta: dict[Electrode, float] = {}
        phi: dict[Electrode, float] = {}
        pairs = ((Electrode.NEG, profile_neg), (Electrode.POS, profile_pos))
        for which, profile in pairs:
            e = params.electrode(which)
            flux = molar_flux(i_app, e, which, params)
            surf[which] = self.diffusion[which].surface(profile, flux)
            c_eval = _inside(surf[which], e)
            eta[which] = butler_volmer_eta(flux, c_eval, e, params)
            phi[which] = eta[which] + open_circuit_potential(c_eval, e)
        v_cell = phi[Electrode.POS] - phi[Electrode.NEG]
        c_avg_neg = self.diffusion[Electrode.NEG].average(profile_neg)
        soc = params.soc_from_negative(c_avg_neg)
        return CellState(
            c_profile_neg=profile_neg,
            c_profile_pos=profile_pos,
            c_surf_neg=surf[Electrode.NEG],
            c_surf_pos=surf[Electrode.POS],
            eta_neg=eta[Electrode.NEG],
            eta_pos=eta[Electrode.POS],
            phi_neg=phi[Electrode.NEG],
            phi_pos=phi[Electrode.POS],
            v_cell=v_cell,
            i_app=i_app,
            p_cell=params.n_cells * i_app * v_cell,
            soc=soc,
        )

    def _advance_profiles(
        self, state: CellState, i_app: float, dt: float, n_sub: int | None
    ) -> tuple[np.ndarray, np.ndarray]:
        profiles = []
        for which, profile in (
            (Electrode.NEG, state.c_profile_neg),
            (Electrode.POS, state.c_profile_pos),
        ):
            grid = self.diffusion[which]
            steps = grid.substeps_for(dt) if n_sub is None else n_sub
            if dt / steps > grid.stable_step:
                raise StabilityError(
                    f"{which.value} electrode step {dt / steps:.4g} s exceeds the "
                    f"stability bound {grid.stable_step:.4g} s"
                )
            transition, response = grid.propagator(dt, steps)
            flux = molar_flux(i_app, self.params.electrode(which), which, self.params)
            profiles.append(transition @ profile + response * flux)
        return profiles[0], profiles[1]

    def step(
        self, state: CellState, i_app: float, dt: float, n_sub: int | None = None
    ) -> CellState:
        """Advance one step at constant current."""
        profile_neg, profile_pos = self._advance_profiles(state, i_app, dt, n_sub)
        return self.evaluate(profile_neg, profile_pos, i_app)

    def surface_response(
        self, state: CellState, dt: float
    ) -> list[tuple[Electrode, float, float, float]]:
        """End-of-step surface concentration as an affine function of current.

        Returns:
            ``(electrode, base, slope, flux_per_amp)`` per electrode, so that
            the surface concentration after a step at current ``I`` is
            ``base + slope * I``.
        """
        response_terms = []
        for which, profile in (
            (Electrode.NEG, state.c_profile_neg),
            (Electrode.POS, state.c_profile_pos),
        ):
            grid = self.diffusion[which]
            e = self.params.electrode(which)
            transition, response = grid.propagator(dt, grid.substeps_for(dt))
            flux_per_amp = molar_flux(1.0, e, which, self.params)
            base = float(transition[-1] @ profile)
            slope = flux_per_amp * (response[-1] - grid.dr / (2.0 * e.diffusion_D))
            response_terms.append((which, base, slope, flux_per_amp))
        return response_terms

    def _voltage_after(
        self, response: list[tuple[Electrode, float, float, float]], i_app: float
    ) -> float:
        volts = 0.0
        for which, base, slope, flux_per_amp in response:
            e = self.params.electrode(which)
            c_surf = _inside(base + slope * i_app, e)
            phi = butler_volmer_eta(flux_per_amp * i_app, c_surf, e, self.params)
            phi += open_circuit_potential(c_surf, e)
            volts += phi if which is Electrode.POS else -phi
        return volts

    def current_for_power(
        self, state: CellState, power_w: float, dt: float
    ) -> tuple[float, bool]:
        """Invert ``N I V(I) = P`` by bisection over the current rating.

        Returns:
            The current and whether the requested power was reachable. When it
            is not, the current is clamped to the rating in the power's sign.
        """
        if power_w == 0.0:
            return 0.0, True
        i_max = self.params.i_max
        n_cells = self.params.n_cells
        response = self.surface_response(state, dt)

        def residual(i_app: float) -> float:
            return n_cells * i_app * self._voltage_after(response, i_app) - power_w

        lo, hi = residual(-i_max), residual(i_max)
        if lo > 0 or hi < 0:
            return math.copysign(i_max, power_w), False
        current = optimize.bisect(residual, -i_max, i_max, xtol=1e-10, maxiter=200)
        return float(current), True


def _inside(c_surf: float, e: ElectrodeParams) -> float:
    """Pull a concentration just inside ``(0, c_max)`` so kinetics stay finite."""
    margin = 1e-9 * e.c_max
    return min(max(c_surf, margin), e.c_max - margin)


def step_diffusion(
    state: CellState,
    flux_n: float,
    flux_p: float,
    dt: float,
    params: CellParams,
    n_sub: int | None = None,
    n_r: int = DEFAULT_SHELLS,
) -> CellState:
    """Advance both radial profiles by ``dt`` under prescribed surface fluxes.

    Args:
        state: State whose profiles are advanced.
        flux_n: Negative electrode pore-wall flux, mol/(m² s).
        flux_p: Positive electrode pore-wall flux, mol/(m² s).
        dt: Step length in s.
        params: Cell parameters.
        n_sub: Explicit Euler sub-steps; chosen automatically when ``None``.
        n_r: Number of shells of the profiles.

    Returns:
        A state with advanced profiles and surface concentrations; potentials
        carry over from ``state``.

    Raises:
        StabilityError: If an explicit ``n_sub`` violates the stability bound.
        ConcentrationError: If a shell leaves ``[0, c_max]``.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    new_profiles: dict[Electrode, np.ndarray] = {}
    surf: dict[Electrode, float] = {}
    for which, profile, flux in (
        (Electrode.NEG, state.c_profile_neg, flux_n),
        (Electrode.POS, state.c_profile_pos, flux_p),
    ):
        e = params.electrode(which)
        grid = SphericalDiffusion(e, n_r)
        steps = grid.substeps_for(dt) if n_sub is None else n_sub
        if dt / steps > grid.stable_step:
            raise StabilityError(
                f"{which.value} electrode step {dt / steps:.4g} s exceeds the "
                f"stability bound {grid.stable_step:.4g} s"
            )
        transition, response = grid.propagator(dt, steps)
        advanced = transition @ profile + response * flux
        _check_profile(advanced, e, which)
        new_profiles[which] = advanced
        surf[which] = grid.surface(advanced, flux)
    return CellState(
        c_profile_neg=new_profiles[Electrode.NEG],
        c_profile_pos=new_profiles[Electrode.POS],
        c_surf_neg=surf[Electrode.NEG],
        c_surf_pos=surf[Electrode.POS],
        eta_neg=state.eta_neg,
        eta_pos=state.eta_pos,
        phi_neg=state.phi_neg,
        phi_pos=state.phi_pos,
        v_cell=state.v_cell,
        i_app=state.i_app,
        p_cell=state.p_cell,
        soc=params.soc_from_negative(
            float(grid_average(new_profiles[Electrode.NEG], params.neg.radius_R))
        ),
    )


def grid_average(profile: np.ndarray, radius: float) -> float:
    """Volume average of a profile on uniform shells of a sphere."""
    faces = np.linspace(0.0, radius, len(profile) + 1)
    weights = faces[1:] ** 3 - faces[:-1] ** 3
    return float(weights @ profile / radius**3)


def _check_profile(profile: np.ndarray, e: ElectrodeParams, which: Electrode) -> None:
    bad = np.flatnonzero((profile < 0.0) | (profile > e.c_max))
    if bad.size:
        shell = int(bad[0])
        raise ConcentrationError(
            f"{which.value} electrode shell {shell} concentration "
            f"{profile[shell]:.6g} outside [0, {e.c_max}] mol/m³"
        )


def _flags(state: CellState, params: CellParams) -> set[Violation]:
    flags: set[Violation] = set()
    if not params.v_min - VOLTAGE_TOL <= state.v_cell <= params.v_max + VOLTAGE_TOL:
        flags.add(Violation.VOLTAGE)
    if abs(state.i_app) > params.i_max * (1 + 1e-12):
        flags.add(Violation.CURRENT)
    for c_surf, e in ((state.c_surf_neg, params.neg), (state.c_surf_pos, params.pos)):
        sto = c_surf / e.c_max
        if not e.ocp_stoichiometry[0] <= sto <= e.ocp_stoichiometry[-1]:
            flags.add(Violation.CONCENTRATION)
    return flags


def simulate(
    params: CellParams,
    protocol: Protocol,
    initial_soc: float,
    strict: bool = False,
    n_r: int = DEFAULT_SHELLS,
) -> SimTrace:
    """Run a protocol through the single particle model.

    Power protocols are converted to current step by step. Unreachable power is
    recorded as a violation and the current clamped to the rating.

    Args:
        params: Cell parameters.
        protocol: Load to apply.
        initial_soc: Starting state of charge, uniform rest profiles.
        strict: Raise on the first shell concentration outside ``[0, c_max]``
            instead of clipping and flagging it.
        n_r: Number of radial shells.

    Returns:
        A trace whose first point is the initial rest state.
    """
    model = SingleParticleModel(params, n_r)
    return run_protocol(model, protocol, model.rest_state(initial_soc), strict)


def run_protocol(
    model: SingleParticleModel,
    protocol: Protocol,
    state: CellState,
    strict: bool = False,
    stop: Callable[[CellState], bool] | None = None,
) -> SimTrace:
    """Run a protocol from an arbitrary state.

    Args:
        model: Stepping engine.
        protocol: Load to apply.
        state: State at time 0.
        strict: Raise on concentrations outside ``[0, c_max]``.
        stop: Cut-off test on the state after each step; the first step that
            meets it is discarded and the run ends.

    Returns:
        A trace whose first point is ``state``.
    """
    params = model.params
    trace = SimTrace()
    trace.append(0.0, state, frozenset())
    dt = protocol.dt
    unreachable = 0
    for k, value in enumerate(protocol.values):
        flags: set[Violation] = set()
        if protocol.kind is ProtocolKind.POWER:
            i_app, reachable = model.current_for_power(state, float(value), dt)
            if not reachable:
                flags.add(Violation.POWER)
                unreachable += 1
        else:
            i_app = float(value)
        profile_neg, profile_pos = model._advance_profiles(state, i_app, dt, None)
        clipped = False
        pairs = ((Electrode.NEG, profile_neg), (Electrode.POS, profile_pos))
        for which, profile in pairs:
            e = params.electrode(which)
            if strict:
                _check_profile(profile, e, which)
            elif np.any((profile < 0.0) | (profile > e.c_max)):
                np.clip(profile, 0.0, e.c_max, out=profile)
                clipped = True
        candidate = model.evaluate(profile_neg, profile_pos, i_app)
        if stop is not None and stop(candidate):
            LOGGER.debug("Cut-off reached after %d of %d steps", k, len(protocol))
            break
        state = candidate
        flags |= _flags(state, params)
        if clipped:
            flags.add(Violation.CONCENTRATION)
        trace.append((k + 1) * dt, state, frozenset(flags))
    if unreachable:
        LOGGER.warning(
            "Requested power unreachable in %d of %d steps; current clamped",
            unreachable,
            len(protocol),
        )
    return trace


__all__ = [
    "DEFAULT_SHELLS",
    "CellState",
    "Electrode",
    "Protocol",
    "ProtocolKind",
    "SimTrace",
    "SingleParticleModel",
    "SphericalDiffusion",
    "Violation",
    "butler_volmer_eta",
    "exchange_current_density",
    "grid_average",
    "molar_flux",
    "open_circuit_potential",
    "run_protocol",
    "simulate",
    "step_diffusion",
]

"""Two-parameter diffusion reduction and its time discretization.

The particle is summarized by its volume-averaged concentration, which changes
only through the pore-wall flux (``dc_avg/dt = -3 J / R``), and a surface
concentration that follows algebraically from the average and the flux. With
the flux signs of :func:`spm_arbitrage.spm.molar_flux`, discharge lowers the
negative electrode and raises the positive electrode.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Self
from spm_arbitrage.cell_params import CellParams, Electrode, ElectrodeParams
from spm_arbitrage.spm import molar_flux


LOGGER = logging.getLogger(__name__)


def step_avg(c_avg_prev: float, flux: float, e: ElectrodeParams, tau: float) -> float:
    """Advance the average concentration by one step of length ``tau``."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    return c_avg_prev - 3.0 * flux * tau / e.radius_R


def surf_from_avg(c_avg: float, flux: float, e: ElectrodeParams) -> float:
    """Surface concentration implied by the average and the flux."""
    return c_avg - flux * e.radius_R / (5.0 * e.diffusion_D)


def telescoped_change(fluxes: Iterable[float], e: ElectrodeParams, tau: float) -> float:
    """Total change of the average concentration over a flux sequence."""
    return -3.0 * tau * sum(fluxes) / e.radius_R


@dataclass(frozen=True)
class ReducedState:
    """Average and surface concentrations of both electrodes.

    Attributes:
        c_avg_neg: Negative average concentration (mol/m³).
        c_avg_pos: Positive average concentration (mol/m³).
        c_surf_neg: Negative surface concentration (mol/m³).
        c_surf_pos: Positive surface concentration (mol/m³).
    """

    c_avg_neg: float
    c_avg_pos: float
    c_surf_neg: float
    c_surf_pos: float

    @classmethod
    def at_rest(cls, c_avg_neg: float, c_avg_pos: float) -> Self:
        """State with zero flux, where surface and average coincide."""
        return cls(c_avg_neg, c_avg_pos, c_avg_neg, c_avg_pos)

    @classmethod
    def from_soc(cls, params: CellParams, soc: float) -> Self:
        """Rest state at a fractional state of charge."""
        return cls.at_rest(*params.concentrations_at_soc(soc))

    def within_window(self, params: CellParams) -> bool:
        """Whether both surface concentrations lie in their operating windows."""
        pairs = ((params.neg, self.c_surf_neg), (params.pos, self.c_surf_pos))
        return all(e.c_min <= c_surf <= e.c_op_max for e, c_surf in pairs)


def advance(
    state: ReducedState, i_app: float, params: CellParams, tau: float
) -> ReducedState:
    """Apply a constant current for ``tau`` seconds.

    Window excursions are logged, not raised; the optimizer enforces them as
    constraints.
    """
    flux_n = molar_flux(i_app, params.neg, Electrode.NEG, params)
    flux_p = molar_flux(i_app, params.pos, Electrode.POS, params)
    c_avg_neg = step_avg(state.c_avg_neg, flux_n, params.neg, tau)
    c_avg_pos = step_avg(state.c_avg_pos, flux_p, params.pos, tau)
    new_state = ReducedState(
        c_avg_neg=c_avg_neg,
        c_avg_pos=c_avg_pos,
        c_surf_neg=surf_from_avg(c_avg_neg, flux_n, params.neg),
        c_surf_pos=surf_from_avg(c_avg_pos, flux_p, params.pos),
    )
    if not new_state.within_window(params):
        LOGGER.warning(
            "Surface concentrations %.1f / %.1f mol/m³ left the operating window",
            new_state.c_surf_neg,
            new_state.c_surf_pos,
        )
    return new_state


__all__ = [
    "ReducedState",
    "advance",
    "step_avg",
    "surf_from_avg",
    "telescoped_change",
]

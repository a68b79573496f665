"""Tests for the averaged particle model."""

import logging
import numpy as np
import pytest
from spm_arbitrage.cell_params import CellParams, Electrode
from spm_arbitrage.reduced_model import (
    ReducedState,
    advance,
    step_avg,
    surf_from_avg,
    telescoped_change,
)
from spm_arbitrage.spm import Protocol, grid_average, simulate


# Steady 1C offsets J R / (5 D), evaluated once by hand.
SURFACE_OFFSET = {Electrode.NEG: 547.806826, Electrode.POS: -4558.107667}


class TestStepAvg:
    """Tests for step_avg."""

    def test_no_flux(self, reference_params: CellParams) -> None:
        """Without flux the average does not move."""
        assert step_avg(1234.5, 0.0, reference_params.neg, 720.0) == 1234.5

    def test_steps_compose(
        self, reference_params: CellParams, one_c_fluxes: dict[Electrode, float]
    ) -> None:
        """Two half steps equal one full step."""
        e = reference_params.pos
        flux = one_c_fluxes[Electrode.POS]
        halves = step_avg(step_avg(30_000.0, flux, e, 360.0), flux, e, 360.0)
        assert halves == pytest.approx(step_avg(30_000.0, flux, e, 720.0), rel=1e-14)

    def test_discharge_direction(
        self, reference_params: CellParams, one_c_fluxes: dict[Electrode, float]
    ) -> None:
        """Discharge empties the negative and fills the positive particle."""
        neg, pos = reference_params.neg, reference_params.pos
        assert step_avg(15_000.0, one_c_fluxes[Electrode.NEG], neg, 60.0) < 15_000.0
        assert step_avg(30_000.0, one_c_fluxes[Electrode.POS], pos, 60.0) > 30_000.0

    @pytest.mark.parametrize("tau", [0.0, -1.0])
    def test_non_positive_step(self, reference_params: CellParams, tau: float) -> None:
        """The step length must be positive."""
        with pytest.raises(ValueError, match="tau must be positive"):
            step_avg(1.0, 0.0, reference_params.neg, tau)


class TestSurfFromAvg:
    """Tests for surf_from_avg."""

    @pytest.mark.parametrize("which", list(Electrode))
    def test_one_c_offset(
        self,
        reference_params: CellParams,
        one_c_fluxes: dict[Electrode, float],
        which: Electrode,
    ) -> None:
        """At 1C the surface sits a fixed offset from the average."""
        e = reference_params.electrode(which)
        c_avg = 0.5 * e.c_max
        c_surf = surf_from_avg(c_avg, one_c_fluxes[which], e)
        assert c_avg - c_surf == pytest.approx(SURFACE_OFFSET[which], rel=1e-8)

    def test_offset_scales_with_flux(
        self, reference_params: CellParams, one_c_fluxes: dict[Electrode, float]
    ) -> None:
        """Doubling the flux doubles the offset."""
        e = reference_params.neg
        flux = one_c_fluxes[Electrode.NEG]
        single = 20_000.0 - surf_from_avg(20_000.0, flux, e)
        double = 20_000.0 - surf_from_avg(20_000.0, 2.0 * flux, e)
        assert double == pytest.approx(2.0 * single, rel=1e-12)

    def test_no_flux(self, reference_params: CellParams) -> None:
        """At rest surface and average coincide."""
        assert surf_from_avg(5_000.0, 0.0, reference_params.pos) == 5_000.0


class TestTelescopedChange:
    """Tests for telescoped_change."""

    def test_matches_repeated_steps(
        self, reference_params: CellParams, one_c_fluxes: dict[Electrode, float]
    ) -> None:
        """The closed form equals stepping through the sequence."""
        e = reference_params.neg
        fluxes = one_c_fluxes[Electrode.NEG] * np.array([1.0, -0.5, 0.3, 0.0, 0.8])
        c_avg = 16_000.0
        for flux in fluxes:
            c_avg = step_avg(c_avg, float(flux), e, 720.0)
        change = telescoped_change(fluxes.tolist(), e, 720.0)
        assert c_avg - 16_000.0 == pytest.approx(change, rel=1e-10)

    def test_empty_sequence(self, reference_params: CellParams) -> None:
        """No steps, no change."""
        assert telescoped_change([], reference_params.neg, 720.0) == 0.0


class TestReducedState:
    """Tests for ReducedState and advance."""

    def test_from_soc(self, reference_params: CellParams) -> None:
        """Rest states take the window concentrations for their charge."""
        state = ReducedState.from_soc(reference_params, 1.0)
        assert state.c_surf_neg == state.c_avg_neg
        assert state.c_surf_pos == state.c_avg_pos
        assert state.c_avg_neg == pytest.approx(reference_params.neg.c_op_max)
        assert state.c_avg_pos == pytest.approx(reference_params.pos.c_min)
        assert ReducedState.from_soc(reference_params, 0.5).within_window(
            reference_params
        )

    def test_outside_window(self, reference_params: CellParams) -> None:
        """A surface below the window floor is detected."""
        state = ReducedState.at_rest(0.5 * reference_params.neg.c_min, 30_000.0)
        assert not state.within_window(reference_params)

    def test_advance_keeps_offsets(
        self, reference_params: CellParams, one_c_fluxes: dict[Electrode, float]
    ) -> None:
        """After a step the surfaces carry the steady offsets."""
        state = ReducedState.from_soc(reference_params, 0.5)
        after = advance(state, reference_params.i_max, reference_params, 720.0)
        assert after.c_avg_neg - after.c_surf_neg == pytest.approx(
            SURFACE_OFFSET[Electrode.NEG], rel=1e-8
        )
        assert after.c_avg_pos - after.c_surf_pos == pytest.approx(
            SURFACE_OFFSET[Electrode.POS], rel=1e-8
        )

    def test_excursion_is_logged(
        self, reference_params: CellParams, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Leaving the window logs a warning but still returns the state."""
        caplog.set_level(logging.WARNING, logger="spm_arbitrage.reduced_model")
        state = ReducedState.from_soc(reference_params, 0.02)
        after = advance(state, reference_params.i_max, reference_params, 720.0)
        assert not after.within_window(reference_params)
        assert "left the operating window" in caplog.text

    def test_tracks_finite_volume_model(self, reference_params: CellParams) -> None:
        """Half an hour at 1C agrees with the finite-volume particles."""
        params = reference_params
        trace = simulate(
            params, Protocol.constant_current(params.i_max, 1800.0, 10.0), 1.0
        )
        final = trace.states[-1]
        start = ReducedState.from_soc(params, 1.0)
        reduced = advance(start, params.i_max, params, 1800.0)
        fv_average = grid_average(final.c_profile_neg, params.neg.radius_R)
        assert reduced.c_avg_neg == pytest.approx(fv_average, rel=1e-6)
        assert reduced.c_surf_neg == pytest.approx(final.c_surf_neg, rel=0.02)

    @pytest.mark.parametrize("which", list(Electrode))
    @pytest.mark.parametrize("duration", [1800.0, 3600.0])
    def test_both_electrodes_track(
        self, reference_params: CellParams, which: Electrode, duration: float
    ) -> None:
        """Averages agree exactly and surfaces within 5% of the 1C offset."""
        params = reference_params
        trace = simulate(
            params, Protocol.constant_current(params.i_max, duration, 10.0), 1.0
        )
        final = trace.states[-1]
        reduced = advance(
            ReducedState.from_soc(params, 1.0), params.i_max, params, duration
        )
        tag = which.name.lower()
        profile = getattr(final, f"c_profile_{tag}")
        fv_average = grid_average(profile, params.electrode(which).radius_R)
        assert getattr(reduced, f"c_avg_{tag}") == pytest.approx(fv_average, rel=1e-6)
        gap = getattr(reduced, f"c_surf_{tag}") - getattr(final, f"c_surf_{tag}")
        assert abs(gap) <= 0.05 * abs(SURFACE_OFFSET[which])

"""Tests for the flux, exchange current and overpotential relations."""

import numpy as np
import pytest
from spm_arbitrage.cell_params import CellParams, Electrode
from spm_arbitrage.errors import SimulationError
from spm_arbitrage.spm import (
    butler_volmer_eta,
    exchange_current_density,
    molar_flux,
    open_circuit_potential,
)


# Reference-cell values at 1C, evaluated once by hand.
FLUX_NEG_1C = 1.5424594932e-05
FLUX_POS_1C = -1.7464014051e-05


class TestMolarFlux:
    """Tests for molar_flux."""

    def test_zero_current(self, reference_params: CellParams) -> None:
        """No current, no flux."""
        e = reference_params.neg
        assert molar_flux(0.0, e, Electrode.NEG, reference_params) == 0.0

    @pytest.mark.parametrize(
        ("which", "expected"),
        [(Electrode.NEG, FLUX_NEG_1C), (Electrode.POS, FLUX_POS_1C)],
    )
    def test_one_c_value(
        self, reference_params: CellParams, which: Electrode, expected: float
    ) -> None:
        """1C discharge flux matches the hand-evaluated value."""
        e = reference_params.electrode(which)
        flux = molar_flux(reference_params.i_max, e, which, reference_params)
        assert flux == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("which", list(Electrode))
    def test_odd_in_current(
        self, reference_params: CellParams, which: Electrode
    ) -> None:
        """Reversing the current reverses the flux."""
        e = reference_params.electrode(which)
        forward = molar_flux(2.3, e, which, reference_params)
        backward = molar_flux(-2.3, e, which, reference_params)
        assert forward == -backward


class TestExchangeCurrentDensity:
    """Tests for exchange_current_density."""

    @pytest.mark.parametrize(
        ("which", "expected"),
        [(Electrode.NEG, 0.3394734161), (Electrode.POS, 3.4123455179)],
    )
    def test_half_stoichiometry(
        self, reference_params: CellParams, which: Electrode, expected: float
    ) -> None:
        """Values at 50% stoichiometry match the hand-evaluated ones."""
        e = reference_params.electrode(which)
        j0 = exchange_current_density(0.5 * e.c_max, e, reference_params)
        assert j0 == pytest.approx(expected, rel=1e-8)

    def test_vanishes_at_bounds(self, reference_params: CellParams) -> None:
        """The exchange current is zero for an empty or saturated surface."""
        e = reference_params.neg
        assert exchange_current_density(0.0, e, reference_params) == 0.0
        assert exchange_current_density(e.c_max, e, reference_params) == 0.0


class TestButlerVolmer:
    """Tests for butler_volmer_eta."""

    def test_zero_flux(self, reference_params: CellParams) -> None:
        """Equilibrium has no overpotential."""
        e = reference_params.pos
        assert butler_volmer_eta(0.0, 0.5 * e.c_max, e, reference_params) == 0.0

    @pytest.mark.parametrize(
        ("which", "flux", "expected"),
        [
            (Electrode.NEG, FLUX_NEG_1C, 0.07843135),
            (Electrode.POS, FLUX_POS_1C, -0.01256155),
        ],
    )
    def test_one_c_value(
        self,
        reference_params: CellParams,
        which: Electrode,
        flux: float,
        expected: float,
    ) -> None:
        """Overpotentials at 1C and 50% stoichiometry are pinned."""
        e = reference_params.electrode(which)
        eta = butler_volmer_eta(flux, 0.5 * e.c_max, e, reference_params)
        assert eta == pytest.approx(expected, abs=1e-7)

    @pytest.mark.parametrize("flux", [1e-7, 3e-6, 2e-5])
    def test_odd_in_flux(self, reference_params: CellParams, flux: float) -> None:
        """The overpotential is an odd function of the flux."""
        e = reference_params.neg
        c_surf = 0.3 * e.c_max
        forward = butler_volmer_eta(flux, c_surf, e, reference_params)
        backward = butler_volmer_eta(-flux, c_surf, e, reference_params)
        assert forward == pytest.approx(-backward, rel=1e-14)

    @pytest.mark.parametrize("ratio", np.linspace(0.01, 0.17, 9))
    def test_small_flux_is_linear(
        self, reference_params: CellParams, ratio: float
    ) -> None:
        """Below F J / (2 j0) = 0.17 the linear law is within 1%."""
        e = reference_params.neg
        cell = reference_params
        c_surf = 0.5 * e.c_max
        j0 = exchange_current_density(c_surf, e, cell)
        flux = ratio * 2.0 * j0 / cell.faraday_F
        exact = butler_volmer_eta(flux, c_surf, e, cell)
        linear = cell.gas_const_R * cell.temperature_T * flux / j0
        assert abs(exact - linear) / abs(exact) <= 0.01

    @pytest.mark.parametrize("fraction", [0.0, 1.0, 1.1])
    def test_singular_surface(
        self, reference_params: CellParams, fraction: float
    ) -> None:
        """Kinetics are undefined on and beyond the concentration bounds."""
        e = reference_params.pos
        with pytest.raises(SimulationError, match="outside"):
            butler_volmer_eta(1e-6, fraction * e.c_max, e, reference_params)


class TestOpenCircuitPotential:
    """Tests for open_circuit_potential."""

    def test_uses_stoichiometry(self, reference_params: CellParams) -> None:
        """The lookup normalizes by c_max before interpolating."""
        e = reference_params.neg
        sto, volts = e.ocp_curve[20]
        assert open_circuit_potential(sto * e.c_max, e) == pytest.approx(volts)

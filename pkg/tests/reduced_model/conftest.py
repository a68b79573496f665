"""Shared fixtures for reduced_model tests."""

import pytest
from spm_arbitrage.cell_params import CellParams, Electrode
from spm_arbitrage.spm import molar_flux


@pytest.fixture(scope="module")
def one_c_fluxes(reference_params: CellParams) -> dict[Electrode, float]:
    """Return the pore-wall fluxes of both electrodes at 1C discharge."""
    params = reference_params
    return {
        which: molar_flux(params.i_max, params.electrode(which), which, params)
        for which in Electrode
    }

"""Shared fixtures for spm tests."""

import numpy as np
import pytest
from spm_arbitrage.cell_params import CellParams
from spm_arbitrage.spm import CellState, SingleParticleModel


@pytest.fixture(scope="module")
def engine(reference_params: CellParams) -> SingleParticleModel:
    """Return a stepping engine for the reference cell."""
    return SingleParticleModel(reference_params)


@pytest.fixture
def half_charged(engine: SingleParticleModel) -> CellState:
    """Return the rest state at 50% state of charge."""
    return engine.rest_state(0.5)


@pytest.fixture
def graded_state(half_charged: CellState) -> CellState:
    """Return a state whose radial profiles are far from uniform."""
    n_r = len(half_charged.c_profile_neg)
    ramp = np.linspace(0.8, 1.2, n_r)
    return CellState(
        c_profile_neg=half_charged.c_profile_neg * ramp,
        c_profile_pos=half_charged.c_profile_pos * ramp[::-1],
        c_surf_neg=half_charged.c_surf_neg,
        c_surf_pos=half_charged.c_surf_pos,
        eta_neg=0.0,
        eta_pos=0.0,
        phi_neg=half_charged.phi_neg,
        phi_pos=half_charged.phi_pos,
        v_cell=half_charged.v_cell,
        i_app=0.0,
        p_cell=0.0,
        soc=half_charged.soc,
    )

"""Fixtures shared by every test package."""

import copy
import json
from collections.abc import Callable
from typing import Any
import numpy as np
import pytest
from spm_arbitrage.cell_params import (
    CellParams,
    load_params,
    params_from_dict,
    reference_params_path,
)
from spm_arbitrage.prices import (
    PriceSeries,
    day_ahead_prices_path,
    ingest_prices,
)


ParamsFactory = Callable[..., CellParams]


@pytest.fixture(scope="session")
def reference_document() -> dict[str, Any]:
    """Return the bundled LG M50 parameter document as parsed JSON."""
    with open(reference_params_path(), encoding="utf-8") as f:
        document: dict[str, Any] = json.load(f)
    return document


@pytest.fixture
def params_document(reference_document: dict[str, Any]) -> dict[str, Any]:
    """Return a private, mutable copy of the reference document."""
    return copy.deepcopy(reference_document)


@pytest.fixture(scope="session")
def reference_params() -> CellParams:
    """Load the bundled LG M50 parameters."""
    return load_params(reference_params_path())


@pytest.fixture(scope="session")
def day_ahead_prices() -> PriceSeries:
    """Load the bundled case-study prices."""
    return ingest_prices(day_ahead_prices_path())


@pytest.fixture(scope="session")
def make_params(reference_document: dict[str, Any]) -> ParamsFactory:
    """Build validated parameters from the reference with block overrides.

    Keyword arguments are block names mapping to the fields to replace, e.g.
    ``make_params(economics={"capital_cost": 0.0})``.
    """

    def factory(**overrides: dict[str, Any]) -> CellParams:
        document = copy.deepcopy(reference_document)
        for block, fields in overrides.items():
            document[block].update(fields)
        return params_from_dict(document, "<test>")

    return factory


def flat_ocp(volts: float, points: int = 51) -> list[list[float]]:
    """Tabulate a constant open-circuit potential on [0, 1]."""
    return [[float(s), volts] for s in np.linspace(0.0, 1.0, points)]


@pytest.fixture(scope="session")
def lossless_params(make_params: ParamsFactory) -> CellParams:
    """Cell with flat OCPs and very fast kinetics, so it loses no energy."""
    fast = {"rate_const_k": 1e3, "bv_linear_A": 1e9}
    return make_params(
        negative_electrode={"ocp_curve": flat_ocp(0.1), **fast},
        positive_electrode={"ocp_curve": flat_ocp(4.0), **fast},
    )


@pytest.fixture(scope="session")
def toy_params(make_params: ParamsFactory) -> CellParams:
    """1 MWh / 1 MW stack without degradation cost or SoC floor."""
    return make_params(
        cell={"soc_floor": 0.0},
        economics={
            "q_max": 1.0,
            "p_max_ch": 1.0,
            "p_max_dis": 1.0,
            "capital_cost": 0.0,
        },
    )

"""Energy arbitrage with a linearized single particle battery model."""

from spm_arbitrage import cli
from spm_arbitrage.arbitrage import (
    PwlSettings,
    Schedule,
    build_physics_based,
    build_power_energy,
    solve,
)
from spm_arbitrage.calibrate import (
    AuditReport,
    audit_schedule,
    round_trip_efficiency,
    soc_map,
)
from spm_arbitrage.cell_params import CellParams, load_params, reference_params_path
from spm_arbitrage.prices import (
    PriceSeries,
    day_ahead_prices_path,
    ingest_prices,
)
from spm_arbitrage.solvers import get_backend
from spm_arbitrage.spm import Protocol, simulate


def main() -> None:  # pragma: no cover
    """Run the ``spm-arbitrage`` command."""
    raise SystemExit(cli.main())


__all__ = [
    "AuditReport",
    "CellParams",
    "PriceSeries",
    "Protocol",
    "PwlSettings",
    "Schedule",
    "audit_schedule",
    "build_physics_based",
    "build_power_energy",
    "day_ahead_prices_path",
    "get_backend",
    "ingest_prices",
    "load_params",
    "main",
    "reference_params_path",
    "round_trip_efficiency",
    "simulate",
    "soc_map",
    "solve",
]

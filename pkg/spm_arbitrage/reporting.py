"""Plain CSV and JSON artifacts of an arbitrage run.

Every file written here is a pure function of the schedules and audits it is
given, so repeated runs with a deterministic solver produce identical bytes.
Solve times vary between runs and are kept in a separate ``timings.json``.
"""

import json
import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any
import numpy as np
import pandas as pd
from spm_arbitrage.arbitrage import PHYSICS, POWER_ENERGY, Schedule
from spm_arbitrage.calibrate import AuditReport
from spm_arbitrage.errors import ArtifactError


LOGGER = logging.getLogger(__name__)

FLOAT_FORMAT = "%.10g"
REPORT_JSON = "report.json"
REPORT_TXT = "report.txt"
TIMINGS_JSON = "timings.json"


def _write_text(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ArtifactError(f"Could not write {path}: {exc}") from exc
    LOGGER.debug("Wrote %s", path)
    return path


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return _write_text(path, text)


def _json_text(document: Any) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _rounded(value: float | None, digits: int = 6) -> float | None:
    return None if value is None else round(float(value), digits)


def schedule_frame(schedule: Schedule) -> pd.DataFrame:
    """One row per hour and subinterval.

    Columns are the 1-based ``hour``, the 0-based ``subinterval``, its start
    time in seconds, charge/discharge/signed power in MW and the state of
    charge at its end.
    """
    hours, subintervals = schedule.charge.shape
    hour, sub = np.divmod(np.arange(hours * subintervals), subintervals)
    return pd.DataFrame(
        {
            "hour": hour + 1,
            "subinterval": sub,
            "t_start_s": (hour * subintervals + sub) * schedule.tau,
            "charge_MW": schedule.charge.reshape(-1),
            "discharge_MW": schedule.discharge.reshape(-1),
            "power_MW": schedule.power.reshape(-1),
            "soc": schedule.soc.reshape(-1),
        }
    )


def hourly_frame(schedule: Schedule, audit: AuditReport | None = None) -> pd.DataFrame:
    """One row per hour: price, committed energy, degradation cost, SoC.

    When an audit is given the simulated energy of the hour is added as
    ``achieved_MWh``.
    """
    frame = pd.DataFrame(
        {
            "hour": np.arange(1, schedule.hours + 1),
            "price": schedule.prices,
            "energy_MWh": schedule.energy,
            "degradation_cost": schedule.degradation_cost,
            "soc_end": schedule.soc[:, -1],
        }
    )
    if audit is not None:
        frame["achieved_MWh"] = audit.achieved_energy
    return frame


def write_schedule(
    schedule: Schedule, out_dir: Path, audit: AuditReport | None = None
) -> list[Path]:
    """Write the per-subinterval and hourly CSV files of one schedule."""
    out_dir = Path(out_dir)
    name = schedule.model
    return [
        _write_frame(schedule_frame(schedule), out_dir / f"schedule_{name}.csv"),
        _write_frame(hourly_frame(schedule, audit), out_dir / f"hourly_{name}.csv"),
    ]


def write_audit(audit: AuditReport, out_dir: Path) -> Path:
    """Write an audit report as ``audit_<model>.json``."""
    return _write_text(Path(out_dir) / f"audit_{audit.model}.json", audit.to_json())


def model_entry(
    schedule: Schedule,
    audit: AuditReport | None = None,
    settings: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    """Report fields of one model, aggregated from its schedule and audit."""
    entry: dict[str, Any] = {
        "status": schedule.status.value,
        "objective": _rounded(schedule.objective),
        "revenue": _rounded(schedule.revenue),
        "degradation_cost": _rounded(float(schedule.degradation_cost.sum())),
        "charged_MWh": _rounded(float(schedule.charge.sum() / schedule.subintervals)),
        "discharged_MWh": _rounded(
            float(schedule.discharge.sum() / schedule.subintervals)
        ),
        "dimensions": dict(schedule.dimensions),
        "settings": dict(settings or {}),
    }
    if audit is not None:
        achieved = np.asarray(audit.achieved_energy)
        entry["audit"] = {
            "violations_pct": _rounded(audit.violations_pct, 3),
            "by_category": dict(audit.by_category),
            "active_hours": len(audit.active_hours),
            "achieved_revenue": _rounded(float(schedule.prices @ achieved)),
            "max_energy_mismatch_MWh": _rounded(audit.max_energy_mismatch),
        }
    return entry


def comparison_report(entries: Mapping[str, dict[str, Any]]) -> dict[str, Any]:
    """Combine per-model entries and, with both models, their relative gain.

    ``physics_gain_pct`` compares objectives; ``physics_gain_achieved_pct``
    compares the revenues the replay actually achieved.
    """
    report: dict[str, Any] = {"models": dict(entries)}
    if POWER_ENERGY in entries and PHYSICS in entries:
        base, phys = entries[POWER_ENERGY], entries[PHYSICS]
        report["physics_gain_pct"] = _gain(base["objective"], phys["objective"])
        if "audit" in base and "audit" in phys:
            report["physics_gain_achieved_pct"] = _gain(
                base["audit"]["achieved_revenue"], phys["audit"]["achieved_revenue"]
            )
    return report


def _gain(base: float | None, other: float | None) -> float | None:
    if base is None or other is None or base == 0:
        return None
    return round(100.0 * (other - base) / abs(base), 3)


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def render_report_table(
    report: Mapping[str, Any], timings: Mapping[str, float] | None = None
) -> str:
    """Fixed-width text table with one column per model."""
    models: dict[str, dict[str, Any]] = dict(report["models"])
    rows: list[tuple[str, list[Any]]] = [
        ("objective ($)", [m["objective"] for m in models.values()]),
        ("revenue ($)", [m["revenue"] for m in models.values()]),
        ("degradation ($)", [m["degradation_cost"] for m in models.values()]),
        ("status", [m["status"] for m in models.values()]),
        (
            "violations (%)",
            [m.get("audit", {}).get("violations_pct") for m in models.values()],
        ),
        (
            "achieved revenue ($)",
            [m.get("audit", {}).get("achieved_revenue") for m in models.values()],
        ),
    ]
    for key in ("constraints", "continuous", "binary"):
        rows.append((key, [m["dimensions"].get(key) for m in models.values()]))
    if timings is not None:
        rows.append(("solve time (s)", [timings.get(name) for name in models]))

    width = max(len(label) for label, _ in rows) + 2
    header = "".ljust(width) + "".join(f"{name:>16}" for name in models)
    lines = [header.rstrip()]
    lines += [
        (label.ljust(width) + "".join(f"{_cell(v):>16}" for v in values)).rstrip()
        for label, values in rows
    ]
    for key in ("physics_gain_pct", "physics_gain_achieved_pct"):
        if key in report:
            lines.append(f"{key}: {_cell(report[key])}")
    return "\n".join(lines) + "\n"


def write_report(
    report: Mapping[str, Any], out_dir: Path, timings: Mapping[str, float]
) -> list[Path]:
    """Write ``report.json``, ``report.txt`` and ``timings.json``."""
    out_dir = Path(out_dir)
    rounded = {name: round(float(t), 3) for name, t in sorted(timings.items())}
    return [
        _write_text(out_dir / REPORT_JSON, _json_text(report)),
        _write_text(out_dir / REPORT_TXT, render_report_table(report)),
        _write_text(out_dir / TIMINGS_JSON, _json_text(rounded)),
    ]


def read_report(path: Path) -> dict[str, Any]:
    """Load a report written by :func:`write_report`."""
    with open(path, encoding="utf-8") as f:
        document: dict[str, Any] = json.load(f)
    return document


def artifact_names(models: Sequence[str]) -> list[str]:
    """Files a run over ``models`` writes, without the optional MPS dumps."""
    names = [REPORT_JSON, REPORT_TXT, TIMINGS_JSON]
    for model in models:
        names += [f"schedule_{model}.csv", f"hourly_{model}.csv", f"audit_{model}.json"]
    return sorted(names)


__all__ = [
    "artifact_names",
    "comparison_report",
    "hourly_frame",
    "model_entry",
    "read_report",
    "render_report_table",
    "schedule_frame",
    "write_audit",
    "write_report",
    "write_schedule",
]

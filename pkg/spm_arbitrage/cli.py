"""Command line: calibrate, build, solve, audit and report in one run."""

import logging
import math
from argparse import ArgumentParser, Namespace
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal, Self
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    model_validator,
)
from spm_arbitrage.arbitrage import (
    DEFAULT_SUBINTERVALS,
    PHYSICS,
    POWER_ENERGY,
    SECONDS_PER_HOUR,
    PwlSettings,
    Schedule,
    build_physics_based,
    build_power_energy,
    solve,
)
from spm_arbitrage.calibrate import (
    AUDIT_STEP,
    AuditReport,
    audit_schedule,
    round_trip_efficiency,
)
from spm_arbitrage.cell_params import CellParams, load_params, reference_params_path
from spm_arbitrage.errors import (
    EXIT_CODES,
    ArbitrageError,
    ErrorCategory,
    RunConfigError,
)
from spm_arbitrage.milp_model import MilpModel
from spm_arbitrage.mps import write_mps
from spm_arbitrage.prices import (
    PriceSeries,
    day_ahead_prices_path,
    ingest_prices,
)
from spm_arbitrage.reporting import (
    comparison_report,
    model_entry,
    render_report_table,
    write_audit,
    write_report,
    write_schedule,
)
from spm_arbitrage.solvers import SolverBackend, get_backend


LOGGER = logging.getLogger(__name__)

BOTH = "both"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class RunConfig(BaseModel):
    """Validated options of one run.

    Attributes:
        model: ``power-energy``, ``physics`` or ``both``.
        prices: Hourly price CSV.
        params: Parameter JSON.
        subintervals: Subintervals per hour.
        tau: Subinterval length in s; derived from ``subintervals`` when
            omitted.
        eta: Round-trip efficiency of the power-energy model; calibrated
            with the single particle model at 1C when ``None``.
        pwl_ocp_segs: Segments of the negative open-circuit potential.
        pwl_ocp_segs_pos: Segments of the positive open-circuit potential.
        pwl_square_segs: Segments of each square in the power split.
        power_band: Allowed power spread within an hour, fraction of rating.
        solver: ``highs`` or ``cbc``.
        gap: Relative MIP gap.
        time_limit: Solver time limit per model in s.
        emit_mps: Also write each model as an MPS file.
        out: Output directory.
        log_level: Logging level name.
        audit_step: Simulation step of the audit replay in s.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    model: Literal["power-energy", "physics", "both"] = BOTH
    prices: Path = Field(default_factory=day_ahead_prices_path)
    params: Path = Field(default_factory=reference_params_path)
    subintervals: int = Field(default=DEFAULT_SUBINTERVALS, ge=1)
    tau: float | None = None
    eta: float | None = Field(default=None, gt=0.0, le=1.0)
    pwl_ocp_segs: int = Field(default=PwlSettings.ocp_segments_neg, ge=1)
    pwl_ocp_segs_pos: int = Field(default=PwlSettings.ocp_segments_pos, ge=1)
    pwl_square_segs: int = Field(default=PwlSettings.square_segments, ge=1)
    power_band: float = Field(default=PwlSettings.power_band, ge=0.0)
    solver: Literal["highs", "cbc"] = "highs"
    gap: float = Field(default=1e-3, ge=0.0, lt=1.0)
    time_limit: float = Field(default=120.0, gt=0.0)
    emit_mps: bool = False
    out: Path = Path("results")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    audit_step: float = Field(default=AUDIT_STEP, gt=0.0)

    @model_validator(mode="after")
    def _check_timing(self) -> Self:
        tau = SECONDS_PER_HOUR / self.subintervals
        if self.tau is not None and not math.isclose(
            self.tau * self.subintervals, SECONDS_PER_HOUR
        ):
            raise ValueError(
                f"tau * subintervals must equal {SECONDS_PER_HOUR:.0f} s, got "
                f"{self.tau} * {self.subintervals}"
            )
        per_step = tau / self.audit_step
        if not math.isclose(per_step, round(per_step)) or round(per_step) < 1:
            raise ValueError(
                f"audit_step {self.audit_step} s must divide the subinterval "
                f"length {tau} s"
            )
        return self

    @property
    def subinterval_s(self) -> float:
        """Subinterval length in s."""
        return SECONDS_PER_HOUR / self.subintervals

    @property
    def models(self) -> list[str]:
        """Models to run, in report order."""
        return [POWER_ENERGY, PHYSICS] if self.model == BOTH else [self.model]

    def pwl_settings(self) -> PwlSettings:
        """Linearization settings of the physics-based model."""
        return PwlSettings(
            ocp_segments_neg=self.pwl_ocp_segs,
            ocp_segments_pos=self.pwl_ocp_segs_pos,
            square_segments=self.pwl_square_segs,
            power_band=self.power_band,
        )


@dataclass(frozen=True)
class ModelRun:
    """Everything one model produced.

    Attributes:
        schedule: Solved schedule.
        audit: Replay audit, ``None`` when the solver found no schedule.
        settings: Model settings recorded in the report.
        model: The optimization model.
    """

    schedule: Schedule
    audit: AuditReport | None
    settings: dict[str, Any]
    model: MilpModel


def build_parser() -> ArgumentParser:
    """Argument parser of the ``spm-arbitrage`` command."""
    parser = ArgumentParser(
        prog="spm-arbitrage",
        description=(
            "Day-ahead energy arbitrage of a lithium-ion battery with a "
            "power-energy model and a linearized single particle model"
        ),
    )
    parser.add_argument(
        "--model", choices=(POWER_ENERGY, PHYSICS, BOTH), default=BOTH
    )
    parser.add_argument(
        "--prices", type=Path, help="CSV with header hour,price (default: bundled)"
    )
    parser.add_argument(
        "--params", type=Path, help="Parameter JSON (default: bundled LG M50 set)"
    )
    parser.add_argument("--subintervals", type=int, default=DEFAULT_SUBINTERVALS)
    parser.add_argument("--tau", type=float, help="Subinterval length in s")
    parser.add_argument(
        "--eta", type=float, help="Round-trip efficiency (default: calibrated)"
    )
    parser.add_argument(
        "--pwl-ocp-segs", type=int, default=PwlSettings.ocp_segments_neg
    )
    parser.add_argument(
        "--pwl-ocp-segs-pos", type=int, default=PwlSettings.ocp_segments_pos
    )
    parser.add_argument(
        "--pwl-square-segs", type=int, default=PwlSettings.square_segments
    )
    parser.add_argument("--power-band", type=float, default=PwlSettings.power_band)
    parser.add_argument("--solver", choices=("highs", "cbc"), default="highs")
    parser.add_argument("--gap", type=float, default=1e-3)
    parser.add_argument("--time-limit", type=float, default=120.0)
    parser.add_argument("--emit-mps", action="store_true")
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--log-level", choices=LOG_LEVELS, default="WARNING")
    parser.add_argument("--audit-step", type=float, default=AUDIT_STEP)
    return parser


def config_from_args(args: Namespace) -> RunConfig:
    """Validate parsed arguments.

    Raises:
        RunConfigError: If an option is out of range or inconsistent.
    """
    options = {k: v for k, v in vars(args).items() if v is not None}
    try:
        return RunConfig(**options)
    except ValidationError as exc:
        problems = "; ".join(
            f"--{'.'.join(str(p) for p in err['loc']).replace('_', '-')}: "
            f"{err['msg']}"
            if err["loc"]
            else err["msg"]
            for err in exc.errors()
        )
        raise RunConfigError(f"Invalid options: {problems}") from exc


def _run_power_energy(
    config: RunConfig,
    params: CellParams,
    prices: PriceSeries,
    backend: SolverBackend,
) -> ModelRun:
    eta = config.eta
    if eta is None:
        eta = round_trip_efficiency(params, c_rate=1.0)
        LOGGER.info("Calibrated round-trip efficiency: %.4f", eta)
    model = build_power_energy(params, prices, config.subintervals, eta_rt=eta)
    schedule = solve(model, backend, config.gap, config.time_limit)
    settings = {"eta_rt": round(eta, 6), "subintervals": config.subintervals}
    return ModelRun(schedule, _audit(schedule, params, config), settings, model)


def _run_physics(
    config: RunConfig,
    params: CellParams,
    prices: PriceSeries,
    backend: SolverBackend,
) -> ModelRun:
    cfg = config.pwl_settings()
    model = build_physics_based(params, prices, config.subintervals, pwl_cfg=cfg)
    schedule = solve(model, backend, config.gap, config.time_limit)
    settings = {
        "ocp_segments_neg": cfg.ocp_segments_neg,
        "ocp_segments_pos": cfg.ocp_segments_pos,
        "square_segments": cfg.square_segments,
        "power_band": cfg.power_band,
        "subintervals": config.subintervals,
    }
    return ModelRun(schedule, _audit(schedule, params, config), settings, model)


def _audit(
    schedule: Schedule, params: CellParams, config: RunConfig
) -> AuditReport | None:
    if not schedule.has_solution:
        return None
    return audit_schedule(schedule, params, step=config.audit_step)


_RUNNERS = {POWER_ENERGY: _run_power_energy, PHYSICS: _run_physics}


def _write_artifacts(config: RunConfig, runs: dict[str, ModelRun]) -> None:
    out = config.out
    entries = {}
    for name, result in runs.items():
        write_schedule(result.schedule, out, result.audit)
        if result.audit is not None:
            write_audit(result.audit, out)
        if config.emit_mps:
            write_mps(result.model, _ensure_dir(out) / f"{name}.mps")
        entries[name] = model_entry(result.schedule, result.audit, result.settings)
    report = comparison_report(entries)
    timings = {name: result.schedule.solve_time for name, result in runs.items()}
    write_report(report, out, timings)
    print(render_report_table(report, timings), end="")


def _ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def run(config: RunConfig) -> int:
    """Run the configured models end to end and write their artifacts.

    Inputs are loaded and validated before anything is written, so a
    configuration error leaves the output directory untouched.

    Returns:
        0 on success, the exit code of the error category otherwise. A model
        that ends without a schedule yields the ``solve`` exit code after the
        artifacts of every model are written.
    """
    try:
        params = load_params(config.params)
        prices = ingest_prices(config.prices)
        backend = get_backend(config.solver)
        if len(config.models) == 1:
            name = config.models[0]
            runs = {name: _RUNNERS[name](config, params, prices, backend)}
        else:
            with ThreadPoolExecutor(max_workers=len(config.models)) as pool:
                futures = {
                    name: pool.submit(_RUNNERS[name], config, params, prices, backend)
                    for name in config.models
                }
                runs = {name: future.result() for name, future in futures.items()}
        _write_artifacts(config, runs)
    except ArbitrageError as exc:
        LOGGER.error("%s error: %s", exc.category.value, exc)
        return exc.exit_code

    unsolved = [name for name, r in runs.items() if not r.schedule.has_solution]
    if unsolved:
        LOGGER.warning("No schedule for %s", ", ".join(unsolved))
        return EXIT_CODES[ErrorCategory.SOLVE]
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, configure logging and run."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        config = config_from_args(args)
    except RunConfigError as exc:
        LOGGER.error("config error: %s", exc)
        return exc.exit_code
    return run(config)


__all__ = [
    "ModelRun",
    "RunConfig",
    "build_parser",
    "config_from_args",
    "main",
    "run",
]

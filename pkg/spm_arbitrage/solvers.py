"""Solver backends for :class:`~spm_arbitrage.milp_model.MilpModel`.

``highs`` solves in process through :func:`scipy.optimize.milp`. ``cbc`` writes
an MPS file, runs the CBC executable as a subprocess and parses its solution
file; the executable is taken from ``PATH`` or from the copy bundled with PuLP.
"""

import logging
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import Protocol
import numpy as np
import pulp
from scipy import optimize
from spm_arbitrage.errors import ErrorCategory, SolverError
from spm_arbitrage.milp_model import MilpModel
from spm_arbitrage.mps import read_solution, write_mps


LOGGER = logging.getLogger(__name__)


class SolveStatus(StrEnum):
    """Outcome of a solve."""

    OPTIMAL = "optimal"
    GAP_LIMIT = "gap-limit"
    TIME_LIMIT = "time-limit"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolverResult:
    """Raw solver output.

    Attributes:
        status: Termination status.
        values: Variable values in model order, ``None`` without a solution.
        objective: Objective recomputed from ``values``.
        solve_time: Wall-clock time in s.
        backend: Name of the backend that produced the result.
    """

    status: SolveStatus
    values: np.ndarray | None
    objective: float | None
    solve_time: float
    backend: str

    @property
    def has_solution(self) -> bool:
        """Whether variable values are available."""
        return self.values is not None


class SolverBackend(Protocol):
    """Interface shared by all backends."""

    name: str
    supports_sos2: bool

    def solve(self, model: MilpModel, gap: float, time_limit: float) -> SolverResult:
        """Solve a model to a relative gap within a time limit."""
        ...


class HighsBackend:
    """HiGHS through SciPy, in process."""

    name = "highs"
    supports_sos2 = False

    def solve(self, model: MilpModel, gap: float, time_limit: float) -> SolverResult:
        """Solve with :func:`scipy.optimize.milp`.

        An infeasible verdict reached with presolve is checked once more with
        presolve disabled, within the remaining time.
        """
        arrays = model.to_arrays()
        constraints = (
            [optimize.LinearConstraint(arrays.a, arrays.row_lb, arrays.row_ub)]
            if model.constraints
            else []
        )
        started = time.perf_counter()
        for presolve in (True, False):
            remaining = max(time_limit - (time.perf_counter() - started), 1.0)
            res = optimize.milp(
                c=-arrays.c,
                integrality=arrays.integrality,
                bounds=optimize.Bounds(arrays.lb, arrays.ub),
                constraints=constraints,
                options={
                    "disp": False,
                    "presolve": presolve,
                    "mip_rel_gap": gap,
                    "time_limit": remaining,
                },
            )
            LOGGER.debug("HiGHS finished with status %s: %s", res.status, res.message)
            if res.status != 2 or not presolve:
                break
            LOGGER.warning(
                "HiGHS presolve reports %s infeasible, retrying without presolve",
                model.name,
            )
        elapsed = time.perf_counter() - started

        if res.status == 0:
            mip_gap = getattr(res, "mip_gap", 0.0) or 0.0
            status = SolveStatus.GAP_LIMIT if mip_gap > 1e-9 else SolveStatus.OPTIMAL
        elif res.status == 1:
            status = SolveStatus.TIME_LIMIT
        elif res.status == 2:
            status = SolveStatus.INFEASIBLE
        else:
            raise SolverError(f"HiGHS failed on {model.name}: {res.message}")

        values = None if res.x is None else np.asarray(res.x)
        objective = None if values is None else model.objective_value(values)
        return SolverResult(status, values, objective, elapsed, self.name)


def find_cbc() -> str | None:
    """Locate a CBC executable on ``PATH`` or inside PuLP."""
    on_path = shutil.which("cbc")
    if on_path:
        return on_path
    bundled = pulp.PULP_CBC_CMD(msg=False)
    return bundled.path if bundled.available() else None


_CBC_STATUS = {
    "Optimal": SolveStatus.OPTIMAL,
    "Infeasible": SolveStatus.INFEASIBLE,
    "Integer": SolveStatus.INFEASIBLE,
}


class CbcBackend:
    """CBC run as a subprocess on an MPS file."""

    name = "cbc"
    supports_sos2 = False

    def __init__(self, executable: str | None = None) -> None:
        """Resolve the executable.

        Raises:
            SolverError: If no CBC executable can be found.
        """
        resolved = executable or find_cbc()
        if resolved is None:
            raise SolverError("No CBC executable found on PATH or bundled with PuLP")
        self.executable = resolved

    def command(
        self, mps_path: Path, solution_path: Path, gap: float, time_limit: float
    ) -> list[str]:
        """Command line for one solve."""
        return [
            self.executable,
            str(mps_path),
            "sec",
            str(time_limit),
            "ratio",
            str(gap),
            "branch",
            "printingOptions",
            "all",
            "solution",
            str(solution_path),
        ]

    def solve(self, model: MilpModel, gap: float, time_limit: float) -> SolverResult:
        """Export, solve and read back."""
        with tempfile.TemporaryDirectory(prefix="spm-arbitrage-") as tmp:
            mps_path = Path(tmp) / "model.mps"
            solution_path = Path(tmp) / "model.sol"
            names = write_mps(model, mps_path)
            cmd = self.command(mps_path, solution_path, gap, time_limit)
            LOGGER.debug("Running %s", " ".join(cmd))
            started = time.perf_counter()
            try:
                proc = subprocess.run(cmd, capture_output=True, text=True, check=False)
            except OSError as exc:
                raise SolverError(
                    f"Could not start CBC at {self.executable}: {exc}"
                ) from exc
            elapsed = time.perf_counter() - started
            if proc.returncode != 0:
                raise SolverError(
                    f"CBC exited with code {proc.returncode}: {proc.stderr.strip()}"
                )
            if not solution_path.exists():
                raise SolverError(f"CBC wrote no solution for {model.name}")
            solution = read_solution(solution_path, names.columns)

        word = solution.status.split()[0] if solution.status else ""
        if word == "Stopped":
            status = (
                SolveStatus.TIME_LIMIT
                if "time" in solution.status
                else SolveStatus.GAP_LIMIT
            )
        elif word in _CBC_STATUS:
            status = _CBC_STATUS[word]
        else:
            raise SolverError(f"CBC reported {solution.status!r} for {model.name}")
        if status is SolveStatus.INFEASIBLE:
            return SolverResult(status, None, None, elapsed, self.name)
        values = solution.values
        return SolverResult(
            status, values, model.objective_value(values), elapsed, self.name
        )


def get_backend(name: str) -> SolverBackend:
    """Instantiate a backend by name (``highs`` or ``cbc``).

    Raises:
        SolverError: With the ``config`` category for an unknown name.
    """
    if name == HighsBackend.name:
        return HighsBackend()
    if name == CbcBackend.name:
        return CbcBackend()
    error = SolverError(f"Unknown solver backend {name!r}; choose highs or cbc")
    error.category = ErrorCategory.CONFIG
    raise error


__all__ = [
    "CbcBackend",
    "HighsBackend",
    "SolveStatus",
    "SolverBackend",
    "SolverResult",
    "find_cbc",
    "get_backend",
]

"""Tests for the HiGHS and CBC backends."""

import logging
from pathlib import Path
import numpy as np
import pytest
from spm_arbitrage.errors import ErrorCategory, SolverError
from spm_arbitrage.milp_model import MilpModel
from spm_arbitrage.solvers import (
    CbcBackend,
    HighsBackend,
    SolveStatus,
    get_backend,
)


class TestHighsBackend:
    """Tests for HighsBackend."""

    def test_toy_optimum(self, toy_milp: MilpModel) -> None:
        """The knapsack optimum is found exactly."""
        result = HighsBackend().solve(toy_milp, gap=0.0, time_limit=30.0)
        assert result.status is SolveStatus.OPTIMAL
        assert result.has_solution
        assert result.objective == pytest.approx(3.5)
        assert result.values is not None
        np.testing.assert_allclose(result.values, [1.0, 0.0, 0.5], atol=1e-9)
        assert result.backend == "highs"
        assert result.solve_time >= 0.0

    def test_infeasible(self, infeasible_milp: MilpModel) -> None:
        """Infeasible models report no solution."""
        result = HighsBackend().solve(infeasible_milp, gap=1e-3, time_limit=30.0)
        assert result.status is SolveStatus.INFEASIBLE
        assert not result.has_solution
        assert result.objective is None

    def test_infeasible_is_confirmed_without_presolve(
        self, infeasible_milp: MilpModel, caplog: pytest.LogCaptureFixture
    ) -> None:
        """A presolve verdict of infeasible is rechecked before it is reported."""
        caplog.set_level(logging.WARNING, logger="spm_arbitrage.solvers")
        result = HighsBackend().solve(infeasible_milp, gap=1e-3, time_limit=30.0)
        assert result.status is SolveStatus.INFEASIBLE
        assert "retrying without presolve" in caplog.text

    def test_model_without_rows(self) -> None:
        """Bounds alone are a valid model."""
        model = MilpModel("bounds")
        x = model.add_variable("x", -2.0, 5.0)
        model.set_objective({x: -1.0})
        result = HighsBackend().solve(model, gap=0.0, time_limit=30.0)
        assert result.objective == pytest.approx(2.0)


class TestCbcBackend:
    """Tests for CbcBackend."""

    def test_command_line(self, tmp_path: Path) -> None:
        """Gap, time limit and solution path are passed through."""
        backend = CbcBackend("/opt/cbc")
        cmd = backend.command(tmp_path / "m.mps", tmp_path / "m.sol", 0.01, 60.0)
        assert cmd[0] == "/opt/cbc"
        assert cmd[cmd.index("sec") + 1] == "60.0"
        assert cmd[cmd.index("ratio") + 1] == "0.01"
        assert cmd[-1] == str(tmp_path / "m.sol")

    def test_missing_executable(self, toy_milp: MilpModel, tmp_path: Path) -> None:
        """A path that cannot be started is a solver error."""
        backend = CbcBackend(str(tmp_path / "no-such-cbc"))
        with pytest.raises(SolverError, match="Could not start CBC"):
            backend.solve(toy_milp, gap=1e-3, time_limit=10.0)

    def test_agrees_with_highs(self, toy_milp: MilpModel, cbc_path: str) -> None:
        """Both backends find the same optimum."""
        cbc = CbcBackend(cbc_path).solve(toy_milp, gap=0.0, time_limit=30.0)
        highs = HighsBackend().solve(toy_milp, gap=0.0, time_limit=30.0)
        assert cbc.status is SolveStatus.OPTIMAL
        assert cbc.objective == pytest.approx(highs.objective)

    def test_infeasible(self, infeasible_milp: MilpModel, cbc_path: str) -> None:
        """CBC infeasibility maps to the shared status."""
        result = CbcBackend(cbc_path).solve(infeasible_milp, gap=0.0, time_limit=30.0)
        assert result.status is SolveStatus.INFEASIBLE
        assert not result.has_solution


class TestGetBackend:
    """Tests for get_backend."""

    def test_highs(self) -> None:
        """The in-process backend needs no executable."""
        assert isinstance(get_backend("highs"), HighsBackend)

    def test_unknown_name(self) -> None:
        """Unknown names are configuration errors."""
        with pytest.raises(SolverError, match="Unknown solver backend") as exc_info:
            get_backend("gurobi")
        assert exc_info.value.category is ErrorCategory.CONFIG
        assert exc_info.value.exit_code == 2

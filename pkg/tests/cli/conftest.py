"""Shared fixtures for cli tests."""

from pathlib import Path
import pytest


@pytest.fixture
def quick_argv(tmp_path: Path) -> list[str]:
    """Return arguments for a fast power-energy run into ``tmp_path/out``."""
    return [
        "--model",
        "power-energy",
        "--eta",
        "0.9",
        "--subintervals",
        "2",
        "--audit-step",
        "600",
        "--out",
        str(tmp_path / "out"),
    ]

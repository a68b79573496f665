"""Shared fixtures for prices tests."""

from collections.abc import Callable, Sequence
from pathlib import Path
import pytest


@pytest.fixture
def write_prices(tmp_path: Path) -> Callable[..., Path]:
    """Return a helper that writes ``hour,price`` rows to a CSV file."""

    def write(
        rows: Sequence[tuple[object, object]], header: str = "hour,price"
    ) -> Path:
        path = tmp_path / "prices.csv"
        lines = [header] + [f"{hour},{price}" for hour, price in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return write


@pytest.fixture
def flat_rows() -> list[tuple[object, object]]:
    """Return 24 rows priced at 10 times the hour."""
    return [(hour, 10 * hour) for hour in range(1, 25)]

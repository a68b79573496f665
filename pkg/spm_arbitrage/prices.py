"""Hourly day-ahead electricity prices."""

import logging
from collections.abc import Iterator, Sequence
from importlib import resources
from pathlib import Path
from typing import overload
import numpy as np
import pandas as pd
from spm_arbitrage.errors import ErrorCategory, PriceFileError


LOGGER = logging.getLogger(__name__)

HOURS = 24


class PriceSeries(Sequence[float]):
    """Exactly 24 finite hourly prices in $/MWh, hour 1 first."""

    def __init__(self, prices: Sequence[float]) -> None:
        """Validate and store the prices.

        Raises:
            PriceFileError: If there are not 24 finite values.
        """
        values = np.asarray(prices, dtype=float)
        if values.shape != (HOURS,):
            raise PriceFileError(f"Expected {HOURS} hourly prices, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise PriceFileError("Prices must be finite")
        self._values = values
        self._values.setflags(write=False)

    @overload
    def __getitem__(self, index: int) -> float: ...

    @overload
    def __getitem__(self, index: slice) -> Sequence[float]: ...

    def __getitem__(self, index: int | slice) -> float | Sequence[float]:
        """Price of an hour (0-based position)."""
        if isinstance(index, slice):
            return self._values[index].tolist()
        return float(self._values[index])

    def __len__(self) -> int:
        """Always 24."""
        return HOURS

    def __iter__(self) -> Iterator[float]:
        """Iterate over the prices in hour order."""
        return iter(self._values.tolist())

    def hour(self, hour: int) -> float:
        """Price of a 1-based hour."""
        if not 1 <= hour <= HOURS:
            raise IndexError(f"Hour must be within 1..{HOURS}, got {hour}")
        return float(self._values[hour - 1])

    def scaled(self, factor: float) -> "PriceSeries":
        """All prices multiplied by a factor."""
        return PriceSeries(self._values * factor)

    def to_array(self) -> np.ndarray:
        """Copy of the prices."""
        return self._values.copy()


def day_ahead_prices_path() -> Path:
    """Locate the bundled case-study price file."""
    return Path(str(resources.files("spm_arbitrage") / "data" / "day_ahead_prices.csv"))


def ingest_prices(path: Path) -> PriceSeries:
    """Read a ``hour,price`` CSV with every hour from 1 to 24 exactly once.

    Rows may come in any order; they are sorted by hour.

    Raises:
        PriceFileError: On a missing file, wrong header, wrong row count,
            duplicate or missing hours, or non-numeric prices.
    """
    try:
        frame = pd.read_csv(path, dtype=str, skipinitialspace=True)
    except FileNotFoundError as exc:
        raise PriceFileError(f"Price file does not exist: {path}") from exc
    except UnicodeDecodeError as exc:
        raise PriceFileError(f"Price file {path} is not UTF-8: {exc}") from exc
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        error = PriceFileError(f"Could not read price file {path}: {exc}")
        error.category = ErrorCategory.IO
        raise error from exc

    columns = [str(c).strip() for c in frame.columns]
    if columns != ["hour", "price"]:
        raise PriceFileError(
            f"Price file {path} must have header hour,price, got {','.join(columns)}"
        )
    frame.columns = columns
    if len(frame) != HOURS:
        raise PriceFileError(
            f"Price file {path} has {len(frame)} rows, expected {HOURS}"
        )

    hours = pd.to_numeric(frame["hour"], errors="coerce")
    prices = pd.to_numeric(frame["price"], errors="coerce")
    if hours.isna().any() or (hours % 1 != 0).any():
        raise PriceFileError(f"Price file {path} has non-integer hours")
    if prices.isna().any():
        bad = frame.loc[prices.isna(), "hour"].tolist()
        raise PriceFileError(
            f"Price file {path} has non-numeric prices for hours {bad}"
        )

    duplicated = sorted(set(hours[hours.duplicated()].astype(int)))
    if duplicated:
        raise PriceFileError(f"Price file {path} repeats hours {duplicated}")
    missing = sorted(set(range(1, HOURS + 1)) - set(hours.astype(int)))
    if missing:
        raise PriceFileError(f"Price file {path} is missing hours {missing}")

    ordered = prices.to_numpy()[np.argsort(hours.to_numpy())]
    LOGGER.debug("Loaded %d hourly prices from %s", HOURS, path)
    return PriceSeries(ordered)


__all__ = ["HOURS", "PriceSeries", "day_ahead_prices_path", "ingest_prices"]

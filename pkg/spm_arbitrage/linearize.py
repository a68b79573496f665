"""Piecewise-linear and first-order approximations used by the optimizer."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any
import numpy as np
from numpy.typing import ArrayLike
from spm_arbitrage.cell_params import CellParams, ElectrodeParams
from spm_arbitrage.spm import exchange_current_density


LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Continuous piecewise-linear function given by its breakpoints.

    Attributes:
        breakpoints: Strictly ascending x-values.
        values: Function values at the breakpoints.
        max_error: Largest absolute deviation from the approximated function
            observed when the approximation was built.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    max_error: float = 0.0

    def __post_init__(self) -> None:
        """Check the breakpoint layout."""
        if self.breakpoints.ndim != 1 or self.breakpoints.shape != self.values.shape:
            raise ValueError(
                "breakpoints and values must be 1-D arrays of equal length"
            )
        if len(self.breakpoints) < 2:
            raise ValueError("A piecewise-linear function needs at least 2 breakpoints")
        if np.any(np.diff(self.breakpoints) <= 0):
            raise ValueError("breakpoints must be strictly ascending")

    @property
    def n_seg(self) -> int:
        """Number of linear segments."""
        return len(self.breakpoints) - 1

    @property
    def domain(self) -> tuple[float, float]:
        """Interval covered by the breakpoints."""
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def slopes(self) -> np.ndarray:
        """Slope of every segment."""
        return np.diff(self.values) / np.diff(self.breakpoints)

    def __call__(self, x: ArrayLike) -> np.ndarray:
        """Evaluate inside the domain; values outside are held at the ends."""
        return np.interp(x, self.breakpoints, self.values)

    def to_dict(self) -> dict[str, Any]:
        """Plain representation for reports and model dumps."""
        return {
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
            "max_error": self.max_error,
        }


def fit_pwl(
    curve: Sequence[Sequence[float]] | np.ndarray,
    n_seg: int,
    domain: tuple[float, float],
) -> PiecewiseLinearFn:
    """Approximate a tabulated curve with ``n_seg`` segments.

    Breakpoints start at the domain ends; each further breakpoint is placed at
    the tabulated point with the largest deviation from the current fit. The
    knot set with the smallest error seen along the way is kept, and missing
    segments are filled by splitting the widest segment on the fit itself, so
    the error never grows with ``n_seg``.

    Args:
        curve: ``(x, y)`` pairs, ascending in ``x``; linear in between.
        n_seg: Number of segments, at least 1.
        domain: Interval to approximate, inside the tabulated range.

    Returns:
        The fit, with ``max_error`` measured over the tabulated points.

    Raises:
        ValueError: If ``n_seg < 1`` or the domain is not tabulated.
    """
    if n_seg < 1:
        raise ValueError(f"n_seg must be at least 1, got {n_seg}")
    table = np.asarray(curve, dtype=float)
    x_tab, y_tab = table[:, 0], table[:, 1]
    lo, hi = domain
    if not x_tab[0] <= lo < hi <= x_tab[-1]:
        raise ValueError(
            f"Domain [{lo}, {hi}] outside the tabulated range "
            f"[{x_tab[0]}, {x_tab[-1]}]"
        )
    inside = (x_tab > lo) & (x_tab < hi)
    x_pts = np.concatenate(([lo], x_tab[inside], [hi]))
    y_pts = np.interp(x_pts, x_tab, y_tab)

    def deviation(knots: list[int]) -> np.ndarray:
        return np.abs(y_pts - np.interp(x_pts, x_pts[knots], y_pts[knots]))

    chosen = [0, len(x_pts) - 1]
    best = list(chosen)
    best_error = float(deviation(best).max())
    for _ in range(n_seg - 1):
        errors = deviation(sorted(chosen))
        errors[chosen] = -1.0
        worst = int(np.argmax(errors))
        if errors[worst] <= 0.0:
            break
        chosen.append(worst)
        error = float(deviation(sorted(chosen)).max())
        if error < best_error:
            best, best_error = list(chosen), error

    knots = sorted(best)
    x_knots, y_knots = list(x_pts[knots]), list(y_pts[knots])
    while len(x_knots) - 1 < n_seg:
        widest = int(np.argmax(np.diff(x_knots)))
        x_knots.insert(widest + 1, 0.5 * (x_knots[widest] + x_knots[widest + 1]))
        y_knots.insert(widest + 1, 0.5 * (y_knots[widest] + y_knots[widest + 1]))
    return PiecewiseLinearFn(np.array(x_knots), np.array(y_knots), best_error)


def pwl_square(domain: tuple[float, float], n_seg: int) -> PiecewiseLinearFn:
    """Chord approximation of ``x**2`` on uniform breakpoints.

    The chord over-estimates the square by at most ``(dx)**2 / 4``, reached at
    the midpoint of every segment.
    """
    if n_seg < 1:
        raise ValueError(f"n_seg must be at least 1, got {n_seg}")
    lo, hi = domain
    if not lo < hi:
        raise ValueError(f"Empty domain [{lo}, {hi}]")
    x = np.linspace(lo, hi, n_seg + 1)
    width = (hi - lo) / n_seg
    return PiecewiseLinearFn(x, x**2, width**2 / 4.0)


def bv_constant(e: ElectrodeParams, cell: CellParams) -> float:
    """Constant of the linear overpotential for an electrode.

    Falls back to the exchange current density at half stoichiometry when the
    parameter set does not fix it.
    """
    if e.bv_linear_A is not None:
        return e.bv_linear_A
    return exchange_current_density(0.5 * e.c_max, e, cell)


def linear_eta(flux: float, e: ElectrodeParams, cell: CellParams) -> float:
    """Overpotential linear in the flux, ``R T J / A``."""
    return cell.gas_const_R * cell.temperature_T * flux / bv_constant(e, cell)


def power_split_identity(v: float, i: float) -> tuple[float, float]:
    """Rewrite ``v * i`` as ``y1**2 - y2**2``."""
    return (v + i) / 2.0, (v - i) / 2.0


def square_domains(cell: CellParams) -> tuple[tuple[float, float], tuple[float, float]]:
    """Ranges of ``y1`` and ``y2`` implied by the voltage and current limits."""
    lo = (cell.v_min - cell.i_max) / 2.0
    hi = (cell.v_max + cell.i_max) / 2.0
    return (lo, hi), (lo, hi)


__all__ = [
    "PiecewiseLinearFn",
    "bv_constant",
    "fit_pwl",
    "linear_eta",
    "power_split_identity",
    "pwl_square",
    "square_domains",
]

"""Physical and economic parameters of the battery stack.

The parameter file is JSON with four blocks: ``cell``, ``negative_electrode``,
``positive_electrode`` and ``economics``. Every block may carry a ``sources``
mapping that records where each value was taken from; it is preserved when the
parameters are written back out.
"""

import json
import logging
from enum import StrEnum
from importlib import resources
from pathlib import Path
from typing import Any, Self
import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    ValidationError,
    field_validator,
    model_validator,
)
from spm_arbitrage.errors import ErrorCategory, ParameterError


LOGGER = logging.getLogger(__name__)

MIN_OCP_POINTS = 50
REQUIRED_BLOCKS = ("cell", "negative_electrode", "positive_electrode", "economics")
# Largest rise in V tolerated by the non-increasing OCP check.
OCP_FLAT_TOL = 1e-9


class Electrode(StrEnum):
    """Electrode tag used to select sign conventions and parameters."""

    NEG = "negative"
    POS = "positive"


class ElectrodeParams(BaseModel):
    """Constants of one porous electrode.

    Attributes:
        radius_R: Particle radius in m.
        diffusion_D: Solid-phase diffusivity in m²/s.
        rate_const_k: Reaction rate constant, m^2.5/(mol^0.5 s) times F.
        vol_fraction_eps: Active material volume fraction.
        volume_nu: Electrode volume in m³.
        c_max: Saturation concentration in mol/m³.
        c_min: Concentration at the lower edge of the operating window.
        c_op_max: Concentration at the upper edge of the operating window.
        ocp_curve: ``(stoichiometry, volts)`` pairs, ascending in stoichiometry.
        bv_linear_A: Constant of the linear overpotential; ``None`` selects the
            exchange current density at 50% stoichiometry.
        sources: Provenance notes keyed by field name.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    radius_R: float = Field(gt=0)
    diffusion_D: float = Field(gt=0)
    rate_const_k: float = Field(gt=0)
    vol_fraction_eps: float = Field(gt=0, le=1)
    volume_nu: float = Field(gt=0)
    c_max: float = Field(gt=0)
    c_min: float = Field(gt=0)
    c_op_max: float = Field(gt=0)
    ocp_curve: tuple[tuple[float, float], ...]
    bv_linear_A: float | None = Field(default=None, gt=0)
    sources: dict[str, str] = Field(default_factory=dict)

    _sto: np.ndarray = PrivateAttr()
    _ocp: np.ndarray = PrivateAttr()

    @field_validator("ocp_curve")
    @classmethod
    def _check_ocp_curve(
        cls, curve: tuple[tuple[float, float], ...]
    ) -> tuple[tuple[float, float], ...]:
        if len(curve) < MIN_OCP_POINTS:
            raise ValueError(
                f"ocp_curve needs at least {MIN_OCP_POINTS} points, got {len(curve)}"
            )
        sto = np.array([point[0] for point in curve])
        volts = np.array([point[1] for point in curve])
        if not np.all(np.isfinite(sto)) or not np.all(np.isfinite(volts)):
            raise ValueError("ocp_curve contains non-finite values")
        if np.any(np.diff(sto) <= 0):
            raise ValueError("ocp_curve stoichiometries must be strictly ascending")
        if sto[0] < 0 or sto[-1] > 1:
            raise ValueError("ocp_curve stoichiometries must lie within [0, 1]")
        return curve

    @model_validator(mode="after")
    def _check_window(self) -> Self:
        if not 0 < self.c_min < self.c_op_max <= self.c_max:
            raise ValueError(
                "c_min < c_op_max <= c_max must hold, got "
                f"c_min={self.c_min}, c_op_max={self.c_op_max}, c_max={self.c_max}"
            )
        lo, hi = self.window_stoichiometry
        if lo < self.ocp_curve[0][0] or hi > self.ocp_curve[-1][0]:
            raise ValueError(
                f"operating window [{lo:.4f}, {hi:.4f}] is not covered by ocp_curve"
            )
        return self

    def model_post_init(self, context: Any, /) -> None:
        """Cache the OCP table as arrays for interpolation."""
        self._sto = np.array([point[0] for point in self.ocp_curve])
        self._ocp = np.array([point[1] for point in self.ocp_curve])

    @property
    def ocp_stoichiometry(self) -> np.ndarray:
        """Tabulated stoichiometries."""
        return self._sto

    @property
    def ocp_volts(self) -> np.ndarray:
        """Tabulated open-circuit potentials."""
        return self._ocp

    @property
    def window_stoichiometry(self) -> tuple[float, float]:
        """Operating window expressed as stoichiometry."""
        return self.c_min / self.c_max, self.c_op_max / self.c_max

    def ocp(self, sto: float | np.ndarray) -> float | np.ndarray:
        """Interpolate the open-circuit potential linearly."""
        return np.interp(sto, self._sto, self._ocp)

    def ocp_is_non_increasing(self) -> bool:
        """Check that the OCP never rises across the operating window."""
        lo, hi = self.window_stoichiometry
        inside = (self._sto > lo) & (self._sto < hi)
        grid = np.concatenate(([lo], self._sto[inside], [hi]))
        return bool(np.all(np.diff(self.ocp(grid)) <= OCP_FLAT_TOL))


class CellParams(BaseModel):
    """Cell, stack and economic data together with both electrodes.

    Attributes:
        n_cells: Number of identical cells in the stack.
        temperature_T: Cell temperature in K.
        faraday_F: Faraday constant in C/mol.
        gas_const_R: Universal gas constant in J/(mol K).
        electrolyte_conc: Electrolyte concentration in mol/m³.
        i_max: Cell current limit in A (1C).
        v_min: Lower cell voltage limit in V.
        v_max: Upper cell voltage limit in V.
        soc_floor: Minimum state of charge as a fraction.
        q_max: Stack energy capacity in MWh.
        p_max_ch: Stack charging power limit in MW.
        p_max_dis: Stack discharging power limit in MW.
        capital_cost: Capital cost of the energy capacity in $/MWh.
        cycle_life: Full cycles until end of life.
        neg: Negative electrode.
        pos: Positive electrode.
        sources: Provenance notes of the ``cell`` and ``economics`` blocks.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_cells: int = Field(ge=1)
    temperature_T: float = Field(gt=0)
    faraday_F: float = Field(gt=0)
    gas_const_R: float = Field(gt=0)
    electrolyte_conc: float = Field(gt=0)
    i_max: float = Field(gt=0)
    v_min: float
    v_max: float
    soc_floor: float = Field(ge=0, lt=1)
    q_max: float = Field(gt=0)
    p_max_ch: float = Field(gt=0)
    p_max_dis: float = Field(gt=0)
    capital_cost: float = Field(ge=0)
    cycle_life: int = Field(ge=1)
    neg: ElectrodeParams
    pos: ElectrodeParams
    sources: dict[str, dict[str, str]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_limits(self) -> Self:
        if self.v_min >= self.v_max:
            raise ValueError(
                f"v_min must be below v_max, got v_min={self.v_min}, "
                f"v_max={self.v_max}"
            )
        if not self.neg.ocp_is_non_increasing():
            raise ValueError(
                "negative_electrode.ocp_curve must be monotone (non-increasing) "
                "over the operating window"
            )
        return self

    def electrode(self, which: Electrode) -> ElectrodeParams:
        """Return the parameters of the requested electrode."""
        return self.neg if which is Electrode.NEG else self.pos

    @property
    def thermal_voltage(self) -> float:
        """Return ``RT/F`` in volts."""
        return self.gas_const_R * self.temperature_T / self.faraday_F

    def concentrations_at_soc(self, soc: float) -> tuple[float, float]:
        """Uniform rest concentrations for a state of charge.

        Args:
            soc: State of charge in [0, 1] of the manufacturer window.

        Returns:
            Negative and positive electrode concentrations in mol/m³.
        """
        if not 0.0 <= soc <= 1.0:
            raise ValueError(f"soc must be within [0, 1], got {soc}")
        c_n = self.neg.c_min + soc * (self.neg.c_op_max - self.neg.c_min)
        c_p = self.pos.c_op_max - soc * (self.pos.c_op_max - self.pos.c_min)
        return c_n, c_p

    def soc_from_negative(self, c_n: float) -> float:
        """Fractional state of charge implied by a negative concentration."""
        return (c_n - self.neg.c_min) / (self.neg.c_op_max - self.neg.c_min)


def stoichiometry(c_surf: float, e: ElectrodeParams) -> float:
    """Normalize a surface concentration by the saturation concentration.

    Raises:
        ValueError: If ``c_surf`` lies outside ``[0, c_max]``.
    """
    if not 0.0 <= c_surf <= e.c_max:
        raise ValueError(
            f"Surface concentration {c_surf} outside [0, {e.c_max}] mol/m³"
        )
    return c_surf / e.c_max


def reference_params_path() -> Path:
    """Locate the bundled LG M50 parameter file."""
    return Path(str(resources.files("spm_arbitrage") / "data" / "lgm50.json"))


def _describe_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        location = ".".join(str(item) for item in err["loc"]) or "<root>"
        parts.append(f"{location}: {err['msg']}")
    return "; ".join(parts)


def params_from_dict(data: dict[str, Any], origin: str = "<dict>") -> CellParams:
    """Validate a parsed parameter document.

    Args:
        data: Decoded JSON with the four parameter blocks.
        origin: Label used in error messages, usually the file path.

    Raises:
        ParameterError: If a block or field is missing or invalid.
    """
    missing = [block for block in REQUIRED_BLOCKS if block not in data]
    if missing:
        raise ParameterError(
            f"Parameter file {origin} missing required blocks: {', '.join(missing)}"
        )
    unknown = sorted(set(data) - set(REQUIRED_BLOCKS))
    if unknown:
        raise ParameterError(
            f"Parameter file {origin} has unknown blocks: {', '.join(unknown)}"
        )

    cell = dict(data["cell"])
    economics = dict(data["economics"])
    sources = {
        "cell": cell.pop("sources", {}),
        "economics": economics.pop("sources", {}),
    }
    overlap = sorted(set(cell) & set(economics))
    if overlap:
        raise ParameterError(
            f"Parameter file {origin} repeats fields across blocks: "
            f"{', '.join(overlap)}"
        )
    try:
        return CellParams(
            **cell,
            **economics,
            neg=data["negative_electrode"],
            pos=data["positive_electrode"],
            sources=sources,
        )
    except ValidationError as exc:
        message = _describe_validation_error(exc)
        message = message.replace("neg.", "negative_electrode.").replace(
            "pos.", "positive_electrode."
        )
        raise ParameterError(f"Invalid parameter file {origin}: {message}") from exc


def load_params(file_path: Path) -> CellParams:
    """Load and validate a JSON parameter file.

    Args:
        file_path: Path to the parameter file.

    Returns:
        Fully validated parameters.

    Raises:
        ParameterError: If the file cannot be read, parsed or validated.
    """
    try:
        with open(file_path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as exc:
        raise ParameterError(f"Parameter file does not exist: {file_path}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"Parameter file {file_path} is not JSON: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParameterError(f"Parameter file {file_path} is not UTF-8: {exc}") from exc
    except OSError as exc:
        error = ParameterError(f"Cannot read parameter file {file_path}: {exc}")
        error.category = ErrorCategory.IO
        raise error from exc
    if not isinstance(data, dict):
        raise ParameterError(f"Parameter file {file_path} must hold a JSON object")
    params = params_from_dict(data, str(file_path))
    LOGGER.debug("Loaded parameters from %s", file_path)
    return params


_ECONOMICS_FIELDS = ("q_max", "p_max_ch", "p_max_dis", "capital_cost", "cycle_life")


def params_to_dict(params: CellParams) -> dict[str, Any]:
    """Convert parameters back into the four-block document layout."""
    flat = params.model_dump(exclude={"neg", "pos", "sources"})
    cell = {k: v for k, v in flat.items() if k not in _ECONOMICS_FIELDS}
    economics = {k: flat[k] for k in _ECONOMICS_FIELDS}
    if params.sources.get("cell"):
        cell["sources"] = params.sources["cell"]
    if params.sources.get("economics"):
        economics["sources"] = params.sources["economics"]

    def electrode_block(e: ElectrodeParams) -> dict[str, Any]:
        block = e.model_dump(exclude_none=True, exclude={"sources"})
        block["ocp_curve"] = [list(point) for point in e.ocp_curve]
        if e.sources:
            block["sources"] = e.sources
        return block

    return {
        "cell": cell,
        "negative_electrode": electrode_block(params.neg),
        "positive_electrode": electrode_block(params.pos),
        "economics": economics,
    }


def dump_params(params: CellParams, path: Path) -> Path:
    """Write parameters as JSON that :func:`load_params` reads back identically."""
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(params_to_dict(params), f, indent=2)
            f.write("\n")
    except OSError as exc:
        error = ParameterError(f"Could not write parameter file {path}: {exc}")
        error.category = ErrorCategory.IO
        raise error from exc
    return path


__all__ = [
    "MIN_OCP_POINTS",
    "CellParams",
    "Electrode",
    "ElectrodeParams",
    "dump_params",
    "load_params",
    "params_from_dict",
    "params_to_dict",
    "reference_params_path",
    "stoichiometry",
]

"""Fixed-format MPS export and solution-file import.

The maximization objective is written as minimization of its negation, the
convention every MPS reader understands. Names that do not fit the eight
character identifier field are replaced by generated identifiers; the mapping
is written next to the MPS file as JSON.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
import numpy as np
from spm_arbitrage.errors import ErrorCategory, SolverError
from spm_arbitrage.milp_model import MilpModel, Sense, VarKind
from spm_arbitrage.naming import OBJECTIVE_ROW, assign_mps_names


LOGGER = logging.getLogger(__name__)

_ROW_CODES = {Sense.LE: "L", Sense.GE: "G", Sense.EQ: "E"}
_MARKER = "MARKER"
_MARKER_TOKEN = "'MARKER'"
_NUMBER_WIDTH = 12


@dataclass(frozen=True)
class MpsNames:
    """Identifiers used for a model in its MPS file.

    Attributes:
        columns: Column identifiers in variable order.
        rows: Row identifiers in constraint order.
        renamed: Generated identifier to original name, for renamed entries.
    """

    columns: list[str]
    rows: list[str]
    renamed: dict[str, str]

    @classmethod
    def for_model(cls, model: MilpModel) -> "MpsNames":
        """Assign identifiers to every column and row of a model."""
        columns, renamed_cols = assign_mps_names(
            (v.name for v in model.variables), "C", reserved=(OBJECTIVE_ROW, _MARKER)
        )
        rows, renamed_rows = assign_mps_names(
            (c.name for c in model.constraints),
            "R",
            reserved=(OBJECTIVE_ROW, _MARKER, *columns),
        )
        return cls(columns, rows, renamed_cols | renamed_rows)


def _number(value: float) -> str:
    """``g`` rendering with as many digits as the numeric field holds."""
    for digits in range(_NUMBER_WIDTH, 0, -1):
        mantissa, _, exponent = f"{float(value):.{digits}g}".partition("e")
        text = f"{mantissa}e{int(exponent)}" if exponent else mantissa
        if len(text) <= _NUMBER_WIDTH:
            return text
    raise ValueError(f"{value!r} does not fit a {_NUMBER_WIDTH}-character field")


def _marker(kind: str) -> str:
    """Integer marker line: name in field 2, ``'MARKER'`` in field 3."""
    return f"    {_MARKER:<8}  {_MARKER_TOKEN:<8}{'':<17}{kind}"


def _line(code: str, name: str, field3: str = "", field4: str = "") -> str:
    text = f" {code:<2} {name:<8}  {field3:<8}  {field4}"
    return text.rstrip()


def write_mps(model: MilpModel, path: Path) -> MpsNames:
    """Write a model as a fixed-format MPS file.

    Args:
        model: Model to export.
        path: Destination file.

    Returns:
        The identifiers used. When any name was replaced, the map is also
        written to ``<path>.names.json``.

    Raises:
        SolverError: With the ``io`` category when the file cannot be written.
    """
    names = MpsNames.for_model(model)
    columns: list[list[tuple[str, float]]] = [[] for _ in model.variables]
    for j, v in model.objective.items():
        columns[j].append((OBJECTIVE_ROW, -v))
    for row_name, con in zip(names.rows, model.constraints, strict=True):
        for j, v in con.coefs.items():
            columns[j].append((row_name, v))

    title = model.name[:8] or "MODEL"
    lines = [f"NAME          {title}", "ROWS", f" N  {OBJECTIVE_ROW}"]
    lines += [
        _line(_ROW_CODES[con.sense], row_name)
        for row_name, con in zip(names.rows, model.constraints, strict=True)
    ]

    lines.append("COLUMNS")
    in_integer_block = False
    for col_name, var, entries in zip(
        names.columns, model.variables, columns, strict=True
    ):
        is_binary = var.kind is VarKind.BINARY
        if is_binary != in_integer_block:
            marker = "'INTORG'" if is_binary else "'INTEND'"
            lines.append(_marker(marker))
            in_integer_block = is_binary
        if not entries:
            entries = [(OBJECTIVE_ROW, 0.0)]
        lines += [_line("", col_name, row, _number(v)) for row, v in entries]
    if in_integer_block:
        lines.append(_marker("'INTEND'"))

    lines.append("RHS")
    lines += [
        _line("", "RHS", row_name, _number(con.rhs))
        for row_name, con in zip(names.rows, model.constraints, strict=True)
        if con.rhs != 0.0
    ]

    lines.append("BOUNDS")
    for col_name, var in zip(names.columns, model.variables, strict=True):
        if var.lb == var.ub:
            lines.append(_line("FX", "BND", col_name, _number(var.lb)))
        else:
            lines.append(_line("LO", "BND", col_name, _number(var.lb)))
            lines.append(_line("UP", "BND", col_name, _number(var.ub)))
    lines.append("ENDATA")

    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
        if names.renamed:
            names_path = Path(f"{path}.names.json")
            names_path.write_text(
                json.dumps(names.renamed, indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
    except OSError as exc:
        error = SolverError(f"Could not write MPS file {path}: {exc}")
        error.category = ErrorCategory.IO
        raise error from exc
    LOGGER.info(
        "Wrote %s with %d rows and %d columns",
        path,
        len(model.constraints),
        len(model.variables),
    )
    return names


_CBC_STATUS_WORDS = ("Optimal", "Infeasible", "Integer", "Unbounded", "Stopped")


@dataclass(frozen=True)
class SolutionFile:
    """Contents of a solver solution file.

    Attributes:
        status: Status line reported by the solver, empty for plain files.
        values: Column values in model order; absent columns are 0.
    """

    status: str
    values: np.ndarray


def read_solution(path: Path, columns: list[str]) -> SolutionFile:
    """Parse a CBC solution file or a plain ``name value`` listing.

    Args:
        path: Solution file.
        columns: Column identifiers in model order.

    Raises:
        SolverError: If the file cannot be read or a value is not numeric.
    """
    position = {name: j for j, name in enumerate(columns)}
    values = np.zeros(len(columns))
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SolverError(f"Could not read solution file {path}: {exc}") from exc

    lines = text.splitlines()
    status = ""
    if lines and lines[0].split() and lines[0].split()[0] in _CBC_STATUS_WORDS:
        status = lines[0].strip()
        lines = lines[1:]
    for raw in lines:
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == "**":
            tokens = tokens[1:]
        if len(tokens) < (3 if status else 2):
            continue
        name, value = (tokens[1], tokens[2]) if status else (tokens[0], tokens[1])
        if name not in position:
            continue
        try:
            values[position[name]] = float(value)
        except ValueError as exc:
            raise SolverError(
                f"Solution file {path} has non-numeric value {value!r} for {name}"
            ) from exc
    return SolutionFile(status, values)


__all__ = ["MpsNames", "SolutionFile", "read_solution", "write_mps"]

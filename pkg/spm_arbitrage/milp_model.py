"""Solver-agnostic description of a mixed-integer linear program.

Models are always maximized. Every variable carries finite bounds so that
piecewise-linear constructions and MPS export never meet free columns.
"""

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any
import numpy as np
from scipy import sparse
from spm_arbitrage.errors import ModelBuildError, PwlDomainError
from spm_arbitrage.linearize import PiecewiseLinearFn


LOGGER = logging.getLogger(__name__)

# Slack allowed between a variable range and the domain of its PWL function.
DOMAIN_TOL = 1e-9


class VarKind(StrEnum):
    """Variable domain."""

    CONTINUOUS = "continuous"
    BINARY = "binary"


class Sense(StrEnum):
    """Relation between a constraint row and its right-hand side."""

    LE = "<="
    GE = ">="
    EQ = "=="


@dataclass(frozen=True)
class Variable:
    """A bounded decision variable.

    Attributes:
        name: Unique name.
        kind: Continuous or binary.
        lb: Lower bound.
        ub: Upper bound.
    """

    name: str
    kind: VarKind
    lb: float
    ub: float


@dataclass(frozen=True)
class Constraint:
    """A linear row ``sum(coefs[j] * x[j]) <sense> rhs``.

    Attributes:
        name: Unique name.
        coefs: Nonzero coefficients keyed by variable index.
        sense: Row sense.
        rhs: Right-hand side.
    """

    name: str
    coefs: dict[int, float]
    sense: Sense
    rhs: float


@dataclass
class ModelArrays:
    """Dense/sparse arrays consumed by matrix-based solvers.

    Attributes:
        c: Objective coefficients (maximized).
        a: Constraint matrix.
        row_lb: Row lower bounds (``-inf`` for ``<=`` rows).
        row_ub: Row upper bounds (``inf`` for ``>=`` rows).
        lb: Variable lower bounds.
        ub: Variable upper bounds.
        integrality: 1 for binaries, 0 otherwise.
    """

    c: np.ndarray
    a: sparse.csr_array
    row_lb: np.ndarray
    row_ub: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    integrality: np.ndarray


@dataclass
class MilpModel:
    """Variables, constraint rows, objective and index metadata.

    Attributes:
        name: Model name, used for MPS export.
        variables: Declared variables in index order.
        constraints: Constraint rows in insertion order.
        objective: Objective coefficients keyed by variable index.
        metadata: Index arrays (e.g. per hour and subinterval) keyed by role.
        info: Scalars and settings needed to interpret a solution.
        pwl: Piecewise-linear functions embedded in the model, keyed by role.
    """

    name: str
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    metadata: dict[str, np.ndarray] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)
    pwl: dict[str, PiecewiseLinearFn] = field(default_factory=dict)
    _names: dict[str, int] = field(default_factory=dict, repr=False)
    _row_names: set[str] = field(default_factory=set, repr=False)

    def add_variable(
        self,
        name: str,
        lb: float,
        ub: float,
        kind: VarKind = VarKind.CONTINUOUS,
    ) -> int:
        """Declare a variable and return its index.

        Raises:
            ModelBuildError: On duplicate names, infinite or crossed bounds.
        """
        if name in self._names:
            raise ModelBuildError(f"Variable {name} declared twice")
        if kind is VarKind.BINARY:
            lb, ub = max(lb, 0.0), min(ub, 1.0)
        if not (math.isfinite(lb) and math.isfinite(ub)):
            raise ModelBuildError(
                f"Variable {name} needs finite bounds, got [{lb}, {ub}]"
            )
        if lb > ub:
            raise ModelBuildError(f"Variable {name} has empty range [{lb}, {ub}]")
        self.variables.append(Variable(name, kind, float(lb), float(ub)))
        self._names[name] = len(self.variables) - 1
        return len(self.variables) - 1

    def index(self, name: str) -> int:
        """Index of a named variable."""
        return self._names[name]

    def add_constraint(
        self, name: str, coefs: Mapping[int, float], sense: Sense, rhs: float
    ) -> int:
        """Append a constraint row and return its position.

        Raises:
            ModelBuildError: If the row references undeclared variables or the
                name is taken.
        """
        if name in self._row_names:
            raise ModelBuildError(f"Constraint {name} declared twice")
        unknown = [j for j in coefs if not 0 <= j < len(self.variables)]
        if unknown:
            raise ModelBuildError(
                f"Constraint {name} references undeclared variables {unknown}"
            )
        row = {j: float(v) for j, v in coefs.items() if v != 0.0}
        self.constraints.append(Constraint(name, row, Sense(sense), float(rhs)))
        self._row_names.add(name)
        return len(self.constraints) - 1

    def set_objective(self, coefs: Mapping[int, float]) -> None:
        """Replace the (maximized) objective."""
        unknown = [j for j in coefs if not 0 <= j < len(self.variables)]
        if unknown:
            raise ModelBuildError(
                f"Objective references undeclared variables {unknown}"
            )
        self.objective = {j: float(v) for j, v in coefs.items() if v != 0.0}

    def add_pwl(self, x: int, y: int, fn: PiecewiseLinearFn, prefix: str) -> None:
        """Tie ``y = fn(x)`` with the incremental (delta) formulation.

        A single segment becomes one equality row. Otherwise segment fill
        variables ``d_p`` in [0, 1] and ordering binaries ``z_p`` enforce
        ``d_{p+1} <= z_p <= d_p`` so segments fill from left to right.

        Raises:
            PwlDomainError: If the range of ``x`` is not covered by ``fn``.
        """
        var = self.variables[x]
        lo, hi = fn.domain
        if var.lb < lo - DOMAIN_TOL or var.ub > hi + DOMAIN_TOL:
            raise PwlDomainError(
                f"Variable {var.name} range [{var.lb:.6g}, {var.ub:.6g}] exceeds "
                f"the piecewise-linear domain [{lo:.6g}, {hi:.6g}] of {prefix}"
            )
        x0, y0 = float(fn.breakpoints[0]), float(fn.values[0])
        if fn.n_seg == 1:
            slope = float(fn.slopes[0])
            self.add_constraint(prefix, {y: 1.0, x: -slope}, Sense.EQ, y0 - slope * x0)
            return

        dx = np.diff(fn.breakpoints)
        dy = np.diff(fn.values)
        fills = [
            self.add_variable(f"{prefix}_d{p}", 0.0, 1.0) for p in range(fn.n_seg)
        ]
        orders = [
            self.add_variable(f"{prefix}_z{p}", 0.0, 1.0, VarKind.BINARY)
            for p in range(fn.n_seg - 1)
        ]
        x_row = {x: 1.0} | {d: -float(w) for d, w in zip(fills, dx, strict=True)}
        y_row = {y: 1.0} | {d: -float(h) for d, h in zip(fills, dy, strict=True)}
        self.add_constraint(f"{prefix}_x", x_row, Sense.EQ, x0)
        self.add_constraint(f"{prefix}_y", y_row, Sense.EQ, y0)
        for p, z in enumerate(orders):
            after, before = fills[p + 1], fills[p]
            self.add_constraint(f"{prefix}_a{p}", {after: 1.0, z: -1.0}, Sense.LE, 0.0)
            self.add_constraint(f"{prefix}_b{p}", {z: 1.0, before: -1.0}, Sense.LE, 0.0)

    def dimensions(self) -> dict[str, int]:
        """Counts of constraints, continuous and binary variables."""
        binary = sum(1 for v in self.variables if v.kind is VarKind.BINARY)
        return {
            "constraints": len(self.constraints),
            "continuous": len(self.variables) - binary,
            "binary": binary,
        }

    def to_arrays(self) -> ModelArrays:
        """Assemble the sparse constraint matrix and bound vectors."""
        rows, cols, data = [], [], []
        row_lb = np.empty(len(self.constraints))
        row_ub = np.empty(len(self.constraints))
        for k, con in enumerate(self.constraints):
            for j, v in con.coefs.items():
                rows.append(k)
                cols.append(j)
                data.append(v)
            row_lb[k] = -np.inf if con.sense is Sense.LE else con.rhs
            row_ub[k] = np.inf if con.sense is Sense.GE else con.rhs
        shape = (len(self.constraints), len(self.variables))
        a = sparse.csr_array((data, (rows, cols)), shape=shape)
        c = np.zeros(len(self.variables))
        for j, v in self.objective.items():
            c[j] = v
        return ModelArrays(
            c=c,
            a=a,
            row_lb=row_lb,
            row_ub=row_ub,
            lb=np.array([v.lb for v in self.variables]),
            ub=np.array([v.ub for v in self.variables]),
            integrality=np.array(
                [1 if v.kind is VarKind.BINARY else 0 for v in self.variables]
            ),
        )

    def objective_value(self, values: np.ndarray) -> float:
        """Objective evaluated at a point."""
        return float(sum(v * values[j] for j, v in self.objective.items()))

    def residual(self, values: np.ndarray) -> float:
        """Largest violation of any row, bound or integrality at a point."""
        worst = 0.0
        for con in self.constraints:
            lhs = sum(v * values[j] for j, v in con.coefs.items())
            if con.sense is Sense.LE:
                worst = max(worst, lhs - con.rhs)
            elif con.sense is Sense.GE:
                worst = max(worst, con.rhs - lhs)
            else:
                worst = max(worst, abs(lhs - con.rhs))
        for j, var in enumerate(self.variables):
            worst = max(worst, var.lb - values[j], values[j] - var.ub)
            if var.kind is VarKind.BINARY:
                worst = max(worst, abs(values[j] - round(values[j])))
        return float(worst)

    def values_of(self, role: str, values: np.ndarray) -> np.ndarray:
        """Pick solution values laid out like ``metadata[role]``."""
        return values[self.metadata[role]]

    def summary(self) -> dict[str, Any]:
        """Dimensions plus the embedded piecewise-linear functions."""
        return {
            "name": self.name,
            "dimensions": self.dimensions(),
            "pwl": {role: fn.to_dict() for role, fn in sorted(self.pwl.items())},
        }


__all__ = [
    "Constraint",
    "MilpModel",
    "ModelArrays",
    "Sense",
    "VarKind",
    "Variable",
]

"""Solver-agnostic mixed-integer linear program representation.

A :class:`MilpModel` is built row by row, each row carrying a tag that
names the constraint family it came from (e.g. ``prereq:ITC3287:c0:s5``).
The tags are the traceability backbone: tests and the infeasibility
reporting both key off them.  ``write_lp`` serializes the model to
CPLEX-style LP text deterministically (insertion order, fixed number
formatting) so identical models produce byte-identical files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional


class VarKind(Enum):
    BINARY = "Binary"
    CONTINUOUS = "Continuous"


class Sense(Enum):
    LE = "<="
    GE = ">="
    EQ = "="


NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


class ModelError(ValueError):
    pass


@dataclass
class Variable:
    name: str
    kind: VarKind
    lower: float
    upper: float
    index: int = -1  # position in the model, set on registration

    def __post_init__(self) -> None:
        if not NAME_RE.match(self.name):
            raise ModelError(f"invalid variable name {self.name!r}")
        if self.kind is VarKind.BINARY:
            if self.lower < 0 or self.upper > 1:
                raise ModelError(f"binary variable {self.name} must have bounds within [0,1]")
        if self.lower > self.upper:
            raise ModelError(f"variable {self.name}: lower bound exceeds upper bound")


@dataclass
class LinearConstraint:
    terms: list[tuple[float, Variable]]
    sense: Sense
    rhs: float
    tag: str


@dataclass
class MilpModel:
    variables: list[Variable] = field(default_factory=list)
    constraints: list[LinearConstraint] = field(default_factory=list)
    objective: list[tuple[float, Variable]] = field(default_factory=list)
    _names: dict[str, Variable] = field(default_factory=dict, repr=False)

    def add_variable(
        self, name: str, kind: VarKind, lower: float = 0.0, upper: float = 1.0
    ) -> Variable:
        if name in self._names:
            raise ModelError(f"duplicate variable name {name!r}")
        var = Variable(name, kind, lower, upper, index=len(self.variables))
        self.variables.append(var)
        self._names[name] = var
        return var

    def variable(self, name: str) -> Variable:
        return self._names[name]

    def add_constraint(
        self, terms: Iterable[tuple[float, Variable]], sense: Sense, rhs: float, tag: str
    ) -> LinearConstraint:
        merged: dict[int, tuple[float, Variable]] = {}
        for coeff, var in terms:
            if not (0 <= var.index < len(self.variables)) or self.variables[var.index] is not var:
                raise ModelError(f"variable {var.name} not registered with this model")
            if var.index in merged:
                merged[var.index] = (merged[var.index][0] + coeff, var)
            else:
                merged[var.index] = (coeff, var)
        row = LinearConstraint(list(merged.values()), sense, rhs, tag)
        self.constraints.append(row)
        return row

    def set_objective(self, terms: Iterable[tuple[float, Variable]]) -> None:
        """Minimization objective (the only sense this model supports)."""
        merged: dict[int, tuple[float, Variable]] = {}
        for coeff, var in terms:
            if not (0 <= var.index < len(self.variables)) or self.variables[var.index] is not var:
                raise ModelError(f"variable {var.name} not registered with this model")
            if var.index in merged:
                merged[var.index] = (merged[var.index][0] + coeff, var)
            else:
                merged[var.index] = (coeff, var)
        self.objective = list(merged.values())

    def stats(self) -> tuple[int, int, int, int]:
        """(n_vars, n_binary, n_continuous, n_constraints)."""
        n_bin = sum(1 for v in self.variables if v.kind is VarKind.BINARY)
        return (
            len(self.variables),
            n_bin,
            len(self.variables) - n_bin,
            len(self.constraints),
        )


def model_stats(model: MilpModel) -> tuple[int, int, int, int]:
    return model.stats()


# --- LP serialization -------------------------------------------------------

_ROW_NAME_BAD = re.compile(r"[^A-Za-z0-9_.]")


def _row_name(tag: str, fallback: str) -> str:
    name = _ROW_NAME_BAD.sub("_", tag) if tag else fallback
    if not name or not name[0].isalpha():
        name = "c_" + name
    return name


def format_number(x: float) -> str:
    """Up to 12 significant digits; positional notation for |x| >= 1e-4."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    s = f"{x:.12g}"
    if "e" in s or "E" in s:
        if abs(x) >= 1e-4:
            s = f"{x:.12f}".rstrip("0").rstrip(".")
    return s


def _terms_text(terms: list[tuple[float, Variable]]) -> str:
    parts: list[str] = []
    for coeff, var in terms:
        if coeff == 0:
            continue
        sign = "-" if coeff < 0 else "+"
        mag = format_number(abs(coeff))
        piece = var.name if mag == "1" else f"{mag} {var.name}"
        if not parts:
            parts.append(piece if sign == "+" else f"- {piece}")
        else:
            parts.append(f"{sign} {piece}")
    return " ".join(parts)


def write_lp(model: MilpModel) -> str:
    """Serialize to CPLEX-style LP text (Minimize / Subject To / Bounds / Binary / End)."""
    lines = ["Minimize"]
    obj = _terms_text(model.objective)
    if not obj:
        # LP readers reject an empty objective; anchor it on the first variable
        obj = f"0 {model.variables[0].name}" if model.variables else "0 zero"
    lines.append(f" obj: {obj}")
    lines.append("Subject To")
    for i, row in enumerate(model.constraints):
        body = _terms_text(row.terms)
        if not body:
            body = f"0 {model.variables[0].name}" if model.variables else "0 zero"
        lines.append(
            f" {_row_name(row.tag, f'c{i}')}: {body} {row.sense.value} {format_number(row.rhs)}"
        )
    lines.append("Bounds")
    for var in model.variables:
        if var.lower == var.upper:
            lines.append(f" {var.name} = {format_number(var.lower)}")
        elif var.kind is VarKind.BINARY and var.lower == 0 and var.upper == 1:
            continue  # default binary bounds
        else:
            lines.append(
                f" {format_number(var.lower)} <= {var.name} <= {format_number(var.upper)}"
            )
    binaries = [v.name for v in model.variables if v.kind is VarKind.BINARY]
    if binaries:
        lines.append("Binary")
        # wrap the name list to keep lines below the classic 255-char LP limit
        line: list[str] = []
        width = 0
        for name in binaries:
            if width + len(name) + 1 > 200 and line:
                lines.append(" " + " ".join(line))
                line, width = [], 0
            line.append(name)
            width += len(name) + 1
        if line:
            lines.append(" " + " ".join(line))
    lines.append("End")
    return "\n".join(lines) + "\n"

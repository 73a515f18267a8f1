"""Solving a MILP model, with a feasibility gate on every result.

Two backends share one contract:

* ``Internal`` -- depth-first branch-and-bound over the model's LP
  relaxation (scipy/HiGHS).  Exact, deterministic, no external processes;
  meant for desk-scale models.
* ``External`` -- writes an ``.lp`` file, runs a user-supplied command
  template containing ``{lp}`` and ``{sol}`` placeholders, and parses the
  solution file back.

No solution is ever reported ``OPTIMAL`` without passing
:func:`verify_solution` at the 1e-6 tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .milp import MilpModel, Sense, VarKind

FEASIBILITY_TOL = 1e-6


class SolveStatus(Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    TIME_LIMIT = "TimeLimit"


class Backend(Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"


class SolverError(RuntimeError):
    pass


@dataclass
class Solution:
    status: SolveStatus
    objective: float = 0.0
    values: dict[str, float] = field(default_factory=dict)
    solve_time: float = 0.0
    nodes: int = 0


@dataclass
class SolverConfig:
    backend: Backend = Backend.INTERNAL
    external_command: Optional[str] = None  # must contain {lp} and {sol}
    time_limit: float = 600.0
    node_limit: int = 2_000_000
    tolerance: float = FEASIBILITY_TOL

    def validate(self) -> None:
        if self.backend is Backend.EXTERNAL:
            if not self.external_command:
                raise SolverError("external backend requires a command template")
            if "{lp}" not in self.external_command or "{sol}" not in self.external_command:
                raise SolverError(
                    "external command template must contain {lp} and {sol} placeholders"
                )


def constraint_violation(model: MilpModel, values: dict[str, float]) -> tuple[float, str]:
    """Largest constraint/bound violation and the offending tag."""
    worst, worst_tag = 0.0, ""
    for var in model.variables:
        v = values.get(var.name, 0.0)
        gap = max(var.lower - v, v - var.upper)
        if var.kind is VarKind.BINARY:
            gap = max(gap, abs(v - round(v)))
        if gap > worst:
            worst, worst_tag = gap, f"bound:{var.name}"
    for row in model.constraints:
        lhs = sum(coeff * values.get(var.name, 0.0) for coeff, var in row.terms)
        if row.sense is Sense.LE:
            gap = lhs - row.rhs
        elif row.sense is Sense.GE:
            gap = row.rhs - lhs
        else:
            gap = abs(lhs - row.rhs)
        if gap > worst:
            worst, worst_tag = gap, row.tag
    return worst, worst_tag


def verify_solution(model: MilpModel, values: dict[str, float], tol: float = FEASIBILITY_TOL) -> None:
    worst, tag = constraint_violation(model, values)
    if worst > tol:
        raise SolverError(f"solution violates {tag!r} by {worst:.3g}")


def objective_value(model: MilpModel, values: dict[str, float]) -> float:
    return sum(coeff * values.get(var.name, 0.0) for coeff, var in model.objective)


def solve(model: MilpModel, config: Optional[SolverConfig] = None) -> Solution:
    """Dispatch to the configured backend and gate the result."""
    config = config or SolverConfig()
    config.validate()
    if config.backend is Backend.INTERNAL:
        from .bnb import solve_branch_bound

        solution = solve_branch_bound(model, config)
    else:
        from .external import run_external

        solution = run_external(model, config)
    if solution.status is SolveStatus.OPTIMAL:
        verify_solution(model, solution.values, config.tolerance)
    return solution

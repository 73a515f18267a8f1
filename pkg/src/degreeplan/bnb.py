"""Exact branch-and-bound for 0/1 MILPs over an LP relaxation.

Deliberately simple: no cuts, no presolve, no heuristics.  Determinism is
the design constraint -- depth-first search, branching on the most
fractional binary (ties broken by ascending variable index), down-branch
explored first, and the incumbent only replaced on strict improvement.
With that, identical models always yield identical assignments.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .milp import MilpModel, Sense, VarKind
from .solver import Solution, SolveStatus, SolverConfig, SolverError

# strict-improvement margin; assumes objective gaps between distinct
# integer solutions are far larger than LP solver noise
_IMPROVE_EPS = 1e-9
_INT_TOL = 1e-6


@dataclass
class _Arrays:
    c: np.ndarray
    a_ub: Optional[csr_matrix]
    b_ub: np.ndarray
    a_eq: Optional[csr_matrix]
    b_eq: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    binary_idx: np.ndarray


def _to_arrays(model: MilpModel) -> _Arrays:
    n = len(model.variables)
    c = np.zeros(n)
    for coeff, var in model.objective:
        c[var.index] += coeff
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for row in model.constraints:
        if row.sense is Sense.LE:
            ub_rows.append([(var.index, coeff) for coeff, var in row.terms])
            ub_rhs.append(row.rhs)
        elif row.sense is Sense.GE:
            ub_rows.append([(var.index, -coeff) for coeff, var in row.terms])
            ub_rhs.append(-row.rhs)
        else:
            eq_rows.append([(var.index, coeff) for coeff, var in row.terms])
            eq_rhs.append(row.rhs)

    def sparse(rows: list) -> Optional[csr_matrix]:
        if not rows:
            return None
        data, indices, indptr = [], [], [0]
        for row in rows:
            for idx, coeff in row:
                indices.append(idx)
                data.append(coeff)
            indptr.append(len(indices))
        return csr_matrix((data, indices, indptr), shape=(len(rows), n))

    return _Arrays(
        c=c,
        a_ub=sparse(ub_rows),
        b_ub=np.array(ub_rhs),
        a_eq=sparse(eq_rows),
        b_eq=np.array(eq_rhs),
        lower=np.array([v.lower for v in model.variables]),
        upper=np.array([v.upper for v in model.variables]),
        binary_idx=np.array(
            [v.index for v in model.variables if v.kind is VarKind.BINARY], dtype=int
        ),
    )


def _relax(arrays: _Arrays, lower: np.ndarray, upper: np.ndarray):
    res = linprog(
        arrays.c,
        A_ub=arrays.a_ub,
        b_ub=arrays.b_ub if arrays.a_ub is not None else None,
        A_eq=arrays.a_eq,
        b_eq=arrays.b_eq if arrays.a_eq is not None else None,
        bounds=np.column_stack([lower, upper]),
        method="highs",
    )
    if res.status == 2:
        return None
    if res.status != 0:
        raise SolverError(f"LP relaxation failed: {res.message}")
    return res


def solve_branch_bound(model: MilpModel, config: Optional[SolverConfig] = None) -> Solution:
    config = config or SolverConfig()
    start = time.monotonic()
    if np.any([v.lower > v.upper for v in model.variables]):
        return Solution(status=SolveStatus.INFEASIBLE, solve_time=time.monotonic() - start)
    arrays = _to_arrays(model)

    incumbent_x: Optional[np.ndarray] = None
    incumbent_obj = float("inf")
    nodes_branched = 0
    hit_limit = False

    # stack entries are (lower, upper) bound vectors; LIFO with the
    # down-branch pushed last gives depth-first, down-first order
    stack: list[tuple[np.ndarray, np.ndarray]] = [(arrays.lower.copy(), arrays.upper.copy())]

    while stack:
        if time.monotonic() - start > config.time_limit or nodes_branched > config.node_limit:
            hit_limit = True
            break
        lower, upper = stack.pop()
        res = _relax(arrays, lower, upper)
        if res is None:
            continue
        if res.fun >= incumbent_obj - _IMPROVE_EPS:
            continue
        x = res.x
        if arrays.binary_idx.size:
            frac = x[arrays.binary_idx]
            dist = np.abs(frac - np.round(frac))
        else:
            dist = np.array([])
        if dist.size == 0 or dist.max() <= _INT_TOL:
            candidate = x.copy()
            if arrays.binary_idx.size:
                candidate[arrays.binary_idx] = np.round(candidate[arrays.binary_idx])
            incumbent_x, incumbent_obj = candidate, res.fun
            continue
        # most fractional binary, ties by ascending variable index
        pick = int(arrays.binary_idx[int(np.argmax(dist))])
        nodes_branched += 1
        up_l, up_u = lower.copy(), upper.copy()
        up_l[pick] = 1.0
        stack.append((up_l, up_u))
        down_l, down_u = lower.copy(), upper.copy()
        down_u[pick] = 0.0
        stack.append((down_l, down_u))

    elapsed = time.monotonic() - start
    values = (
        {v.name: float(incumbent_x[v.index]) for v in model.variables}
        if incumbent_x is not None
        else {}
    )
    if hit_limit:
        return Solution(
            status=SolveStatus.TIME_LIMIT, objective=incumbent_obj, values=values,
            solve_time=elapsed, nodes=nodes_branched,
        )
    if incumbent_x is None:
        return Solution(status=SolveStatus.INFEASIBLE, solve_time=elapsed, nodes=nodes_branched)
    return Solution(
        status=SolveStatus.OPTIMAL, objective=float(incumbent_obj), values=values,
        solve_time=elapsed, nodes=nodes_branched,
    )

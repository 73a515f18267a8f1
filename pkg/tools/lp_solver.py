#!/usr/bin/env python3
"""Standalone MILP solver over CPLEX-style LP files (HiGHS via scipy).

Usage: lp_solver.py MODEL.LP OUTPUT.SOL

Reads the LP file, solves it with scipy.optimize.milp (the HiGHS
branch-and-cut engine), and writes the solution in the simple dialect
the planner parses back:

    # comment
    =obj= 12.5
    x_A 1
    x_B 0

or the single line ``=infeasible=`` for a proven-infeasible model.

Deliberately self-contained (stdlib + numpy/scipy only) so it can act as
an *external* solver process: it shares no code with the model builder
or the internal branch-and-bound.  It doubles as an independent check
that emitted LP files are well-formed.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import Bounds
from scipy.optimize import LinearConstraint as NumConstraint
from scipy.optimize import milp
from scipy.sparse import csr_matrix


@dataclass
class LpProblem:
    minimize: bool
    objective: dict[str, float]
    # rows: (name, {var: coeff}, sense, rhs) with sense in {"<=", ">=", "="}
    rows: list[tuple[str, dict[str, float], str, float]]
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)
    binaries: set[str] = field(default_factory=set)
    generals: set[str] = field(default_factory=set)

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for name in self.objective:
            seen.setdefault(name)
        for _, terms, _, _ in self.rows:
            for name in terms:
                seen.setdefault(name)
        for name in self.bounds:
            seen.setdefault(name)
        for name in self.binaries | self.generals:
            seen.setdefault(name)
        return list(seen)


_SECTION_OF = {
    "minimize": "minimize", "min": "minimize",
    "maximize": "maximize", "max": "maximize",
    "st": "subject to", "s.t.": "subject to",
    "bounds": "bounds", "bound": "bounds",
    "binary": "binary", "binaries": "binary", "bin": "binary",
    "general": "general", "generals": "general", "gen": "general",
    "end": "end",
}
_TOKEN = re.compile(
    r"(<=|>=|=<|=>|=|\+|\-|:|[A-Za-z][A-Za-z0-9_.]*|[0-9.][0-9.eE+\-]*)"
)


def _tokenize(text: str) -> list[str]:
    tokens = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0]  # \ starts a comment in LP format
        for m in _TOKEN.finditer(line):
            tokens.append(m.group(0))
    return tokens


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


class LpParseError(ValueError):
    pass


def parse_lp(text: str) -> LpProblem:
    tokens = _tokenize(text)
    pos = 0
    n = len(tokens)

    def section_at(i: int) -> str | None:
        # section keywords only count when not used as a row/variable label
        if i + 1 < n and tokens[i + 1] == ":":
            return None
        if i + 1 < n and f"{tokens[i]} {tokens[i + 1]}".lower() in ("subject to", "such that"):
            return "subject to"
        return _SECTION_OF.get(tokens[i].lower())

    def parse_expr(i: int) -> tuple[dict[str, float], int]:
        terms: dict[str, float] = {}
        sign = 1.0
        coeff: float | None = None
        while i < n:
            tok = tokens[i]
            if tok in ("<=", ">=", "=<", "=>", "=") or section_at(i):
                break
            if tok == "+":
                i += 1
            elif tok == "-":
                sign = -sign
                i += 1
            elif _is_number(tok):
                coeff = float(tok) if coeff is None else coeff * float(tok)
                i += 1
            else:
                # a name; check it isn't a label ("name :" handled by caller)
                value = sign * (1.0 if coeff is None else coeff)
                terms[tok] = terms.get(tok, 0.0) + value
                sign, coeff = 1.0, None
                i += 1
        return terms, i

    problem = LpProblem(minimize=True, objective={}, rows=[])
    section = None
    while pos < n:
        sec = section_at(pos)
        if sec:
            section = sec
            pos += 2 if sec == "subject to" and tokens[pos].lower() not in ("st", "s.t.") else 1
            if section == "end":
                break
            continue
        if section in ("minimize", "maximize"):
            # optional "obj :" label
            if pos + 1 < n and tokens[pos + 1] == ":":
                pos += 2
            terms, pos = parse_expr(pos)
            problem.objective = terms
            problem.minimize = section == "minimize"
        elif section == "subject to":
            name = ""
            if pos + 1 < n and tokens[pos + 1] == ":":
                name, pos = tokens[pos], pos + 2
            terms, pos = parse_expr(pos)
            if pos >= n:
                raise LpParseError("constraint missing comparison operator")
            sense = {"=<": "<=", "=>": ">="}.get(tokens[pos], tokens[pos])
            pos += 1
            if pos >= n or not _is_number(tokens[pos]) and tokens[pos] != "-":
                raise LpParseError(f"constraint {name!r} missing right-hand side")
            rhs_sign = 1.0
            if tokens[pos] == "-":
                rhs_sign, pos = -1.0, pos + 1
            rhs = rhs_sign * float(tokens[pos])
            pos += 1
            problem.rows.append((name, terms, sense, rhs))
        elif section == "bounds":
            # forms: "l <= x <= u", "x <= u", "x >= l", "x = v", "x free"
            pos = _parse_bound(problem, tokens, pos)
        elif section == "binary":
            problem.binaries.add(tokens[pos])
            pos += 1
        elif section == "general":
            problem.generals.add(tokens[pos])
            pos += 1
        else:
            raise LpParseError(f"unexpected token {tokens[pos]!r} before any section")
    return problem


def _parse_bound(problem: LpProblem, tokens: list[str], pos: int) -> int:
    def number_at(i: int) -> tuple[float, int]:
        sign = 1.0
        if tokens[i] == "-":
            sign, i = -1.0, i + 1
        tok = tokens[i].lower()
        if tok in ("inf", "infinity", "+inf", "+infinity"):
            return sign * np.inf, i + 1
        return sign * float(tokens[i]), i + 1

    def current(name: str) -> tuple[float, float]:
        return problem.bounds.get(name, (0.0, np.inf))

    if _is_number(tokens[pos]) or tokens[pos] in ("-",) or tokens[pos].lower().startswith("inf"):
        lo, pos = number_at(pos)
        if tokens[pos] not in ("<=", "=<"):
            raise LpParseError("malformed bound line")
        pos += 1
        name = tokens[pos]
        pos += 1
        lo_cur, hi_cur = current(name)
        hi = hi_cur
        if pos < len(tokens) and tokens[pos] in ("<=", "=<"):
            hi, pos = number_at(pos + 1)
        problem.bounds[name] = (lo, hi)
        return pos
    name = tokens[pos]
    pos += 1
    if pos < len(tokens) and tokens[pos].lower() == "free":
        problem.bounds[name] = (-np.inf, np.inf)
        return pos + 1
    if pos >= len(tokens) or tokens[pos] not in ("<=", ">=", "=", "=<", "=>"):
        raise LpParseError(f"malformed bound for {name!r}")
    op = {"=<": "<=", "=>": ">="}.get(tokens[pos], tokens[pos])
    value, pos = number_at(pos + 1)
    lo, hi = current(name)
    if op == "<=":
        problem.bounds[name] = (lo, value)
    elif op == ">=":
        problem.bounds[name] = (value, hi)
    else:
        problem.bounds[name] = (value, value)
    return pos


def solve_lp_problem(problem: LpProblem):
    """Returns (status, objective, values) with status in optimal/infeasible."""
    names = problem.variables()
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    c = np.zeros(n)
    for name, coeff in problem.objective.items():
        c[index[name]] += coeff
    if not problem.minimize:
        c = -c
    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    for name in problem.binaries:
        upper[index[name]] = 1.0
    for name, (lo, hi) in problem.bounds.items():
        lower[index[name]], upper[index[name]] = lo, hi
    integrality = np.zeros(n)
    for name in problem.binaries | problem.generals:
        integrality[index[name]] = 1

    data, cols, indptr, lo_rhs, hi_rhs = [], [], [0], [], []
    for _, terms, sense, rhs in problem.rows:
        for name, coeff in terms.items():
            cols.append(index[name])
            data.append(coeff)
        indptr.append(len(cols))
        lo_rhs.append(rhs if sense in (">=", "=") else -np.inf)
        hi_rhs.append(rhs if sense in ("<=", "=") else np.inf)
    constraints = []
    if problem.rows:
        matrix = csr_matrix((data, cols, indptr), shape=(len(problem.rows), n))
        constraints = [NumConstraint(matrix, lo_rhs, hi_rhs)]

    res = milp(
        c,
        constraints=constraints,
        integrality=integrality,
        bounds=Bounds(lower, upper),
    )
    if res.status == 2:
        return "infeasible", None, None
    if res.status != 0:
        raise RuntimeError(f"HiGHS failed: {res.message}")
    objective = float(res.fun if problem.minimize else -res.fun)
    values = {name: float(res.x[index[name]]) for name in names}
    return "optimal", objective, values


def main(argv: list[str]) -> int:
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    lp_path, sol_path = argv[1], argv[2]
    with open(lp_path) as fh:
        problem = parse_lp(fh.read())
    status, objective, values = solve_lp_problem(problem)
    with open(sol_path, "w") as out:
        if status == "infeasible":
            out.write("=infeasible=\n")
            print("model is infeasible")
            return 0
        out.write(f"# solved by lp_solver.py (HiGHS)\n=obj= {objective!r}\n")
        for name, value in values.items():
            out.write(f"{name} {value!r}\n")
    print(f"optimal, objective {objective}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

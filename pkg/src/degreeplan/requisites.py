"""Requisite normalization and semantic satisfaction checks.

The catalog stores requisites as DNF (any one conjunction of passed
courses suffices).  Each CNF clause, in contrast, maps to a single linear
constraint row, so the model builder wants CNF.  This module also answers
"may the student register for course X in term s given this history?"
without any reference to the optimization model, which makes it usable as
an independent oracle for plan validation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import Catalog, RequisiteExpr
from .terms import k_of


@dataclass(frozen=True)
class CnfRequisite:
    """AND of ORs: every clause needs at least one satisfied member."""

    clauses: tuple[frozenset[str], ...]

    @property
    def is_empty(self) -> bool:
        return not self.clauses

    def satisfied(self, completed: set[str]) -> bool:
        return all(clause & completed for clause in self.clauses)


def dnf_to_cnf(expr: RequisiteExpr) -> CnfRequisite:
    """Distribute OR-of-ANDs into AND-of-ORs, with absorption.

    Cartesian distribution: pick one literal from every conjunction to form
    each clause.  Duplicate clauses and clauses that are supersets of another
    clause are dropped; neither changes satisfiability.
    """
    if expr.is_empty:
        return CnfRequisite(())
    clauses: list[frozenset[str]] = [frozenset()]
    for conj in expr.disjuncts:
        if not conj:
            raise ValueError("requisite DNF contains an empty conjunction")
        clauses = [clause | {lit} for clause in clauses for lit in conj]
        clauses = _absorb(clauses)
    return CnfRequisite(tuple(clauses))


def _absorb(clauses: list[frozenset[str]]) -> list[frozenset[str]]:
    kept: list[frozenset[str]] = []
    for clause in sorted(set(clauses), key=lambda c: (len(c), sorted(c))):
        if not any(other <= clause for other in kept):
            kept.append(clause)
    return kept


def clause_satisfied_by(
    clause: frozenset[str], s: int, history: dict[str, int], concurrent: set[str] = frozenset()
) -> bool:
    """True if some clause member completed by term s - k(s), or concurrent."""
    cutoff = s - k_of(s)
    for code in clause:
        if code in history and history[code] <= cutoff:
            return True
        if code in concurrent:
            return True
    return False


def may_register(
    course_code: str,
    s: int,
    catalog: Catalog,
    history: dict[str, int],
    concurrent: set[str] | None = None,
) -> bool:
    """Semantic requisite check, independent of the MILP encoding.

    ``history`` maps completed course code -> completion term (0 = transfer).
    ``concurrent`` holds courses scheduled in the same term s; they satisfy
    co-requisite clauses but never prerequisite clauses.
    """
    course = catalog.course(course_code)
    concurrent = concurrent or set()
    cutoff = s - k_of(s)
    for clause in dnf_to_cnf(course.prereq).clauses:
        if not any(code in history and history[code] <= cutoff for code in clause):
            return False
    for clause in dnf_to_cnf(course.coreq).clauses:
        if not clause_satisfied_by(clause, s, history, concurrent):
            return False
    return True

"""Quantitative association rules over historical grade records.

Rules have the shape ``grade(a1) >= v1 [and ...] -> grade(c) >= v``
with one to three antecedent atoms, mined exhaustively over a fixed
grade grid (grades live on the letter-grade lattice, so a finite grid is
exact).  A row satisfies an atom only if the student actually took the
course; missing grades never count.

support    = |rows satisfying antecedents and consequent| / n_students
confidence = same count / |rows satisfying antecedents|

Prediction for a transcript takes, per course, the highest consequent
threshold among rules whose antecedents all fire; courses with no firing
rule get no estimate at all.

`GradeRulePredictor` wraps mining + prediction in an sklearn-style
fit/predict surface so it composes with the usual tooling.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .builder import GRADE_THRESHOLD_DEFAULT, GradeEstimates

DEFAULT_MIN_SUPPORT = 0.005
DEFAULT_MIN_CONFIDENCE = 0.90
DEFAULT_GRADE_GRID = (2.0, 2.3, 2.7, 3.0, 3.3, 3.7, 4.0)

RECORD_COLUMNS = ["student_id", "code", "grade"]


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    course: str
    threshold: float

    def __str__(self) -> str:
        return f"{self.course}>={self.threshold:g}"

    @classmethod
    def parse(cls, text: str) -> "Atom":
        if ">=" not in text:
            raise RuleError(f"malformed atom {text!r}")
        course, value = text.split(">=", 1)
        return cls(course.strip(), float(value))


@dataclass(frozen=True)
class QRule:
    antecedents: tuple[Atom, ...]
    consequent: Atom
    support: float
    confidence: float

    def __post_init__(self) -> None:
        if not 1 <= len(self.antecedents) <= 3:
            raise RuleError("rules carry between 1 and 3 antecedent atoms")
        if any(a.course == self.consequent.course for a in self.antecedents):
            raise RuleError("consequent course may not appear among antecedents")

    def fires(self, grades: dict[str, float]) -> bool:
        return all(
            a.course in grades and grades[a.course] >= a.threshold for a in self.antecedents
        )


@dataclass
class RuleSet:
    rules: list[QRule] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


@dataclass
class GradeDataset:
    """Sparse student -> {course -> grade} records; missing is not zero."""

    rows: list[dict[str, float]]

    @property
    def n_students(self) -> int:
        return len(self.rows)

    def courses(self) -> list[str]:
        seen: dict[str, None] = {}
        for row in self.rows:
            for code in row:
                seen.setdefault(code)
        return list(seen)

    @classmethod
    def from_records_csv(cls, text: str) -> "GradeDataset":
        rdr = csv.DictReader(io.StringIO(text))
        if rdr.fieldnames is None or [f.strip() for f in rdr.fieldnames] != RECORD_COLUMNS:
            raise RuleError(f"records header must be {','.join(RECORD_COLUMNS)}")
        by_student: dict[str, dict[str, float]] = {}
        for row in rdr:
            grade = float(row["grade"])
            if not 0.0 <= grade <= 4.0:
                raise RuleError(f"grade out of range for {row['code']}: {grade}")
            by_student.setdefault(row["student_id"].strip(), {})[row["code"].strip()] = grade
        return cls(rows=list(by_student.values()))


def support_confidence(rule: QRule, dataset: GradeDataset) -> tuple[float, float]:
    """Recount a rule's support/confidence directly on the dataset."""
    if dataset.n_students == 0:
        raise RuleError("empty dataset")
    ant = 0
    both = 0
    for row in dataset.rows:
        if rule.fires(row):
            ant += 1
            c = rule.consequent
            if c.course in row and row[c.course] >= c.threshold:
                both += 1
    if ant == 0:
        raise RuleError("no row satisfies the antecedents; rule is undefined")
    return both / dataset.n_students, both / ant


def _popcount(x: int) -> int:
    return bin(x).count("1")


def mine_rules(
    dataset: GradeDataset,
    min_support: float = DEFAULT_MIN_SUPPORT,
    min_confidence: float = DEFAULT_MIN_CONFIDENCE,
    grade_grid: Sequence[float] = DEFAULT_GRADE_GRID,
    max_antecedents: int = 3,
    prune: bool = True,
) -> RuleSet:
    """Exhaustive exact mining over the grade grid, with dominance pruning.

    Row sets are tracked as bitmasks over students; an atom's mask marks
    the students who took the course with a grade at or above the
    threshold.
    """
    n = dataset.n_students
    if n == 0:
        return RuleSet()
    grid = sorted(set(grade_grid))
    courses = sorted(dataset.courses())

    # atom masks: course -> threshold -> bitmask of satisfying students
    atom_mask: dict[str, dict[float, int]] = {}
    for course in courses:
        per_value = {}
        for v in grid:
            mask = 0
            for i, row in enumerate(dataset.rows):
                if course in row and row[course] >= v:
                    mask |= 1 << i
            per_value[v] = mask
        atom_mask[course] = per_value

    found: list[QRule] = []

    for size in range(1, max_antecedents + 1):
        for combo in itertools.combinations(courses, size):
            for values in itertools.product(grid, repeat=size):
                ant_mask = ~(-1 << n)
                for course, v in zip(combo, values):
                    ant_mask &= atom_mask[course][v]
                ant_count = _popcount(ant_mask)
                if ant_count == 0:
                    continue
                antecedents = tuple(Atom(c, v) for c, v in zip(combo, values))
                for cons_course in courses:
                    if cons_course in combo:
                        continue
                    for v in grid:
                        both = _popcount(ant_mask & atom_mask[cons_course][v])
                        support = both / n
                        confidence = both / ant_count
                        if support >= min_support and confidence >= min_confidence:
                            found.append(QRule(
                                antecedents=antecedents,
                                consequent=Atom(cons_course, v),
                                support=support,
                                confidence=confidence,
                            ))
    return RuleSet(prune_dominated(found) if prune else found)


def prune_dominated(rules: Iterable[QRule]) -> list[QRule]:
    """Drop rules implied by a stronger rule with identical antecedents.

    With the same antecedent atoms and consequent course, a rule with a
    lower consequent threshold and no higher confidence never changes a
    prediction (estimates are maxima over firing rules).
    """
    by_key: dict[tuple, list[QRule]] = {}
    for rule in rules:
        key = (frozenset(rule.antecedents), rule.consequent.course)
        by_key.setdefault(key, []).append(rule)
    kept: list[QRule] = []
    for bucket in by_key.values():
        for rule in bucket:
            dominated = any(
                other is not rule
                and other.consequent.threshold >= rule.consequent.threshold
                and other.confidence >= rule.confidence
                and (other.consequent.threshold, other.confidence)
                != (rule.consequent.threshold, rule.confidence)
                for other in bucket
            )
            if not dominated:
                # among exact ties keep the highest threshold once
                tie = [
                    r for r in bucket
                    if (r.consequent.threshold, r.confidence)
                    == (rule.consequent.threshold, rule.confidence)
                ]
                if tie[0] is rule:
                    kept.append(rule)
    return kept


def predict(
    ruleset: RuleSet,
    grades: dict[str, float],
    passed: Optional[set[str]] = None,
    threshold: float = GRADE_THRESHOLD_DEFAULT,
    credits_remaining: Optional[int] = None,
) -> GradeEstimates:
    """Per-course grade estimates for a student's grade history."""
    passed = passed if passed is not None else set(grades)
    estimates: dict[str, float] = {}
    for rule in ruleset:
        course = rule.consequent.course
        if course in passed:
            continue
        if rule.fires(grades):
            v = rule.consequent.threshold
            if course not in estimates or v > estimates[course]:
                estimates[course] = v
    return GradeEstimates(
        values=estimates, threshold=threshold, credits_remaining=credits_remaining
    )


# --- rules.csv serialization ------------------------------------------------

def write_rules_csv(ruleset: RuleSet) -> str:
    lines = ["antecedents;consequent;support;confidence"]
    for rule in sorted(
        ruleset, key=lambda r: (len(r.antecedents), [str(a) for a in r.antecedents], str(r.consequent))
    ):
        ants = ",".join(str(a) for a in rule.antecedents)
        lines.append(f"{ants};{rule.consequent};{rule.support!r};{rule.confidence!r}")
    return "\n".join(lines) + "\n"


def read_rules_csv(text: str) -> RuleSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "antecedents;consequent;support;confidence":
        raise RuleError("bad rules file header")
    rules = []
    for line in lines[1:]:
        parts = line.split(";")
        if len(parts) != 4:
            raise RuleError(f"bad rules line {line!r}")
        rules.append(QRule(
            antecedents=tuple(Atom.parse(a) for a in parts[0].split(",")),
            consequent=Atom.parse(parts[1]),
            support=float(parts[2]),
            confidence=float(parts[3]),
        ))
    return RuleSet(rules)


class GradeRulePredictor:
    """sklearn-style estimator facade over mining and prediction.

    fit(dataset) mines the ruleset; predict(grades) returns estimates.
    """

    def __init__(
        self,
        min_support: float = DEFAULT_MIN_SUPPORT,
        min_confidence: float = DEFAULT_MIN_CONFIDENCE,
        grade_grid: Sequence[float] = DEFAULT_GRADE_GRID,
        threshold: float = GRADE_THRESHOLD_DEFAULT,
    ):
        self.min_support = min_support
        self.min_confidence = min_confidence
        self.grade_grid = tuple(grade_grid)
        self.threshold = threshold

    def get_params(self, deep: bool = True) -> dict:
        return {
            "min_support": self.min_support,
            "min_confidence": self.min_confidence,
            "grade_grid": self.grade_grid,
            "threshold": self.threshold,
        }

    def set_params(self, **params) -> "GradeRulePredictor":
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def fit(self, dataset: GradeDataset) -> "GradeRulePredictor":
        self.ruleset_ = mine_rules(
            dataset, self.min_support, self.min_confidence, self.grade_grid
        )
        return self

    def predict(self, grades: dict[str, float], **kwargs) -> GradeEstimates:
        if not hasattr(self, "ruleset_"):
            raise RuleError("predictor is not fitted")
        return predict(self.ruleset_, grades, threshold=self.threshold, **kwargs)

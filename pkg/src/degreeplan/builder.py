"""Translate a catalog + transcript + preferences into a MILP.

Every constraint row carries a tag whose first component names its
family:

  prereq / coreq      requisite clauses, one row per CNF clause and term
  level5gate          Level-5 registration gate (4 Level-4 courses first)
  level6gate          Level-6 gate over Level-5 courses
  level6base          Level-6 gate requiring all Level-4 courses
  offered             availability windows (realized as variable bounds)
  total_credits       degree credit floor
  link                x_i = sum_s x_{i,s}
  libed_credits       liberal-education credit floor
  credit_cap          per-term credit limit
  group               course-group counting rules
  desired / pin /     user selections and placements
  window
  summers             no-summer preference (bounds)
  softorder           advisory ordering between course pairs
  course_cap          per-term course-count limit
  thesis              big-M cap on courses sharing the thesis term
  completion          completion-time variable D
  balance_fwd/_bwd    difficulty-gap variable D_L, both directions
  grade_mass          expected-grade mass variable G_e
  grade_budget        credit budget over grade-predicted courses

Families realized as variable bounds rather than rows (offered, summers
and the rejection fixings) still honor the ``disable`` switch used by
the mutation-coverage tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .catalog import Catalog, CourseFlag, GroupKind, GroupMode, Transcript
from .milp import MilpModel, Sense, VarKind, Variable
from .requisites import dnf_to_cnf
from .terms import k_of

GRADE_THRESHOLD_DEFAULT = 2.5

CONCENTRATION_PREFIX = "conc"


class Priority(Enum):
    EXPECTED_GPA = "gpa"
    FASTEST_COMPLETION = "time"


# objective weights (b_G, b_D, b_DL); the problem is always minimized
OBJECTIVE_WEIGHTS = {
    Priority.EXPECTED_GPA: (-1000.0, 100.0, 1.0),
    Priority.FASTEST_COMPLETION: (-100.0, 1000.0, 1.0),
}


class PreferenceError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


class InfeasibleByConstruction(ValueError):
    """A user request that can be rejected before ever calling a solver."""

    def __init__(self, message: str, tags: list[str]):
        super().__init__(message)
        self.tags = tags


@dataclass
class Preferences:
    objective_priority: Priority = Priority.EXPECTED_GPA
    honors: bool = False
    summers_off: bool = False
    max_courses_per_term: Optional[int] = None  # cap on courses per term
    thesis_companion_max: Optional[int] = None  # max courses in the thesis term
    desired: set[str] = field(default_factory=set)
    rejected: set[str] = field(default_factory=set)
    pins: dict[str, int] = field(default_factory=dict)  # course -> term
    windows: dict[str, frozenset[int]] = field(default_factory=dict)  # course -> allowed terms
    concentration: Optional[str] = None

    def validate(self) -> None:
        overlap = self.desired & self.rejected
        if overlap:
            raise InfeasibleByConstruction(
                f"courses both desired and rejected: {sorted(overlap)}",
                [f"desired:{c}" for c in sorted(overlap)],
            )
        pinned_rejected = set(self.pins) & self.rejected
        if pinned_rejected:
            raise InfeasibleByConstruction(
                f"courses both pinned and rejected: {sorted(pinned_rejected)}",
                [f"pin:{c}" for c in sorted(pinned_rejected)],
            )
        if self.max_courses_per_term is not None and self.max_courses_per_term < 1:
            raise PreferenceError("max courses per term must be >= 1")
        if self.thesis_companion_max is not None and self.thesis_companion_max < 1:
            raise PreferenceError("thesis-term course cap must be >= 1")


@dataclass
class GradeEstimates:
    """Predicted grades for not-yet-taken courses, on the 0-4 scale."""

    values: dict[str, float] = field(default_factory=dict)
    threshold: float = GRADE_THRESHOLD_DEFAULT
    credits_remaining: Optional[int] = None  # default: T_c minus earned credits

    def eligible(self, passed: set[str]) -> list[str]:
        return [c for c, g in self.values.items() if g > self.threshold and c not in passed]


@dataclass
class VarMap:
    taken: dict[str, Variable]  # course -> x_i
    scheduled: dict[tuple[str, int], Variable]  # (course, s) -> x_{i,s}
    completion: Variable  # D
    difficulty_gap: Variable  # D_L
    grade_mass: Variable  # G_e
    eligible: list[str]  # courses entering the grade objective


def build_model(
    catalog: Catalog,
    transcript: Transcript,
    prefs: Preferences,
    estimates: Optional[GradeEstimates] = None,
    disable: frozenset[str] = frozenset(),
) -> tuple[MilpModel, VarMap]:
    prefs.validate()
    estimates = estimates or GradeEstimates()
    model = MilpModel()

    codes = list(catalog.courses)
    s_max = catalog.s_max
    s_now = transcript.current_term
    passed = transcript.passed_codes()
    rejected = {catalog.resolve(c) for c in prefs.rejected}
    desired = {catalog.resolve(c) for c in prefs.desired}
    pins = {catalog.resolve(c): t for c, t in prefs.pins.items()}
    windows = {catalog.resolve(c): ts for c, ts in prefs.windows.items()}
    cap = catalog.max_credits_per_term_honors if prefs.honors else catalog.max_credits_per_term

    on = lambda family: family not in disable

    # --- variables ---
    taken: dict[str, Variable] = {}
    scheduled: dict[tuple[str, int], Variable] = {}
    already_passed = (rejected | set(pins) | set(windows)) & passed
    if already_passed:
        raise InfeasibleByConstruction(
            f"cannot edit already-passed courses: {sorted(already_passed)}",
            [f"pin:{c}" for c in sorted(already_passed)],
        )

    for code in codes:
        course = catalog.courses[code]
        honors_blocked = CourseFlag.HONORS in course.flags and not prefs.honors
        x_fixed_zero = code not in passed and (
            (code in rejected and on("reject")) or honors_blocked
        )
        taken[code] = model.add_variable(
            f"x_{code}", VarKind.BINARY, upper=0.0 if x_fixed_zero else 1.0,
            lower=1.0 if code in passed else 0.0,
        )
        for s in range(0, s_max + 1):
            lo, hi = 0.0, 1.0
            if s == 0:
                lo = hi = 1.0 if code in passed else 0.0
            elif code in passed:
                hi = 0.0
            elif s < s_now:
                hi = 0.0  # past terms are gone
            elif x_fixed_zero:
                hi = 0.0
            elif s not in course.offered and on("offered"):
                hi = 0.0
            elif prefs.summers_off and s % 5 not in (1, 2) and on("summers"):
                hi = 0.0
            elif code in windows and s not in windows[code] and on("pin"):
                hi = 0.0
            scheduled[(code, s)] = model.add_variable(
                f"xt_{code}_{s}", VarKind.BINARY, lower=lo, upper=hi
            )

    total_difficulty = sum(c.difficulty for c in catalog.courses.values())
    eligible = [
        c for c in estimates.eligible(passed)
        if catalog.resolve(c) not in rejected
    ]
    eligible = [catalog.resolve(c) for c in eligible]
    grade_cap = sum(estimates.values[c] for c in eligible)

    d_var = model.add_variable("D", VarKind.CONTINUOUS, 0.0, float(s_max))
    dl_var = model.add_variable("D_L", VarKind.CONTINUOUS, 0.0, total_difficulty)
    ge_var = model.add_variable("G_e", VarKind.CONTINUOUS, 0.0, grade_cap)

    # --- link x_i to its per-term variables ---
    if on("link"):
        for code in codes:
            terms = [(1.0, scheduled[(code, s)]) for s in range(0, s_max + 1)]
            terms.append((-1.0, taken[code]))
            model.add_constraint(terms, Sense.EQ, 0.0, f"link:{code}")

    # --- requisite clauses ---
    for code in codes:
        course = catalog.courses[code]
        if on("prereq"):
            for q, clause in enumerate(dnf_to_cnf(course.prereq).clauses):
                members = sorted(clause)
                for s in range(1, s_max + 1):
                    terms = [(1.0, scheduled[(code, s)])]
                    for m in members:
                        for t in range(0, s - k_of(s) + 1):
                            terms.append((-1.0, scheduled[(m, t)]))
                    model.add_constraint(terms, Sense.LE, 0.0, f"prereq:{code}:c{q}:s{s}")
        if on("coreq"):
            for q, clause in enumerate(dnf_to_cnf(course.coreq).clauses):
                members = sorted(clause)
                for s in range(1, s_max + 1):
                    terms = [(1.0, scheduled[(code, s)])]
                    for m in members:
                        for t in range(0, s - k_of(s) + 1):
                            terms.append((-1.0, scheduled[(m, t)]))
                        terms.append((-1.0, scheduled[(m, s)]))
                    model.add_constraint(terms, Sense.LE, 0.0, f"coreq:{code}:c{q}:s{s}")

    # --- level gates ---
    level4 = catalog.by_flag(CourseFlag.LEVEL4)
    level5 = catalog.by_flag(CourseFlag.LEVEL5)
    level6 = catalog.by_flag(CourseFlag.LEVEL6)

    def gate_rows(targets: list[str], pool: list[str], coeff: float, family: str) -> None:
        for code in targets:
            for s in range(1, s_max + 1):
                terms = [(1.0, scheduled[(code, s)])]
                for j in pool:
                    for t in range(0, s - k_of(s) + 1):
                        terms.append((-coeff, scheduled[(j, t)]))
                model.add_constraint(terms, Sense.LE, 0.0, f"{family}:{code}:s{s}")

    if level4 and level5 and on("level5gate"):
        gate_rows(level5, level4, 0.25, "level5gate")
    if level5 and level6 and on("level6gate"):
        gate_rows(level6, level5, 0.25, "level6gate")
    if level4 and level6 and on("level6base"):
        gate_rows(level6, level4, 1.0 / len(level4), "level6base")

    # --- credit totals ---
    if on("total_credits"):
        model.add_constraint(
            [(float(catalog.courses[c].credits), taken[c]) for c in codes],
            Sense.GE, float(catalog.total_credits), "total_credits",
        )
    libed = catalog.by_flag(CourseFlag.LIBERAL_EDUCATION)
    if libed and on("libed"):
        model.add_constraint(
            [(float(catalog.courses[c].credits), taken[c]) for c in libed],
            Sense.GE, float(catalog.libed_credits), "libed_credits",
        )

    # --- per-term credit cap ---
    if on("credit_cap"):
        for s in range(1, s_max + 1):
            model.add_constraint(
                [(float(catalog.courses[c].credits), scheduled[(c, s)]) for c in codes],
                Sense.LE, float(cap), f"credit_cap:s{s}",
            )

    # --- group counts ---
    if on("group"):
        for group in catalog.regular_groups():
            is_concentration = group.name.startswith(CONCENTRATION_PREFIX)
            if is_concentration and group.name != prefs.concentration:
                continue
            if group.per_term:
                for s in range(1, s_max + 1):
                    model.add_constraint(
                        [(1.0, scheduled[(c, s)]) for c in group.members],
                        Sense.LE, float(group.count), f"group:{group.name}:s{s}",
                    )
            else:
                sense = Sense.GE if group.mode is GroupMode.AT_LEAST else Sense.EQ
                model.add_constraint(
                    [(1.0, taken[c]) for c in group.members],
                    sense, float(group.count), f"group:{group.name}",
                )

    # --- user selections and pins ---
    if on("desired"):
        for code in sorted(desired):
            model.add_constraint([(1.0, taken[code])], Sense.EQ, 1.0, f"desired:{code}")
    if on("pin"):
        for code in sorted(pins):
            t = pins[code]
            tag = f"pin:{code}:s{t}"
            if code in passed:
                raise InfeasibleByConstruction(f"course {code} already passed", [tag])
            if t < s_now or t > s_max:
                raise InfeasibleByConstruction(
                    f"pin for {code} at term {t} is outside the remaining horizon", [tag]
                )
            if t not in catalog.courses[code].offered:
                raise InfeasibleByConstruction(
                    f"course {code} is not offered in term {t}", [tag, f"offered:{code}:s{t}"]
                )
            model.add_constraint([(1.0, scheduled[(code, t)])], Sense.EQ, 1.0, tag)
        for code in sorted(windows):
            model.add_constraint([(1.0, taken[code])], Sense.EQ, 1.0, f"window:{code}")

    # --- soft-order precedence ---
    if on("softorder"):
        for first, second in catalog.soft_orders():
            for s in range(1, s_max + 1):
                terms = [(1.0, scheduled[(second, s)]), (1.0, taken[first])]
                for t in range(0, s - k_of(s) + 1):
                    terms.append((-1.0, scheduled[(first, t)]))
                model.add_constraint(
                    terms, Sense.LE, 1.0, f"softorder:{first}:{second}:s{s}"
                )

    # --- max courses per term ---
    if prefs.max_courses_per_term is not None and on("course_cap"):
        for s in range(1, s_max + 1):
            model.add_constraint(
                [(1.0, scheduled[(c, s)]) for c in codes],
                Sense.LE, float(prefs.max_courses_per_term), f"course_cap:s{s}",
            )

    # --- thesis-term companion cap ---
    if prefs.thesis_companion_max is not None:
        thesis = catalog.by_flag(CourseFlag.THESIS)
        if not thesis:
            raise ConfigurationError(
                "thesis-term course cap set but the catalog has no thesis course"
            )
        if on("thesis"):
            big_m = float(cap)  # every course is worth >= 1 credit
            for theta in thesis:
                for s in range(1, s_max + 1):
                    terms = [(1.0, scheduled[(c, s)]) for c in codes if c != theta]
                    terms.append(
                        (big_m - (prefs.thesis_companion_max - 1), scheduled[(theta, s)])
                    )
                    model.add_constraint(
                        terms, Sense.LE, big_m, f"thesis:{theta}:s{s}"
                    )

    # --- completion time ---
    if on("completion"):
        for code in codes:
            terms = [(float(s), scheduled[(code, s)]) for s in range(1, s_max + 1)]
            terms.append((-1.0, d_var))
            model.add_constraint(terms, Sense.LE, 0.0, f"completion:{code}")

    # --- difficulty balance ---
    weighted = [(c, catalog.courses[c].difficulty) for c in codes if catalog.courses[c].difficulty]
    for s in range(1, s_max + 1):
        for s2 in range(s + 1, s_max + 1):
            if on("balance_fwd"):
                terms = [(d, scheduled[(c, s)]) for c, d in weighted]
                terms += [(-d, scheduled[(c, s2)]) for c, d in weighted]
                terms.append((-1.0, dl_var))
                model.add_constraint(terms, Sense.LE, 0.0, f"balance_fwd:s{s}:s{s2}")
            if on("balance_bwd"):
                terms = [(d, scheduled[(c, s2)]) for c, d in weighted]
                terms += [(-d, scheduled[(c, s)]) for c, d in weighted]
                terms.append((-1.0, dl_var))
                model.add_constraint(terms, Sense.LE, 0.0, f"balance_bwd:s{s2}:s{s}")

    # --- expected-grade mass ---
    if eligible:
        if on("grade_mass"):
            terms = [(1.0, ge_var)]
            terms += [(-estimates.values[c], taken[c]) for c in eligible]
            model.add_constraint(terms, Sense.LE, 0.0, "grade_mass")
        if on("grade_budget"):
            remaining = estimates.credits_remaining
            if remaining is None:
                earned = sum(catalog.courses[c].credits for c in passed)
                remaining = max(0, catalog.total_credits - earned)
            model.add_constraint(
                [(float(catalog.courses[c].credits), taken[c]) for c in eligible],
                Sense.LE, float(remaining), "grade_budget",
            )

    # --- objective ---
    b_g, b_d, b_dl = OBJECTIVE_WEIGHTS[prefs.objective_priority]
    model.set_objective([(b_g, ge_var), (b_d, d_var), (b_dl, dl_var)])

    varmap = VarMap(
        taken=taken,
        scheduled=scheduled,
        completion=d_var,
        difficulty_gap=dl_var,
        grade_mass=ge_var,
        eligible=eligible,
    )
    return model, varmap

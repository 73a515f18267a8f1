"""Decode solver output into plans, and certify plans without the MILP.

``validate`` is the repository's oracle: it re-checks every degree rule
(requisite timing, level gates, offerings, credit totals, per-term caps,
group counts, user selections, summer rules, soft orders, thesis caps)
directly from the catalog semantics, sharing no constraint-construction
code with the model builder.  Every optimal solver result must come back
violation-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .builder import CONCENTRATION_PREFIX, GradeEstimates, Preferences, VarMap
from .catalog import Catalog, CourseFlag, GroupKind, GroupMode, Transcript
from .requisites import may_register
from .solver import Solution, SolveStatus, SolverError
from .terms import k_of, term_token


@dataclass
class ScheduledCourse:
    code: str
    title: str
    credits: int
    difficulty: float
    estimated_grade: Optional[float] = None


@dataclass
class Plan:
    by_term: dict[int, list[ScheduledCourse]]  # term -> courses, term >= 1
    prior: list[ScheduledCourse] = field(default_factory=list)  # passed / transfer
    completion_term: int = 0

    def scheduled_codes(self) -> set[str]:
        return {c.code for courses in self.by_term.values() for c in courses}

    def term_of(self, code: str) -> Optional[int]:
        for s, courses in self.by_term.items():
            if any(c.code == code for c in courses):
                return s
        return None


class EditAction(Enum):
    REJECT = "reject"
    MOVE = "move"


@dataclass
class EditCommand:
    code: str
    action: EditAction
    terms: frozenset[int] = frozenset()  # for MOVE; must be nonempty

    def __post_init__(self) -> None:
        if self.action is EditAction.MOVE and not self.terms:
            raise ValueError("move edit needs at least one target term")


def decode(
    solution: Solution,
    varmap: VarMap,
    catalog: Catalog,
    estimates: Optional[GradeEstimates] = None,
) -> Plan:
    """Read the solver assignment back into a per-term course plan."""
    if solution.status is not SolveStatus.OPTIMAL:
        raise SolverError(f"cannot decode a {solution.status.value} solution")
    estimates = estimates or GradeEstimates()

    def as_course(code: str) -> ScheduledCourse:
        course = catalog.courses[code]
        return ScheduledCourse(
            code=code,
            title=course.title,
            credits=course.credits,
            difficulty=course.difficulty,
            estimated_grade=estimates.values.get(code),
        )

    by_term: dict[int, list[ScheduledCourse]] = {}
    prior: list[ScheduledCourse] = []
    for (code, s), var in varmap.scheduled.items():
        value = solution.values.get(var.name, 0.0)
        if abs(value - round(value)) > 1e-4:
            raise SolverError(f"corrupt solution: {var.name} = {value} is not integral")
        if round(value) != 1:
            continue
        if s == 0:
            prior.append(as_course(code))
        else:
            by_term.setdefault(s, []).append(as_course(code))
    completion = max(by_term, default=0)
    return Plan(by_term=dict(sorted(by_term.items())), prior=prior, completion_term=completion)


@dataclass
class Violation:
    code: str  # machine-readable kind
    course: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.course}: {self.message}"


def validate(
    plan: Plan,
    catalog: Catalog,
    transcript: Transcript,
    prefs: Preferences,
    estimates: Optional[GradeEstimates] = None,
) -> list[Violation]:
    """MILP-free re-check of all degree rules; empty list = plan certified."""
    violations: list[Violation] = []
    estimates = estimates or GradeEstimates()
    passed = transcript.passed_codes()
    s_now = transcript.current_term
    cap = catalog.max_credits_per_term_honors if prefs.honors else catalog.max_credits_per_term
    rejected = {catalog.resolve(c) for c in prefs.rejected}
    desired = {catalog.resolve(c) for c in prefs.desired}

    # completed course -> completion term; everything already passed counts
    # as term 0, matching how the model treats pre-registration history
    history: dict[str, int] = {code: 0 for code in passed}

    placement: dict[str, int] = {}
    for s, courses in plan.by_term.items():
        for sched in courses:
            code = sched.code
            if code in placement:
                violations.append(Violation("duplicate", code, "scheduled more than once"))
            elif code in passed:
                violations.append(Violation("already-passed", code, "already on the transcript"))
            placement[code] = s

    for code, s in placement.items():
        course = catalog.courses[code]
        if s < s_now:
            violations.append(Violation("past-term", code, f"scheduled in past term {s}"))
        if s not in course.offered:
            violations.append(Violation("not-offered", code, f"not offered in term {s}"))
        if s > catalog.s_max:
            violations.append(Violation("horizon", code, f"term {s} beyond horizon"))

    # requisite timing, via the semantic checker
    for code, s in placement.items():
        full_history = dict(history)
        for other, s2 in placement.items():
            if other != code and s2 < s:
                full_history[other] = s2
        concurrent = {other for other, s2 in placement.items() if other != code and s2 == s}
        if not may_register(code, s, catalog, full_history, concurrent):
            violations.append(Violation("requisite", code, f"requisites unmet in term {s}"))

    # level gates: count level courses completed by s - k(s); history counts at 0
    def completed_by(pool: set[str], cutoff: int) -> int:
        n = sum(1 for c in pool if c in passed)
        n += sum(1 for c, s2 in placement.items() if c in pool and s2 <= cutoff)
        return n

    level4 = set(catalog.by_flag(CourseFlag.LEVEL4))
    level5 = set(catalog.by_flag(CourseFlag.LEVEL5))
    for code, s in placement.items():
        flags = catalog.courses[code].flags
        cutoff = s - k_of(s)
        if CourseFlag.LEVEL5 in flags and completed_by(level4, cutoff) < 4:
            violations.append(
                Violation("level-gate", code, f"fewer than 4 Level-4 courses done before term {s}")
            )
        if CourseFlag.LEVEL6 in flags:
            if completed_by(level5, cutoff) < 4:
                violations.append(
                    Violation("level-gate", code, f"fewer than 4 Level-5 courses done before term {s}")
                )
            if level4 and completed_by(level4, cutoff) < len(level4):
                violations.append(
                    Violation("level-gate", code, f"not all Level-4 courses done before term {s}")
                )

    # credit totals
    taken = passed | set(placement)
    total = sum(catalog.courses[c].credits for c in taken)
    if total < catalog.total_credits:
        violations.append(Violation(
            "total-credits", "*", f"{total} credits < required {catalog.total_credits}"
        ))
    libed = sum(
        catalog.courses[c].credits
        for c in taken
        if CourseFlag.LIBERAL_EDUCATION in catalog.courses[c].flags
    )
    if catalog.by_flag(CourseFlag.LIBERAL_EDUCATION) and libed < catalog.libed_credits:
        violations.append(Violation(
            "libed-credits", "*", f"{libed} liberal-education credits < {catalog.libed_credits}"
        ))

    # per-term caps
    for s, courses in plan.by_term.items():
        credits = sum(c.credits for c in courses)
        if credits > cap:
            violations.append(Violation("credit-cap", "*", f"term {s}: {credits} credits > {cap}"))
        if prefs.max_courses_per_term is not None and len(courses) > prefs.max_courses_per_term:
            violations.append(Violation(
                "course-cap", "*", f"term {s}: {len(courses)} courses > {prefs.max_courses_per_term}"
            ))

    # group constraints
    for group in catalog.groups:
        if group.kind is not GroupKind.REGULAR:
            continue
        if group.name.startswith(CONCENTRATION_PREFIX) and group.name != prefs.concentration:
            continue
        if group.per_term:
            for s, courses in plan.by_term.items():
                n = sum(1 for c in courses if c.code in group.members)
                if n > group.count:
                    violations.append(Violation(
                        "group", group.name, f"term {s}: {n} members > per-term limit {group.count}"
                    ))
        else:
            n = sum(1 for c in group.members if c in taken)
            if group.mode is GroupMode.AT_LEAST and n < group.count:
                violations.append(Violation(
                    "group", group.name, f"{n} members taken < required {group.count}"
                ))
            if group.mode is GroupMode.EXACT and n != group.count:
                violations.append(Violation(
                    "group", group.name, f"{n} members taken != required {group.count}"
                ))

    # honors availability
    if not prefs.honors:
        for code in placement:
            if CourseFlag.HONORS in catalog.courses[code].flags:
                violations.append(Violation("honors-only", code, "honors students only"))

    # user selections
    for code in desired:
        if code not in taken:
            violations.append(Violation("desired-missing", code, "desired course not planned"))
    for code in rejected:
        if code in placement:
            violations.append(Violation("rejected-present", code, "rejected course planned"))
    for code, t in prefs.pins.items():
        resolved = catalog.resolve(code)
        if placement.get(resolved) != t:
            violations.append(Violation("pin", resolved, f"not scheduled in pinned term {t}"))
    for code, window in prefs.windows.items():
        resolved = catalog.resolve(code)
        if placement.get(resolved) not in window:
            violations.append(Violation(
                "window", resolved, f"not scheduled within allowed terms {sorted(window)}"
            ))

    # summer preference
    if prefs.summers_off:
        for code, s in placement.items():
            if s % 5 not in (1, 2):
                violations.append(Violation("summer", code, f"scheduled in summer term {s}"))

    # soft orders: binding only when the earlier course is taken at all
    for first, second in catalog.soft_orders():
        if second not in placement:
            continue
        if first in passed:
            continue
        if first not in placement:
            continue
        s2 = placement[second]
        if placement[first] > s2 - k_of(s2):
            violations.append(Violation(
                "soft-order", second, f"should follow {first} (term {placement[first]} vs {s2})"
            ))

    # thesis-term companion cap
    if prefs.thesis_companion_max is not None:
        thesis = set(catalog.by_flag(CourseFlag.THESIS))
        for code, s in placement.items():
            if code in thesis:
                others = sum(1 for c, s2 in placement.items() if s2 == s and c != code)
                if others > prefs.thesis_companion_max - 1:
                    violations.append(Violation(
                        "thesis-cap", code,
                        f"{others} companion courses in thesis term {s} "
                        f"> {prefs.thesis_companion_max - 1}",
                    ))

    # predicted-course credit budget
    eligible = set(estimates.eligible(passed))
    if eligible:
        remaining = estimates.credits_remaining
        if remaining is None:
            earned = sum(catalog.courses[c].credits for c in passed)
            remaining = max(0, catalog.total_credits - earned)
        spent = sum(catalog.courses[c].credits for c in placement if c in eligible)
        if spent > remaining:
            violations.append(Violation(
                "predicted-credit-cap", "*",
                f"{spent} credits of grade-predicted courses > budget {remaining}",
            ))

    return violations


def apply_edits(prefs: Preferences, edits: list[EditCommand], transcript: Transcript,
                catalog: Catalog) -> Preferences:
    """Fold plan edits into a new preference set for the next solve round."""
    passed = transcript.passed_codes()
    desired = set(prefs.desired)
    rejected = set(prefs.rejected)
    pins = dict(prefs.pins)
    windows = dict(prefs.windows)
    for edit in edits:
        code = catalog.resolve(edit.code)
        if code in passed:
            raise ValueError(f"cannot edit already-passed course {code}")
        if edit.action is EditAction.REJECT:
            rejected.add(code)
            desired.discard(code)
            pins.pop(code, None)
            windows.pop(code, None)
        else:
            rejected.discard(code)
            if len(edit.terms) == 1:
                pins[code] = next(iter(edit.terms))
                windows.pop(code, None)
            else:
                windows[code] = frozenset(edit.terms)
                pins.pop(code, None)
    return Preferences(
        objective_priority=prefs.objective_priority,
        honors=prefs.honors,
        summers_off=prefs.summers_off,
        max_courses_per_term=prefs.max_courses_per_term,
        thesis_companion_max=prefs.thesis_companion_max,
        desired=desired,
        rejected=rejected,
        pins=pins,
        windows=windows,
        concentration=prefs.concentration,
    )


@dataclass
class TermSummary:
    term: int
    token: str
    credits: int
    difficulty: float


@dataclass
class PlanSummary:
    terms: list[TermSummary]
    total_credits: int
    max_difficulty_gap: float
    expected_gpa: Optional[float]  # over grade-predicted scheduled courses


def summarize(plan: Plan, catalog: Catalog, estimates: Optional[GradeEstimates] = None,
              over_terms: Optional[range] = None) -> PlanSummary:
    estimates = estimates or GradeEstimates()
    terms = []
    for s, courses in plan.by_term.items():
        terms.append(TermSummary(
            term=s,
            token=term_token(s, catalog.anchor),
            credits=sum(c.credits for c in courses),
            difficulty=sum(c.difficulty for c in courses),
        ))
    # gap over the full horizon, matching the model's balance variable:
    # any empty term makes the gap equal the heaviest term's difficulty
    span = over_terms if over_terms is not None else range(1, catalog.s_max + 1)
    loads = {t.term: t.difficulty for t in terms}
    per_term = [loads.get(s, 0.0) for s in span]
    gap = (max(per_term) - min(per_term)) if per_term else 0.0
    graded = [
        c.estimated_grade
        for courses in plan.by_term.values()
        for c in courses
        if c.estimated_grade is not None and c.estimated_grade > estimates.threshold
    ]
    gpa = sum(graded) / len(graded) if graded else None
    return PlanSummary(
        terms=terms,
        total_credits=sum(t.credits for t in terms),
        max_difficulty_gap=gap,
        expected_gpa=gpa,
    )


def render_text(plan: Plan, catalog: Catalog, estimates: Optional[GradeEstimates] = None) -> str:
    """Human-readable plan table."""
    estimates = estimates or GradeEstimates()
    lines = []
    if plan.prior:
        lines.append("Already completed:")
        for c in sorted(plan.prior, key=lambda c: c.code):
            lines.append(f"  {c.code:<12} {c.title}")
    if not plan.by_term:
        lines.append("Nothing left to schedule.")
    for s, courses in plan.by_term.items():
        token = term_token(s, catalog.anchor)
        credits = sum(c.credits for c in courses)
        lines.append(f"{token} (term {s}, {credits} cr):")
        for c in sorted(courses, key=lambda c: c.code):
            grade = f"  est. grade {c.estimated_grade:.1f}" if c.estimated_grade else ""
            lines.append(
                f"  {c.code:<12} {c.title:<42} {c.credits} cr  difficulty {c.difficulty:g}{grade}"
            )
    summary = summarize(plan, catalog, estimates)
    lines.append(f"Total planned credits: {summary.total_credits}")
    if summary.expected_gpa is not None:
        lines.append(f"Expected GPA over predicted courses: {summary.expected_gpa:.2f}")
    return "\n".join(lines) + "\n"

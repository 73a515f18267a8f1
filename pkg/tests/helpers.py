"""Programmatic catalog construction for unit and property tests."""

from __future__ import annotations

from degreeplan.catalog import (
    Catalog,
    Course,
    CourseGroup,
    GroupMode,
    Transcript,
    TranscriptEntry,
    apply_group_flags,
    parse_requisite,
)
from degreeplan.terms import Anchor

ANCHOR = Anchor.parse("FA2022")


def course(
    code: str,
    credits: int = 3,
    difficulty: float = 0.0,
    prereq: str = "",
    coreq: str = "",
    offered=None,
    s_max: int = 10,
    synonyms=(),
) -> Course:
    if offered is None:
        offered = range(1, s_max + 1)
    return Course(
        id=0,
        code=code,
        synonyms=list(synonyms),
        title=code,
        credits=credits,
        difficulty=difficulty,
        prereq=parse_requisite(prereq),
        coreq=parse_requisite(coreq),
        offered=frozenset(offered),
    )


def group(name: str, members, count: int = 0, mode=GroupMode.AT_LEAST, per_term: bool = False):
    return CourseGroup(name=name, members=list(members), count=count, mode=mode, per_term=per_term)


def catalog(
    courses: list[Course],
    groups: list[CourseGroup] = (),
    s_max: int = 10,
    total_credits: int = 0,
    libed_credits: int = 0,
    cap: int = 9,
    cap_honors: int = 12,
) -> Catalog:
    by_code = {c.code: c for c in courses}
    groups = list(groups)
    apply_group_flags(by_code, groups)
    return Catalog(
        courses=by_code,
        groups=groups,
        anchor=ANCHOR,
        s_max=s_max,
        total_credits=total_credits,
        libed_credits=libed_credits,
        max_credits_per_term=cap,
        max_credits_per_term_honors=cap_honors,
    )


def transcript(entries=(), current_term: int = 1) -> Transcript:
    return Transcript(
        entries=[TranscriptEntry(code=c, grade=g, term=t) for c, g, t in entries],
        current_term=current_term,
    )

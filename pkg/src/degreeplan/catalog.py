"""Course catalog, course groups, calendar configuration and transcripts.

Everything here is parsed from plain CSV / key-value files and indexed
into immutable-by-convention dataclasses.  Nothing in this module knows
about the optimization model; it is the single source of truth about
what courses exist, what they require, and when they are offered.

File formats:

``courses.csv``
    columns ``id,code,synonyms,title,credits,difficulty,prereq,coreq,
    display_name,terms``.  ``synonyms`` and ``terms`` are space separated.
    Requisite cells use the grammar ``code``, ``&``, ``|`` and parentheses,
    with ``|`` binding looser than ``&``.  ``terms`` accepts explicit
    tokens (``FA2022``) and repeat directives (``EVERY:FA,SP``) that
    expand to every matching term up to S_max.

``groups.csv``
    columns ``name,mode,count,per_term,members`` (members space separated).
    Group semantics are keyed off the name: ``softorder*`` = soft ordering
    pair, ``HonorGroup*`` = honors-only courses, ``L4``/``L5``/``L6`` =
    level sets, ``LE`` = liberal-education set, anything else is a regular
    count constraint.

``transcript.csv``
    columns ``code,grade,term`` where term is a token or ``TRANSFER``.

``calendar.cfg``
    ``key = value`` lines for anchor, S_max, T_c, L_c, C_max, C_max_honors.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

from .terms import Anchor, Season, TermError, season_of, term_index

CODE_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

DEFAULT_S_MAX = 25
DEFAULT_TOTAL_CREDITS = 121
DEFAULT_LIBED_CREDITS = 43
DEFAULT_MAX_CREDITS_PER_TERM = 17
DEFAULT_MAX_CREDITS_PER_TERM_HONORS = 20


class CatalogError(ValueError):
    """Raised for malformed or inconsistent catalog input files."""


class CourseFlag(Enum):
    LIBERAL_EDUCATION = "LiberalEducation"
    LEVEL4 = "Level4"
    LEVEL5 = "Level5"
    LEVEL6 = "Level6"
    HONORS = "Honors"
    THESIS = "Thesis"


class GroupMode(Enum):
    AT_LEAST = "AtLeast"
    EXACT = "Exact"


class GroupKind(Enum):
    REGULAR = "Regular"
    SOFT_ORDER = "SoftOrder"
    HONORS = "Honors"
    LEVEL_SET = "LevelSet"
    LIBERAL_ED = "LiberalEd"


@dataclass
class RequisiteExpr:
    """Requisite logic in disjunctive normal form (OR of ANDs of codes)."""

    disjuncts: list[list[str]] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.disjuncts

    def referenced_codes(self) -> set[str]:
        return {code for conj in self.disjuncts for code in conj}


@dataclass
class Course:
    id: int
    code: str
    synonyms: list[str]
    title: str
    credits: int
    difficulty: float
    prereq: RequisiteExpr
    coreq: RequisiteExpr
    offered: frozenset[int]  # term numbers s >= 1
    flags: set[CourseFlag] = field(default_factory=set)
    display_name: str = ""


@dataclass
class CourseGroup:
    name: str
    members: list[str]  # ordered; order matters for soft-order groups
    count: int
    mode: GroupMode
    per_term: bool

    @property
    def kind(self) -> GroupKind:
        return group_kind(self.name)


def group_kind(name: str) -> GroupKind:
    if name.startswith("softorder"):
        return GroupKind.SOFT_ORDER
    if name.startswith("HonorGroup"):
        return GroupKind.HONORS
    if name in ("L4", "L5", "L6"):
        return GroupKind.LEVEL_SET
    if name == "LE":
        return GroupKind.LIBERAL_ED
    return GroupKind.REGULAR


_LEVEL_FLAG = {
    "L4": CourseFlag.LEVEL4,
    "L5": CourseFlag.LEVEL5,
    "L6": CourseFlag.LEVEL6,
}


@dataclass
class Catalog:
    courses: dict[str, Course]  # canonical code -> course
    groups: list[CourseGroup]
    anchor: Anchor
    s_max: int = DEFAULT_S_MAX
    total_credits: int = DEFAULT_TOTAL_CREDITS
    libed_credits: int = DEFAULT_LIBED_CREDITS
    max_credits_per_term: int = DEFAULT_MAX_CREDITS_PER_TERM
    max_credits_per_term_honors: int = DEFAULT_MAX_CREDITS_PER_TERM_HONORS
    _synonym_index: dict[str, str] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._synonym_index:
            for course in self.courses.values():
                self._synonym_index[course.code] = course.code
                for syn in course.synonyms:
                    self._synonym_index[syn] = course.code

    def resolve(self, code: str) -> str:
        """Canonical code for ``code`` (which may be a synonym)."""
        try:
            return self._synonym_index[code]
        except KeyError:
            raise CatalogError(f"unknown course code {code!r}") from None

    def course(self, code: str) -> Course:
        return self.courses[self.resolve(code)]

    def by_flag(self, flag: CourseFlag) -> list[str]:
        return [c.code for c in self.courses.values() if flag in c.flags]

    def soft_orders(self) -> list[tuple[str, str]]:
        pairs = []
        for g in self.groups:
            if g.kind is GroupKind.SOFT_ORDER:
                pairs.append((g.members[0], g.members[1]))
        return pairs

    def regular_groups(self) -> list[CourseGroup]:
        return [g for g in self.groups if g.kind is GroupKind.REGULAR]


@dataclass
class TranscriptEntry:
    code: str  # canonical
    grade: float
    term: int  # 0 for transfer credit


@dataclass
class Transcript:
    entries: list[TranscriptEntry] = field(default_factory=list)
    current_term: int = 1

    def passed_codes(self) -> set[str]:
        return {e.code for e in self.entries}

    def completion_terms(self) -> dict[str, int]:
        return {e.code: e.term for e in self.entries}

    def grades(self) -> dict[str, float]:
        return {e.code: e.grade for e in self.entries}


# --- requisite expression grammar -------------------------------------------

_REQ_TOKEN_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*|[&|()])")


class _ReqParser:
    """Recursive-descent parser producing DNF; `|` binds looser than `&`."""

    def __init__(self, text: str):
        self.tokens = self._lex(text)
        self.pos = 0

    @staticmethod
    def _lex(text: str) -> list[str]:
        tokens, i = [], 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _REQ_TOKEN_RE.match(text, i)
            if not m or m.start(1) != i:
                raise CatalogError(f"malformed requisite expression {text!r}")
            tokens.append(m.group(1))
            i = m.end(1)
        return tokens

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise CatalogError("unexpected end of requisite expression")
        self.pos += 1
        return tok

    def parse(self) -> RequisiteExpr:
        if not self.tokens:
            return RequisiteExpr()
        expr = self.parse_or()
        if self.peek() is not None:
            raise CatalogError(f"trailing token {self.peek()!r} in requisite expression")
        return RequisiteExpr(expr)

    def parse_or(self) -> list[list[str]]:
        disjuncts = self.parse_and()
        while self.peek() == "|":
            self.take()
            disjuncts = disjuncts + self.parse_and()
        return disjuncts

    def parse_and(self) -> list[list[str]]:
        disjuncts = self.parse_atom()
        while self.peek() == "&":
            self.take()
            rhs = self.parse_atom()
            # distribute: (A or B) and (C or D) -> AC, AD, BC, BD
            disjuncts = [a + c for a in disjuncts for c in rhs]
        return disjuncts

    def parse_atom(self) -> list[list[str]]:
        tok = self.take()
        if tok == "(":
            inner = self.parse_or()
            if self.take() != ")":
                raise CatalogError("unbalanced parenthesis in requisite expression")
            return inner
        if tok in ("&", "|", ")"):
            raise CatalogError(f"unexpected {tok!r} in requisite expression")
        return [[tok]]


def parse_requisite(text: str) -> RequisiteExpr:
    expr = _ReqParser(text).parse()
    # drop exact-duplicate conjunctions, keep first occurrence
    seen: set[frozenset[str]] = set()
    out = []
    for conj in expr.disjuncts:
        key = frozenset(conj)
        if key not in seen:
            seen.add(key)
            out.append(sorted(set(conj)))
    return RequisiteExpr(out)


# --- offerings --------------------------------------------------------------

_EVERY_RE = re.compile(r"^EVERY:([A-Z0-9,]+)$")

_SEASON_ABBREV = {
    "FA": Season.FALL,
    "SP": Season.SPRING,
    "S1": Season.SUMMER1,
    "S2": Season.SUMMER2,
    "ST": Season.SUMMER_TERM,
}


def parse_offerings(cell: str, anchor: Anchor, s_max: int) -> frozenset[int]:
    terms: set[int] = set()
    for token in cell.split():
        m = _EVERY_RE.match(token)
        if m:
            seasons = set()
            for abbrev in m.group(1).split(","):
                if abbrev not in _SEASON_ABBREV:
                    raise CatalogError(f"unknown season {abbrev!r} in directive {token!r}")
                seasons.add(_SEASON_ABBREV[abbrev])
            terms.update(s for s in range(1, s_max + 1) if season_of(s) in seasons)
        else:
            try:
                s = term_index(token, anchor)
            except TermError as exc:
                raise CatalogError(str(exc)) from exc
            if s <= s_max:
                terms.add(s)
    return frozenset(terms)


# --- CSV parsing ------------------------------------------------------------

COURSE_COLUMNS = [
    "id", "code", "synonyms", "title", "credits", "difficulty",
    "prereq", "coreq", "display_name", "terms",
]
GROUP_COLUMNS = ["name", "mode", "count", "per_term", "members"]
TRANSCRIPT_COLUMNS = ["code", "grade", "term"]


def _reader(text: str, columns: list[str], what: str) -> Iterable[dict[str, str]]:
    rdr = csv.DictReader(io.StringIO(text))
    if rdr.fieldnames is None or [f.strip() for f in rdr.fieldnames] != columns:
        raise CatalogError(
            f"{what} header must be {','.join(columns)}, got {rdr.fieldnames}"
        )
    for row in rdr:
        yield {k: (v or "").strip() for k, v in row.items()}


def parse_courses(text: str, anchor: Anchor, s_max: int = DEFAULT_S_MAX) -> dict[str, Course]:
    courses: dict[str, Course] = {}
    claimed: dict[str, str] = {}  # code or synonym -> owning canonical code
    for row in _reader(text, COURSE_COLUMNS, "courses.csv"):
        code = row["code"]
        if not CODE_RE.match(code):
            raise CatalogError(f"invalid course code {code!r}")
        synonyms = row["synonyms"].split()
        for name in [code, *synonyms]:
            if name in claimed:
                raise CatalogError(f"duplicate code/synonym {name!r} (also used by {claimed[name]})")
            claimed[name] = code
        credits = int(row["credits"])
        if credits < 1:
            raise CatalogError(f"course {code}: credits must be >= 1, got {credits}")
        difficulty = float(row["difficulty"])
        if not 0.0 <= difficulty <= 10.0:
            raise CatalogError(f"course {code}: difficulty must be in [0,10], got {difficulty}")
        courses[code] = Course(
            id=int(row["id"]),
            code=code,
            synonyms=synonyms,
            title=row["title"],
            credits=credits,
            difficulty=difficulty,
            prereq=parse_requisite(row["prereq"]),
            coreq=parse_requisite(row["coreq"]),
            offered=parse_offerings(row["terms"], anchor, s_max),
            display_name=row["display_name"],
        )
    # requisites may reference synonyms; normalize them to canonical codes
    for course in courses.values():
        for expr in (course.prereq, course.coreq):
            for conj in expr.disjuncts:
                for i, ref in enumerate(conj):
                    if ref not in claimed:
                        raise CatalogError(
                            f"course {course.code}: unknown code {ref!r} in requisite"
                        )
                    conj[i] = claimed[ref]
    return courses


def parse_groups(text: str, courses: dict[str, Course]) -> list[CourseGroup]:
    synonym_index = {c.code: c.code for c in courses.values()}
    for c in courses.values():
        for syn in c.synonyms:
            synonym_index[syn] = c.code
    groups = []
    for row in _reader(text, GROUP_COLUMNS, "groups.csv"):
        name = row["name"]
        members = []
        for ref in row["members"].split():
            if ref not in synonym_index:
                raise CatalogError(f"group {name}: unknown member {ref!r}")
            members.append(synonym_index[ref])
        try:
            mode = GroupMode(row["mode"])
        except ValueError:
            raise CatalogError(f"group {name}: bad mode {row['mode']!r}") from None
        count = int(row["count"])
        if count < 0:
            raise CatalogError(f"group {name}: count must be >= 0")
        if count > len(members):
            raise CatalogError(f"group {name}: count {count} exceeds {len(members)} members")
        per_term = {"true": True, "false": False}.get(row["per_term"].lower())
        if per_term is None:
            raise CatalogError(f"group {name}: per_term must be true/false")
        group = CourseGroup(name=name, members=members, count=count, mode=mode, per_term=per_term)
        if group.kind is GroupKind.SOFT_ORDER and len(members) != 2:
            raise CatalogError(f"soft-order group {name} must have exactly 2 members")
        groups.append(group)
    return groups


def apply_group_flags(courses: dict[str, Course], groups: list[CourseGroup]) -> None:
    """Populate level / honors / liberal-education / thesis flags from groups."""
    for group in groups:
        if group.kind is GroupKind.LEVEL_SET:
            flag = _LEVEL_FLAG[group.name]
        elif group.kind is GroupKind.HONORS:
            flag = CourseFlag.HONORS
        elif group.kind is GroupKind.LIBERAL_ED:
            flag = CourseFlag.LIBERAL_EDUCATION
        elif group.name == "Thesis":
            flag = CourseFlag.THESIS
        else:
            continue
        for code in group.members:
            courses[code].flags.add(flag)


def parse_calendar(text: str) -> dict[str, str]:
    values = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CatalogError(f"calendar.cfg: bad line {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def load_catalog(directory: str | Path) -> Catalog:
    """Load courses.csv, groups.csv and calendar.cfg from a directory."""
    directory = Path(directory)
    cfg = parse_calendar((directory / "calendar.cfg").read_text())
    anchor = Anchor.parse(cfg.get("anchor", "FA2022"))
    s_max = int(cfg.get("S_max", DEFAULT_S_MAX))
    courses = parse_courses((directory / "courses.csv").read_text(), anchor, s_max)
    groups_path = directory / "groups.csv"
    groups = parse_groups(groups_path.read_text(), courses) if groups_path.exists() else []
    apply_group_flags(courses, groups)
    catalog = Catalog(
        courses=courses,
        groups=groups,
        anchor=anchor,
        s_max=s_max,
        total_credits=int(cfg.get("T_c", DEFAULT_TOTAL_CREDITS)),
        libed_credits=int(cfg.get("L_c", DEFAULT_LIBED_CREDITS)),
        max_credits_per_term=int(cfg.get("C_max", DEFAULT_MAX_CREDITS_PER_TERM)),
        max_credits_per_term_honors=int(
            cfg.get("C_max_honors", DEFAULT_MAX_CREDITS_PER_TERM_HONORS)
        ),
    )
    for course in courses.values():
        if len(course.flags & {CourseFlag.LEVEL4, CourseFlag.LEVEL5, CourseFlag.LEVEL6}) > 1:
            raise CatalogError(f"course {course.code} is in more than one level set")
    return catalog


def parse_transcript(text: str, catalog: Catalog, current_term: Optional[int] = None) -> Transcript:
    entries = []
    seen: set[str] = set()
    for row in _reader(text, TRANSCRIPT_COLUMNS, "transcript.csv"):
        code = catalog.resolve(row["code"])
        if code in seen:
            raise CatalogError(f"transcript lists {code} more than once")
        seen.add(code)
        grade = round(float(row["grade"]), 2)
        if not 0.0 <= grade <= 4.0:
            raise CatalogError(f"transcript grade for {code} out of range: {grade}")
        term_cell = row["term"]
        term = 0 if term_cell == "TRANSFER" else term_index(term_cell, catalog.anchor)
        entries.append(TranscriptEntry(code=code, grade=grade, term=term))
    if current_term is None:
        current_term = max((e.term for e in entries), default=0) + 1
    return Transcript(entries=entries, current_term=current_term)


# --- catalog validation -----------------------------------------------------

@dataclass
class Diagnostic:
    code: str  # machine-readable kind, e.g. "requisite-cycle"
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


def _find_cycle(adjacency: dict[str, set[str]]) -> Optional[list[str]]:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in adjacency}
    stack_path: list[str] = []

    def visit(node: str) -> Optional[list[str]]:
        color[node] = GRAY
        stack_path.append(node)
        for nxt in sorted(adjacency.get(node, ())):
            if color.get(nxt, WHITE) == GRAY:
                return stack_path[stack_path.index(nxt):] + [nxt]
            if color.get(nxt, WHITE) == WHITE:
                cycle = visit(nxt)
                if cycle:
                    return cycle
        stack_path.pop()
        color[node] = BLACK
        return None

    for node in sorted(adjacency):
        if color[node] == WHITE:
            cycle = visit(node)
            if cycle:
                return cycle
    return None


def validate_catalog(catalog: Catalog) -> list[Diagnostic]:
    """Structural diagnostics; an empty list means the catalog is usable."""
    diags: list[Diagnostic] = []

    # prerequisite edge relation: i -> j whenever i appears in P_j
    prereq_edges: dict[str, set[str]] = {code: set() for code in catalog.courses}
    for course in catalog.courses.values():
        for ref in course.prereq.referenced_codes():
            prereq_edges[ref].add(course.code)
    cycle = _find_cycle(prereq_edges)
    if cycle:
        diags.append(Diagnostic("requisite-cycle", "prerequisite cycle: " + " -> ".join(cycle)))

    # co-requisites: mutual pairs are legal (shared term); contract them,
    # then the union with prerequisite edges must stay acyclic
    coreq_edges: dict[str, set[str]] = {code: set() for code in catalog.courses}
    for course in catalog.courses.values():
        for ref in course.coreq.referenced_codes():
            coreq_edges[ref].add(course.code)
    combined: dict[str, set[str]] = {code: set(prereq_edges[code]) for code in catalog.courses}
    for src, dsts in coreq_edges.items():
        for dst in dsts:
            if src in coreq_edges.get(dst, ()):
                continue  # mutual co-requisite pair: must share a term, not a cycle
            combined[src].add(dst)
    if not cycle:
        cycle2 = _find_cycle(combined)
        if cycle2:
            diags.append(
                Diagnostic("corequisite-cycle", "co-requisite cycle: " + " -> ".join(cycle2))
            )

    level4 = catalog.by_flag(CourseFlag.LEVEL4)
    level5 = catalog.by_flag(CourseFlag.LEVEL5)
    level6 = catalog.by_flag(CourseFlag.LEVEL6)
    if level5 and len(level4) < 4:
        diags.append(Diagnostic(
            "level-gate-unsatisfiable",
            f"Level-5 courses exist but only {len(level4)} Level-4 courses; "
            "the Level-5 gate can never open",
        ))
    if level6 and len(level5) < 4:
        diags.append(Diagnostic(
            "level-gate-unsatisfiable",
            f"Level-6 courses exist but only {len(level5)} Level-5 courses; "
            "the Level-6 gate can never open",
        ))

    for course in catalog.courses.values():
        if not course.offered:
            diags.append(Diagnostic(
                "never-offered", f"course {course.code} is never offered within the horizon"
            ))

    for group in catalog.groups:
        if group.count > len(group.members):
            diags.append(Diagnostic(
                "group-count", f"group {group.name}: count exceeds member count"
            ))
    return diags

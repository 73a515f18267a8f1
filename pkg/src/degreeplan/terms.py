"""Academic term calculus.

Terms are numbered 1..S_max in the fixed yearly cycle
Fall=1, Spring=2, Summer1=3, Summer2=4, SummerTerm=5.  SummerTerm runs
concurrently with Summer1/Summer2, which is why the prerequisite offset
k(s) is 3 for SummerTerm instead of 1: a course finished in Summer1
does not count as "before" the same year's SummerTerm.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class Season(Enum):
    FALL = 1
    SPRING = 2
    SUMMER1 = 3
    SUMMER2 = 4
    SUMMER_TERM = 5


_SEASON_PREFIX = {
    "FA": Season.FALL,
    "SP": Season.SPRING,
    "S1": Season.SUMMER1,
    "S2": Season.SUMMER2,
    "ST": Season.SUMMER_TERM,
}
_PREFIX_OF = {v: k for k, v in _SEASON_PREFIX.items()}

_TOKEN_RE = re.compile(r"^(FA|SP|S1|S2|ST)(\d{4})$")


class TermError(ValueError):
    """Bad term token or a term outside the planning horizon."""


def season_of(s: int) -> Season:
    if s < 1:
        raise TermError(f"term number must be >= 1, got {s}")
    return Season(((s - 1) % 5) + 1)


def k_of(s: int) -> int:
    """Prerequisite completion offset: 3 for SummerTerm, 1 otherwise."""
    if s < 1:
        raise TermError(f"term number must be >= 1, got {s}")
    return 3 if s % 5 == 0 else 1


def academic_year_offset(s: int) -> int:
    return (s - 1) // 5


@dataclass(frozen=True)
class Anchor:
    """Identifies which (season, calendar year) is term s=1."""

    season: Season
    calendar_year: int

    @classmethod
    def parse(cls, token: str) -> "Anchor":
        season, year = _split_token(token)
        return cls(season, year)

    @property
    def _absolute(self) -> int:
        # Absolute term index on the infinite calendar line.
        ay = self.calendar_year if self.season is Season.FALL else self.calendar_year - 1
        return 5 * ay + self.season.value


def _split_token(token: str) -> tuple[Season, int]:
    m = _TOKEN_RE.match(token.strip())
    if not m:
        raise TermError(f"malformed term token {token!r} (expected e.g. FA2022, ST2023)")
    return _SEASON_PREFIX[m.group(1)], int(m.group(2))


def term_index(token: str, anchor: Anchor) -> int:
    """Map a token like "SP2024" to the term number s >= 1 relative to anchor."""
    season, year = _split_token(token)
    ay = year if season is Season.FALL else year - 1
    s = 5 * ay + season.value - anchor._absolute + 1
    if s < 1:
        raise TermError(f"term token {token!r} precedes the planning anchor")
    return s


def term_token(s: int, anchor: Anchor) -> str:
    """Inverse of :func:`term_index`."""
    if s < 1:
        raise TermError(f"term number must be >= 1, got {s}")
    absolute = anchor._absolute + s - 1
    ay, season_value = divmod(absolute, 5)
    if season_value == 0:
        ay, season_value = ay - 1, 5
    season = Season(season_value)
    year = ay if season is Season.FALL else ay + 1
    return f"{_PREFIX_OF[season]}{year}"

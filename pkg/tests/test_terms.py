import pytest
from hypothesis import given, strategies as st

from degreeplan.terms import (
    Anchor,
    Season,
    TermError,
    k_of,
    season_of,
    term_index,
    term_token,
)

FA2022 = Anchor.parse("FA2022")


class TestTermIndex:
    def test_anchor_term_is_one(self):
        assert term_index("FA2022", FA2022) == 1

    def test_summer_term_same_academic_year(self):
        assert term_index("ST2023", FA2022) == 5

    def test_spring_next_academic_year(self):
        assert term_index("SP2024", FA2022) == 7

    def test_all_seasons_of_first_year(self):
        assert [term_index(t, FA2022) for t in ["FA2022", "SP2023", "S12023", "S22023", "ST2023"]] \
            == [1, 2, 3, 4, 5]

    def test_token_before_anchor_rejected(self):
        with pytest.raises(TermError):
            term_index("SP2022", FA2022)

    @pytest.mark.parametrize("bad", ["FA22", "XX2022", "2022FA", "FA 2022", ""])
    def test_bad_syntax_rejected(self, bad):
        with pytest.raises(TermError):
            term_index(bad, FA2022)

    def test_non_fall_anchor(self):
        sp = Anchor.parse("SP2023")
        assert term_index("SP2023", sp) == 1
        assert term_index("FA2023", sp) == 5  # Spring=2 .. next Fall=6, offset 5


class TestRoundTrip:
    @pytest.mark.parametrize("s", range(1, 26))
    def test_token_printer_inverts_index(self, s):
        assert term_index(term_token(s, FA2022), FA2022) == s

    @given(st.integers(min_value=1, max_value=200))
    def test_round_trip_any_term(self, s):
        assert term_index(term_token(s, FA2022), FA2022) == s


class TestSeasonAndOffset:
    def test_summer_term_offset_is_three(self):
        assert k_of(5) == 3
        assert k_of(10) == 3

    def test_regular_term_offset_is_one(self):
        assert k_of(3) == 1
        assert k_of(1) == 1

    def test_offset_matches_season_over_horizon(self):
        for s in range(1, 26):
            assert k_of(s) in (1, 3)
            assert (k_of(s) == 3) == (season_of(s) is Season.SUMMER_TERM)
            assert (k_of(s) == 3) == (s % 5 == 0)

    def test_season_cycle(self):
        assert [season_of(s) for s in range(1, 6)] == [
            Season.FALL, Season.SPRING, Season.SUMMER1, Season.SUMMER2, Season.SUMMER_TERM,
        ]
        assert season_of(6) is Season.FALL

    def test_nonpositive_terms_rejected(self):
        with pytest.raises(TermError):
            k_of(0)
        with pytest.raises(TermError):
            season_of(0)

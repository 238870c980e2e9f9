import pytest

from src.classify import (TAG_SYMBOLS, SolutionFamily, compare_with_paper, constraints_for, enumerate_families,
                          enumerate_families_brute, families_frame, instantiate_numeric, match_status,
                          numeric_residual, paper_table, root_closed_form, sort_families)
from src.constraints import FREE, ROOT, ROOT2, ZERO
from src.exceptions import EvaluationError, PaperMismatchError, PaperTableError

from .conftest import cartan

_FROM_SYMBOL = {"R": ROOT, "2": ROOT2, "0": ZERO, "*": FREE}

# maximal families per type, "2" marks the second quadratic root
EXPECTED = {
    "a2^1": ["RRR", "000"],
    "a3^1": ["RRRR", "0000"],
    "d4^1": ["RRRRR", "00000"],
    "e6^1": ["RRRRRRR", "0000000"],
    "d4^3": ["RRR", "000"],
    "b3^1": ["RRR*", "0000"],
    "c2^1": ["R*R", "*0*"],
    "c3^1": ["RRRR", "*00*"],
    "a5^2": ["RRRR", "000*"],
    "a6^2": ["*RRR", "000*"],
    "d3^2": ["*R*", "0*0"],
    "a2^2": ["R*", "*0"],
    "a4^2": ["*RR", "0*R", "00*"],
    "g2^1": ["RRR", "RR2", "000"],
    "f4^1": ["RRRRR", "RRR00", "00000"],
    "e6^2": ["RRRRR", "000RR", "00000"],
}


def family(code: str) -> SolutionFamily:
    return SolutionFamily(tuple(_FROM_SYMBOL[ch] for ch in code))


def families_of(name: str):
    cd = cartan(name)
    return cd, enumerate_families(constraints_for(cd), cd)


class TestConstraintSet:
    def test_one_entry_per_link(self, a21):
        cs = constraints_for(a21)
        assert list(cs.to_dict()) == ["0,1", "0,2", "1,2"]
        assert len(cs.constraints) == 6

    def test_empty_for_double_both(self, a11):
        assert constraints_for(a11).constraints == []


class TestEnumerate:
    @pytest.mark.parametrize("name", sorted(EXPECTED))
    def test_maximal_families(self, name):
        _, families = families_of(name)
        assert sorted(f.tags for f in families) == sorted(family(code).tags for code in EXPECTED[name])

    @pytest.mark.parametrize("name", sorted(EXPECTED))
    def test_search_matches_brute_force(self, name):
        cd = cartan(name)
        cs = constraints_for(cd)
        assert [f.tags for f in enumerate_families(cs, cd)] == [f.tags for f in enumerate_families_brute(cs, cd)]

    def test_unconstrained(self, a11):
        families = enumerate_families(constraints_for(a11), a11)
        assert [f.tags for f in families] == [(FREE, FREE)]

    def test_fixed_order(self):
        _, families = families_of("g2^1")
        assert [f.code() for f in families] == ["RRR", "RRR2", "000"]
        assert sort_families(list(reversed(families))) == families

    def test_provenance_records_forced_tags(self):
        _, families = families_of("c2^1")
        trail = dict((f.code(), f.provenance) for f in families)["R*R"]
        assert any("forced" in step for step in trail)

    def test_family_dict(self):
        f = family("R0*")
        assert f.to_dict() == {"tags": {"w0": ROOT, "w1": ZERO, "w2": FREE}, "provenance": []}
        assert f.code() == "R0*"
        assert f.as_map() == {0: ROOT, 1: ZERO, 2: FREE}


class TestPaperComparison:
    @pytest.mark.parametrize("name", sorted(EXPECTED))
    def test_every_tabulated_family_is_contained(self, name):
        cd, families = families_of(name)
        report = compare_with_paper(cd.algebra, families, cd)
        assert report.unmatched == []
        assert report.extras == []

    def test_subsumed_family(self):
        cd, families = families_of("c2^1")
        status = {row["code"]: row["paperMatch"] for row in compare_with_paper(cd.algebra, families, cd).rows}
        assert status == {"R*R": "subsumed", "*0*": "exact"}

    def test_all_zero_is_always_listed(self, g21):
        table = paper_table(g21.algebra, g21)
        assert table[-1].tags == (ZERO, ZERO, ZERO)

    def test_match_status_extra(self, a21):
        table = paper_table(a21.algebra, a21)
        assert match_status(family("R0R"), table) == "extra"
        assert match_status(family("RRR"), table) == "exact"

    def test_strict_mismatch(self, a21):
        with pytest.raises(PaperMismatchError):
            compare_with_paper(a21.algebra, [family("RRR")], a21)
        report = compare_with_paper(a21.algebra, [family("RRR")], a21, strict=False)
        assert report.unmatched == ["w_j = 0 for all j"]
        assert report.to_dict()["unmatchedPaperFamilies"] == report.unmatched

    def test_no_table_for_a11(self, a11):
        with pytest.raises(PaperTableError):
            paper_table(a11.algebra, a11)


class TestNumeric:
    def test_root_values(self, a21):
        values = instantiate_numeric(family("R0*"), 2, a21)
        plus, minus = values[0]
        assert plus == pytest.approx(1j / 1.5)
        assert minus == -plus
        assert values[1] == 0j
        assert values[2] == "free"

    def test_second_root(self, g21):
        values = instantiate_numeric(family("RR2"), 2, g21)
        plus, _ = values[2]
        assert plus == pytest.approx(1j / 1.5 * (4 + 0.25 - 1))

    @pytest.mark.parametrize("name", ["a2^1", "g2^1", "c3^1", "a4^2", "e6^2"])
    def test_families_satisfy_constraints(self, name):
        cd, families = families_of(name)
        cs = constraints_for(cd)
        for f in families:
            assert numeric_residual(cs, instantiate_numeric(f, 2, cd), 2, cd) < 1e-10

    def test_wrong_branch_is_detected(self, a21):
        cs = constraints_for(a21)
        values = instantiate_numeric(family("R00"), 2, a21)
        assert numeric_residual(cs, values, 2, a21) > 1e-3

    def test_inadmissible_t(self, a21):
        with pytest.raises(EvaluationError):
            instantiate_numeric(family("RRR"), 1, a21)

    def test_closed_forms(self, g21):
        assert root_closed_form(ROOT, 2, g21) == "±i/(q^(1/2) - q^(1/2)^-1)"
        assert root_closed_form(ROOT, 0, g21) == "±i/(q^(3/2) - q^(3/2)^-1)"
        assert root_closed_form(ROOT2, 2, g21) == "±i(q + q^-1 - 1)/(q^(1/2) - q^(1/2)^-1)"
        assert root_closed_form(ZERO, 1, g21) == "0"
        assert root_closed_form(FREE, 1, g21) == "arbitrary"


class TestFrame:
    def test_columns_and_index(self, g21):
        _, families = families_of("g2^1")
        frame = families_frame(families, g21, status=["exact", "exact", "exact"])
        assert list(frame.columns) == ["w0", "w1", "w2", "paper"]
        assert list(frame.index) == ["F1", "F2", "F3"]
        assert frame.loc["F2", "w2"] == TAG_SYMBOLS[ROOT2]

    def test_without_status(self, a21):
        frame = families_frame([family("RRR")], a21)
        assert list(frame.columns) == ["w0", "w1", "w2"]

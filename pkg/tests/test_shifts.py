import itertools

import pytest
from hypothesis import given, strategies as st

from shiftalg.config import build_shift, fixture
from shiftalg.errors import ClosureViolation, HypothesisViolated, UnknownLetter
from shiftalg.shifts import AutomatonShift
from shiftalg.words import Letter, fmt_word

import oracles
from conftest import eng_word


@pytest.mark.parametrize("name", ["full2", "golden", "golden00", "even"])
def test_language_matches_brute_force(name):
    sh = fixture(name)
    for n in range(9):
        got = sorted(fmt_word(w) for w in sh.enumerate_language(n)[0])
        want = sorted(w if w else "ω" for w in oracles.words(name, n))
        assert got == want


def test_language_counts():
    assert [len(fixture("golden").enumerate_language(n)[0]) for n in range(7)] == [1, 2, 3, 5, 8, 13, 21]
    assert [len(fixture("even").enumerate_language(n)[0]) for n in range(7)] == [1, 2, 4, 7, 12, 20, 33]
    assert fixture("full2").enumerate_language(0)[0] == [()]


def test_language_examples():
    g = fixture("golden")
    assert g.is_in_language(g.parse_word("010"))
    assert not g.is_in_language(g.parse_word("110"))
    assert sorted(fmt_word(w) for w in g.enumerate_language(2)[0]) == ["00", "01", "10"]
    r = fixture("renewal")
    assert r.is_in_language(r.parse_word("e3.e2.e1"))
    ws, truncated = r.enumerate_language(1, 3)
    assert [fmt_word(w) for w in ws] == ["e1", "e2", "e3"] and truncated


@pytest.mark.parametrize("name", ["full2", "golden", "even"])
def test_language_is_factorial(name):
    sh = fixture(name)
    for n in range(7):
        for w in sh.enumerate_language(n)[0]:
            for i, j in itertools.combinations(range(n + 1), 2):
                assert sh.is_in_language(w[i:j])


def test_renewal_two_letter_words():
    # e_i e_j is allowed exactly when j = i - 1 or i = 1
    r = fixture("renewal")
    for i in range(1, 9):
        for j in range(1, 9):
            w = (Letter("e", i), Letter("e", j))
            assert r.is_in_language(w) == (i == 1 or j == i - 1)


def test_theorPropfail_two_letter_words():
    t = fixture("theorPropfail")
    f = Letter("f")
    for i in range(6):
        e = Letter("e", i)
        assert t.is_in_language((e, f))
        assert not t.is_in_language((f, e))
        assert not t.is_in_language((e, Letter("e", i + 1)))
    assert t.is_in_language((f, f))


@pytest.mark.parametrize("name", ["full2", "golden", "even"])
def test_points_match_brute_force(name):
    sh = fixture(name)
    for pre in oracles.words_upto("full2", 3):
        for per in ["0", "1", "01", "001", "011"]:
            assert sh.contains_point(eng_word(sh, pre), eng_word(sh, per)) == oracles.is_point(name, pre, per)


def test_unknown_letters_rejected():
    with pytest.raises(UnknownLetter):
        fixture("golden").parse_word("2")
    with pytest.raises(UnknownLetter):
        fixture("renewal").parse_word("e0")


def test_sofic_requires_right_resolving_input():
    with pytest.raises(HypothesisViolated):
        AutomatonShift.sofic(["A", "B"], [("A", "0", "A"), ("A", "0", "B"), ("B", "1", "A")])


def test_rule_closure_violation_is_reported():
    desc = {"kind": "ultragraph_rules", "name": "spread", "numeric_from": 1,
            "families": [{"name": "e", "indices": {"from": 1}, "source": {"shift": 0}, "range": {"shift": 1}}]}
    sh = build_shift(desc)
    with pytest.raises(ClosureViolation):
        sh.window_for([Letter("e", 1)])


@given(st.lists(st.sampled_from("01"), max_size=8).map("".join))
def test_golden_membership_property(w):
    sh = fixture("golden")
    assert sh.is_in_language(eng_word(sh, w)) == oracles.in_lang("golden", w)

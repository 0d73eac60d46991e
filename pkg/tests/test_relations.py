import pytest

from shiftalg.config import fixture
from shiftalg.relations import relation_suite, suite_letters
from shiftalg.rings import QQ, PrimeField


def rows(rep):
    return {r["relation"]: r for r in rep.as_dict()["relations"]}


def test_golden_passes():
    rep = relation_suite(fixture("golden"), 3)
    assert rep.passed
    assert all(r["checked"] > 0 for r in rows(rep).values() if not r["relation"].startswith("consequences (iv)"))
    assert rows(rep)["consequences (iv) s_α s_β = 0 when αβ is not in the language"]["checked"] > 0


def test_renewal_passes_with_top_free_coincidence():
    rep = relation_suite(fixture("renewal"), 2, 4)
    assert rep.passed
    r = rows(rep)["non-unital: every pool set lies in the algebra without top"]
    assert r["checked"] > 0 and r["failed"] == 0


def test_theorPropfail_skips_non_regular_sets():
    rep = relation_suite(fixture("theorPropfail"), 2)
    assert rep.passed
    r = [v for k, v in rows(rep).items() if k.startswith("labelled-space (v)")][0]
    assert r["skipped"] > 0 and r["checked"] > 0
    assert "non-unital: every pool set lies in the algebra without top" not in rows(rep)


@pytest.mark.parametrize("ring", [QQ, PrimeField(2)])
def test_other_rings(ring):
    assert relation_suite(fixture("even"), 2, ring=ring).passed


def test_report_shape():
    d = relation_suite(fixture("full2"), 1).as_dict()
    assert d["shift"] == "full2" and d["max_len"] == 1 and d["passed"] is True
    assert {"relation", "checked", "failed", "skipped", "witness", "status"} <= set(d["relations"][0])


def test_letter_window():
    r = fixture("renewal")
    assert len(suite_letters(r, 4)) == 4
    assert len(suite_letters(fixture("golden"), 4)) == 2

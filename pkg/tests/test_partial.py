import random

import pytest

from shiftalg.algebra import s_prod, st_prod
from shiftalg.config import fixture
from shiftalg.partial import LocFn, SkewTerm, domain_of, skew_mul, tau, tau_hat_apply
from shiftalg.sets import c_set, cyl, fol, parse_set, top
from shiftalg.stone import words_upto
from shiftalg.words import IDENTITY, NOT_PN, FreeGroupElement, fg_from_pair

import oracles
from checks import orthogonality, round_trips, semi_saturation
from conftest import ALL, eng_point, eng_word


def T(sh, a, b=""):
    return FreeGroupElement(eng_word(sh, a), eng_word(sh, b))


def ind(A):
    return LocFn.indicator(A)


def test_domains():
    g = fixture("golden")
    assert domain_of(g, T(g, "0")) == parse_set(g, "Z(0)")
    assert domain_of(g, T(g, "1", "0")) == parse_set(g, "C(0,1)")
    assert domain_of(g, T(g, "1", "0")) == parse_set(g, "Z(10)")
    assert domain_of(g, NOT_PN).is_empty()
    assert domain_of(g, IDENTITY) == top(g)


def test_tau_hat_examples():
    g = fixture("golden")
    assert tau_hat_apply(T(g, "0", "1"), parse_set(g, "Z(10)")) == parse_set(g, "Z(00)")
    A = parse_set(g, "Z(01) | F(1)")
    assert tau_hat_apply(IDENTITY, A) == A
    # τ̂_{01⁻¹}(C(ω,1) ∩ C(1,0)) = C(ω,0) ∩ C(1,0)
    lhs = tau_hat_apply(T(g, "0", "1"), parse_set(g, "C(ω,1) & C(0,1)"))
    assert lhs == parse_set(g, "C(ω,0) & C(1,0)")
    assert lhs == parse_set(g, "Z(00)")


def test_skew_products():
    g = fixture("golden")
    z0, f0 = cyl(g, eng_word(g, "0")), fol(g, eng_word(g, "0"))
    z1, f1 = cyl(g, eng_word(g, "1")), fol(g, eng_word(g, "1"))
    (t,) = skew_mul(SkewTerm(T(g, "0"), ind(z0)), SkewTerm(T(g, "", "0"), ind(f0)))
    assert t.t == IDENTITY and t.f == ind(z0)
    (t,) = skew_mul(SkewTerm(T(g, "0"), ind(z0)), SkewTerm(T(g, "", "1"), ind(f1)))
    assert t.t == T(g, "0", "1") and t.f == ind(c_set(g, eng_word(g, "1"), eng_word(g, "0")))
    assert skew_mul(SkewTerm(T(g, "1"), ind(z1)), SkewTerm(T(g, "1"), ind(z1))) == []


@pytest.mark.parametrize("name", ["golden", "even", "renewal", "theorPropfail"])
def test_letter_products_follow_cancellation_rules(name):
    sh = fixture(name)
    letters = list(getattr(sh, "alphabet", ())) or [sh.parse_word(x)[0] for x in ("e1", "e2")]
    if name == "theorPropfail":
        letters = [sh.parse_word(x)[0] for x in ("e0", "f")]
    ws = [w for w in words_upto(sh, letters, 3) if w]
    for a in ws:
        za, fa = ind(cyl(sh, a)), ind(fol(sh, a))
        (u,) = skew_mul(SkewTerm(FreeGroupElement(a, ()), za), SkewTerm(FreeGroupElement((), a), fa))
        assert u.t == IDENTITY and u.f == za
        (u,) = skew_mul(SkewTerm(FreeGroupElement((), a), fa), SkewTerm(FreeGroupElement(a, ()), za))
        assert u.t == IDENTITY and u.f == fa
        for b in ws[:6]:
            got = skew_mul(SkewTerm(FreeGroupElement(a, ()), za), SkewTerm(FreeGroupElement(b, ()), ind(cyl(sh, b))))
            if sh.is_in_language(a + b):
                assert got[0].t == FreeGroupElement(a + b, ()) and got[0].f == ind(cyl(sh, a + b))
            else:
                assert got == []
            t = fg_from_pair(a, b)
            got = skew_mul(SkewTerm(FreeGroupElement(a, ()), za), SkewTerm(FreeGroupElement((), b), ind(fol(sh, b))))
            if t == FreeGroupElement(a, b):
                assert got[0].t == t and got[0].f == ind(c_set(sh, b, a))


@pytest.mark.parametrize("name", ["full2", "golden", "even"])
def test_generators_reproduce_domain_indicators(name):
    sh = fixture(name)
    ws = words_upto(sh, sh.alphabet, 3)
    for a in ws:
        for b in ws:
            t = fg_from_pair(a, b)
            if t != FreeGroupElement(a, b) or len(a) + len(b) > 3:
                continue
            x = s_prod(sh, a) * st_prod(sh, b)
            W = domain_of(sh, t)
            if W.is_empty():
                assert x.is_zero()
            else:
                assert list(x.comps) == [t] and x.comps[t] == ind(W)


@pytest.mark.parametrize("name", ["golden", "even"])
def test_tau_matches_points(name):
    sh = fixture(name)
    rng = random.Random(2)
    pts = oracles.points(name, 3, 2)
    ws = oracles.words_upto(name, 2)
    for _ in range(60):
        a, b = rng.choice(ws), rng.choice(ws)
        t = fg_from_pair(eng_word(sh, a), eng_word(sh, b))
        A = ("C", rng.choice(ws), rng.choice(ws))
        f = ind(parse_set(sh, oracles.ast_text(A)))
        g = tau(t, f)
        ta = "".join(str(x) for x in t.pos)
        tb = "".join(str(x) for x in t.neg)
        for p in pts:
            # τ_t(f)(αz) = f(βz) on W_t
            want = 0
            if oracles.prefix(*p, len(ta)) == ta:
                z = oracles.shift_point(*p, len(ta))
                if oracles.is_point(name, tb + z[0], z[1]) and oracles.member(name, A, tb + z[0], z[1]):
                    want = 1
            assert g.at_point(*eng_point(sh, p)) == want


@pytest.mark.parametrize("name", ALL)
def test_orthogonality(name):
    n, fails = orthogonality(fixture(name))
    assert n > 0 and fails == []


@pytest.mark.parametrize("name", ["golden", "even", "theorPropfail"])
def test_semi_saturation(name):
    n, fails = semi_saturation(fixture(name), 5, 2)
    assert n > 0 and fails == []


@pytest.mark.parametrize("name", ["golden", "renewal"])
def test_round_trips(name):
    n, fails = round_trips(fixture(name), 120)
    assert fails == []


def test_locfn_arithmetic():
    g = fixture("golden")
    a = LocFn.indicator(parse_set(g, "Z(0)"), 2)
    b = LocFn.indicator(parse_set(g, "Z(00)"), 3)
    s = a + b
    assert s.at_point(*eng_point(g, ("00", "0"))) == 5
    assert s.at_point(*eng_point(g, ("01", "0"))) == 2
    assert (a * b).support() == parse_set(g, "Z(00)")
    assert (a - a).is_zero()
    assert (a + b).canonical() == s


@pytest.mark.parametrize("name,word", [("theorPropfail", "e0.e0"), ("renewal", "e2.e2"), ("golden", "11")])
def test_words_outside_the_language_act_as_zero(name, word):
    sh = fixture(name)
    t = FreeGroupElement(sh.parse_word(word), ())
    assert tau_hat_apply(t, top(sh)).is_empty()
    assert tau_hat_apply(t.inverse(), top(sh)).is_empty()
    assert tau(t, ind(top(sh))).is_zero()

import pytest

from shiftalg.algebra import gen_p, gen_s, tau_M
from shiftalg.config import fixture
from shiftalg.errors import NotInDomain
from shiftalg.otw import OTWPoint, parse_point
from shiftalg.sets import parse_set, top
from shiftalg.stone import (
    GroupoidArrow, atoms_at, coarsen, compose, cover_fiber, epsilon, epsilon_M, first_letter,
    groupoid_eval, phi_hat, pi, point_arrow_eval, point_to_ultra, sigma_hat, theta, unit_arrow,
)
from shiftalg.words import IDENTITY, FreeGroupElement

import oracles
from conftest import FINITE, build, eng_point, eng_word, random_monomials


def iota(sh, p, k):
    return point_to_ultra(sh, *eng_point(sh, p), k)


def point_arrow(sh, arrow, k):
    x, n, y = arrow
    a, b = iota(sh, x, k), iota(sh, y, k)
    # witnesses: the heads are the parts before the common tail
    for kk in range(0, 3):
        m = kk - n
        if 0 <= m <= 2 and oracles.same_point(oracles.shift_point(*x, kk), oracles.shift_point(*y, m)):
            return GroupoidArrow(a, n, b, kk, m)
    raise AssertionError(arrow)


def test_point_to_ultra_examples():
    f = fixture("full2")
    assert iota(f, ("", "0"), 2).atom() == parse_set(f, "Z(00)")
    g = fixture("golden")
    xi = iota(g, ("", "01"), 2)
    assert xi.atom() == parse_set(g, "Z(010)")
    e = fixture("even")
    xi = iota(e, ("", "0"), 3)
    assert xi.atom() == parse_set(e, "F(1) & F(10)")
    assert xi.atom().issubset(parse_set(e, "Z(000) & F(1)"))


def test_sigma_hat_examples():
    f = fixture("full2")
    xi = iota(f, ("01", "1"), 2)
    assert xi.atom() == parse_set(f, "Z(01)")
    assert sigma_hat(xi).atom() == parse_set(f, "Z(1)")
    e = fixture("even")
    xi = iota(e, ("", "0"), 3)
    assert sigma_hat(xi) == iota(e, ("", "0"), 2)


@pytest.mark.parametrize("name", FINITE)
def test_iota_is_equivariant(name):
    sh = fixture(name)
    for p in oracles.points(name, 3, 2):
        if not p[0]:
            continue
        for k in (1, 2, 3):
            assert sigma_hat(iota(sh, p, k)) == iota(sh, oracles.shift_point(*p, 1), k - 1)


@pytest.mark.parametrize("name", FINITE)
def test_iota_separates_points(name):
    sh = fixture(name)
    pts = oracles.points(name, 2, 2)
    for p in pts:
        for q in pts:
            if oracles.prefix(*p, 3) != oracles.prefix(*q, 3):
                assert iota(sh, p, 3) != iota(sh, q, 3)


def test_pi_examples():
    f = fixture("full2")
    p, st = pi(iota(f, ("01", "1"), 2), extend=0)
    assert (p, st) == (eng_word(f, "01"), "truncated")
    r = fixture("renewal")
    e1 = r.parse_word("e1")
    fib = cover_fiber(parse_point(r, "fin(e1)"), 2)
    assert any(pi(xi) == (e1, "exact") for xi in fib)
    t = fixture("theorPropfail")
    fib = cover_fiber(OTWPoint(t, "zero"), 2)
    assert fib and any(pi(xi) == ((), "zero") for xi in fib)


@pytest.mark.parametrize("name", ["full2", "golden"])
def test_sft_fibers_are_single_atoms(name):
    sh = fixture(name)
    for p in oracles.points(name, 3, 2):
        assert len(cover_fiber(OTWPoint(sh, "inf", *eng_point(sh, p)), 3)) == 1
        assert oracles.fiber_count(name, p, 3) == 1


def test_even_fibers_match_brute_force_atoms():
    e = fixture("even")
    for p in oracles.points("even", 3, 2):
        got = len(cover_fiber(OTWPoint(e, "inf", *eng_point(e, p)), 3))
        assert got == oracles.fiber_count("even", p, 3)
    zero_inf = cover_fiber(OTWPoint(e, "inf", (), eng_word(e, "0")), 3)
    texts = sorted(xi.text() for xi in zero_inf)
    assert texts == sorted(["F(1) & F(10)", "Z(00) \\ C(1,00)", "Z(000) \\ C(1,000)"])


@pytest.mark.parametrize("name", FINITE + ["renewal", "theorPropfail"])
def test_atoms_partition_and_refine(name):
    sh = fixture(name)
    for k in (1, 2):
        atoms = [xi.atom() for xi in atoms_at(sh, k)]
        total = atoms[0]
        for i, A in enumerate(atoms):
            assert not A.is_empty()
            for B in atoms[i + 1:]:
                assert (A & B).is_empty()
            total = total | A
        assert total == top(sh)
        for xi in atoms_at(sh, k):
            assert xi.atom().issubset(coarsen(xi, k - 1).atom())
        assert {coarsen(xi, k - 1) for xi in atoms_at(sh, k)} == set(atoms_at(sh, k - 1))


@pytest.mark.parametrize("name", FINITE + ["renewal"])
def test_pi_commutes_with_shift(name):
    sh = fixture(name)
    for xi in atoms_at(sh, 3):
        try:
            s = sigma_hat(xi)
        except NotInDomain:
            continue
        p, _ = pi(xi)
        q, _ = pi(s)
        n = min(len(p) - 1, len(q))
        assert p[1:1 + n] == q[:n]


@pytest.mark.parametrize("name", FINITE)
def test_phi_hat_inverts_sigma_hat(name):
    sh = fixture(name)
    for xi in atoms_at(sh, 3):
        a = first_letter(xi)
        if a is None:
            continue
        assert phi_hat(a, sigma_hat(xi)) == coarsen(xi, 1)


def test_theta_examples():
    g = fixture("golden")
    z, o = g.parse_word("0"), g.parse_word("1")
    x = ("", "01")
    arr = theta(iota(g, ("0", "01"), 3), FreeGroupElement(z, ()), iota(g, x, 3))
    assert arr.n == 1
    xi = iota(g, x, 3)
    assert theta(xi, IDENTITY, xi) == unit_arrow(xi)
    arr = theta(iota(g, ("00", "10"), 4), FreeGroupElement(z, o), iota(g, ("10", "10"), 4))
    assert arr.n == 0 and (arr.k, arr.m) == (1, 1)


def test_theta_cocycle_and_composition():
    g = fixture("golden")
    words = [w for w in oracles.words_upto("golden", 2)]
    y = ("", "01")
    for a in words:
        for b in words:
            if not (oracles.is_point("golden", a + y[0], y[1]) and oracles.is_point("golden", b + y[0], y[1])):
                continue
            t = FreeGroupElement(eng_word(g, a), eng_word(g, b))
            arr = theta(iota(g, (a, "01"), 4), t, iota(g, (b, "01"), 4))
            assert arr.n == len(a) - len(b)
            back = compose(arr, GroupoidArrow(arr.eta, -arr.n, arr.xi, arr.m, arr.k))
            assert back.n == 0 and back.xi == back.eta


def test_epsilon():
    g = fixture("golden")
    arr = point_arrow(g, (("00", "10"), 1, ("0", "10")), 4)
    e = epsilon(arr)
    assert e.n == 1
    assert e.xi == iota(g, ("0", "10"), 3) and e.eta == iota(g, ("", "10"), 3)
    M = [g.parse_word("1")[0]]
    with pytest.raises(NotInDomain):
        epsilon_M(arr, M)


def test_groupoid_eval_examples():
    g = fixture("golden")
    s0 = gen_s(g, g.parse_word("0")[0])
    assert groupoid_eval(s0, point_arrow(g, (("0", "01"), 1, ("", "01")), 3)) == 1
    assert groupoid_eval(s0, point_arrow(g, (("1", "0"), 1, ("", "0")), 3)) == 0
    A = parse_set(g, "Z(0) | F(1)")
    for xi in atoms_at(g, 2):
        assert groupoid_eval(gen_p(A), unit_arrow(xi)) == int(xi.atom().issubset(A))


@pytest.mark.parametrize("name", FINITE)
def test_groupoid_eval_matches_point_eval(name, rng):
    sh = fixture(name)
    arrows = oracles.arrows(name, 2, 2, 2)
    garrows = [(a, point_arrow(sh, a, 5)) for a in arrows]
    for _ in range(25):
        x = build(sh, random_monomials(rng, name))
        for (p, n, q), ga in garrows:
            assert groupoid_eval(x, ga) == point_arrow_eval(x, eng_point(sh, p), n, eng_point(sh, q))


@pytest.mark.parametrize("name", FINITE)
def test_tau_M_is_epsilon_pullback(name, rng):
    sh = fixture(name)
    M = list(sh.alphabet)[:1]
    arrows = [point_arrow(sh, a, 5) for a in oracles.arrows(name, 2, 2, 2)]
    for _ in range(100 if name == "golden" else 30):
        f = build(sh, random_monomials(rng, name))
        tf = tau_M(M, f)
        for arr in arrows:
            try:
                want = groupoid_eval(f, epsilon_M(arr, M))
            except NotInDomain:
                want = 0
            assert groupoid_eval(tf, arr) == want

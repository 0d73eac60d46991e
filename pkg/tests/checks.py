"""Whole-fixture checks shared by the module tests and the acceptance run; each returns (checked, failures)."""
import itertools
import random

import oracles
from conftest import build, eng_point, eng_word, random_monomials, rewrite_equal
from shiftalg.algebra import degree_decompose, monomial, zero
from shiftalg.config import fixture
from shiftalg.otw import GenCylinder, forward_image, pullback_intersect
from shiftalg.partial import domain_of, tau_hat_apply
from shiftalg.relations import set_pool, suite_letters
from shiftalg.sets import c_set
from shiftalg.stone import point_arrow_eval, words_upto
from shiftalg.words import NOT_PN, FreeGroupElement, fg_from_pair, fg_mul


def orthogonality(shift, window=5, max_len=2):
    """W_α ∩ W_β = ∅ for positive words neither of which is a prefix of the other."""
    letters = suite_letters(shift, window)
    ws = [w for w in words_upto(shift, letters, max_len) if w]
    fails = []
    n = 0
    for a, b in itertools.combinations(ws, 2):
        if a[:len(b)] == b or b[:len(a)] == a:
            continue
        n += 1
        D = domain_of(shift, FreeGroupElement(a, ())) & domain_of(shift, FreeGroupElement(b, ()))
        if not D.is_empty():
            fails.append((a, b))
    return n, fails


def semi_saturation(shift, window=5, max_len=2, pool_len=1):
    """τ̂_{αβ} = τ̂_α ∘ τ̂_β on sets, for nonempty α, β with αβ in the language."""
    letters = suite_letters(shift, window)
    ws = [w for w in words_upto(shift, letters, max_len) if w]
    pool = set_pool(shift, words_upto(shift, letters, pool_len))
    fails = []
    n = 0
    for a in ws:
        for b in ws:
            if not shift.is_in_language(a + b):
                continue
            for B in pool:
                n += 1
                lhs = tau_hat_apply(FreeGroupElement(a + b, ()), B)
                rhs = tau_hat_apply(FreeGroupElement(a, ()), tau_hat_apply(FreeGroupElement(b, ()), B))
                if not lhs == rhs:
                    fails.append((a, b, str(B)))
    # mixed elements s, t of length ≤ 2 whose product has length |s| + |t|
    ws = words_upto(shift, letters, 2)
    ts = sorted({fg_from_pair(a, b) for a in ws for b in ws if len(a) + len(b) <= 2} - {NOT_PN},
                key=lambda t: (len(t.pos), len(t.neg), str(t)))
    small = set_pool(shift, words_upto(shift, letters, 1))
    for s in ts:
        for t in ts:
            st = fg_mul(s, t)
            if st is NOT_PN or len(st.pos) + len(st.neg) != len(s.pos) + len(s.neg) + len(t.pos) + len(t.neg):
                continue
            for B in small:
                n += 1
                if not tau_hat_apply(st, B) == tau_hat_apply(s, tau_hat_apply(t, B)):
                    fails.append((str(s), str(t), str(B)))
    return n, fails


def round_trips(shift, samples=500, window=5, seed=0):
    """τ̂_{t⁻¹}(τ̂_t(B)) = B ∩ W_{t⁻¹} on sampled pairs (t, B)."""
    rng = random.Random(seed)
    letters = suite_letters(shift, window)
    ws = words_upto(shift, letters, 2)
    ts = sorted({fg_from_pair(a, b) for a in ws for b in ws}, key=lambda t: (len(t.pos), len(t.neg), str(t)))
    pool = set_pool(shift, words_upto(shift, letters, 1))
    gens = [c_set(shift, a, b) for a in ws[:8] for b in ws[:8]]
    pool = pool + [g for g in gens if not g.is_empty()]
    fails = []
    for _ in range(samples):
        t = rng.choice(ts)
        B = rng.choice(pool)
        there = tau_hat_apply(t, B)
        back = tau_hat_apply(t.inverse(), there)
        if not back == (B & domain_of(shift, t.inverse())):
            fails.append((str(t), str(B)))
        if not there.issubset(domain_of(shift, t)):
            fails.append((str(t), str(B), "range"))
    return samples, fails


def equality_agreement(name, pairs=1000, seed=1):
    """Two routes against the brute-force arrow oracle: engine equality, and pointwise
    evaluation of the difference at point arrows."""
    sh = fixture(name)
    rng = random.Random(seed)
    arr = oracles.arrows(name)
    fails = []
    equal = 0
    for i in range(pairs):
        m1 = random_monomials(rng, name)
        m2 = rewrite_equal(rng, name, m1) if i % 3 == 0 else random_monomials(rng, name)
        x, y = build(sh, m1), build(sh, m2)
        v1 = oracles.element_vector(name, m1, arr)
        v2 = oracles.element_vector(name, m2, arr)
        same = x == y
        equal += same
        if same != (v1 == v2):
            fails.append(("equals", m1, m2))
        d = x - y
        got = tuple(point_arrow_eval(d, eng_point(sh, a), n, eng_point(sh, b)) for a, n, b in arr)
        if got != tuple(p - q for p, q in zip(v1, v2)):
            fails.append(("pointwise", m1, m2))
    return pairs, fails, equal


def _homogeneous(rng, sh, ws, pool, deg, n_terms=3):
    pairs = [(a, b) for a in ws for b in ws if len(a) - len(b) == deg]
    x = zero(sh)
    for _ in range(rng.randint(1, n_terms)):
        a, b = rng.choice(pairs)
        x = x + monomial(sh, a, rng.choice(pool), b, rng.choice([-3, -2, -1, 1, 2, 3]))
    return x


def grading(sh, products=10000, seed=5, window=5):
    """Degree additivity of nonzero homogeneous products and reassembly of degree components."""
    rng = random.Random(seed)
    letters = suite_letters(sh, window)
    ws = words_upto(sh, letters, 2)
    pool = [A for A in set_pool(sh, words_upto(sh, letters, 1)) if not A.is_empty()]
    fails = []
    nonzero = 0
    for _ in range(products):
        d1, d2 = rng.randint(-2, 2), rng.randint(-2, 2)
        x = _homogeneous(rng, sh, ws, pool, d1)
        y = _homogeneous(rng, sh, ws, pool, d2)
        z = x * y
        if not z.is_zero():
            nonzero += 1
            if set(degree_decompose(z)) != {d1 + d2}:
                fails.append((str(x), str(y)))
        w = x + y
        total = zero(sh)
        for part in degree_decompose(w).values():
            total = total + part
        if not total == w:
            fails.append(("decompose", str(w)))
    return products, fails, nonzero


DEPTH = 8


def _in_z(w, alpha, F):
    """Prefix-level membership of a length-DEPTH word in 𝒵(α, F)."""
    return w.startswith(alpha) and w[len(alpha)] not in F


def _subsets():
    return [frozenset(s) for k in range(3) for s in itertools.combinations("01", k)]


def back_and_forth_disagreements(name):
    """Disagreements of forward_image / pullback_intersect with depth-8 word enumeration."""
    sh = fixture(name)
    L8 = oracles.words(name, DEPTH)
    ws = oracles.words_upto(name, 3)
    bad = []
    total = 0
    for alpha in ws:
        for F in _subsets():
            z1 = GenCylinder(sh, eng_word(sh, alpha), {sh.letter(a) for a in F})
            inside = [w for w in L8 if _in_z(w, alpha, F)]
            for n in range(len(alpha) + 1):
                img, head = forward_image(z1, n)
                want = {w[n:] for w in inside}
                base = "".join(str(a) for a in img.base)
                exc = {str(a) for a in img.excluded}
                got = {u for u in oracles.words(name, DEPTH - n)
                       if _in_z(u, base, exc) and oracles.in_lang(name, "".join(str(a) for a in head) + u)}
                total += 1
                if got != want:
                    bad.append(("forward", alpha, F, n))
                for beta in ws:
                    for G in _subsets():
                        z2 = GenCylinder(sh, eng_word(sh, beta), {sh.letter(a) for a in G})
                        want = {w for w in inside if _in_z(w[n:], beta, G)}
                        res = pullback_intersect(z1, n, z2)
                        if res is None:
                            got = set()
                        else:
                            b2 = "".join(str(a) for a in res.base)
                            got = {w for w in L8 if _in_z(w, b2, {str(a) for a in res.excluded})}
                        total += 1
                        if got != want:
                            bad.append(("pullback", alpha, F, n, beta, G))
    return total, bad

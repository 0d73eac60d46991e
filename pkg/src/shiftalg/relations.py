"""Relation suites for the subshift algebras, checked in skew-ring normal form."""
import itertools
import time

from .algebra import (PLAIN, UNITAL, gen_p, gen_s, gen_s_star, one, s_prod, st_prod, zero)
from .partial import LocFn, SkewTerm, skew_mul
from .rings import ZZ
from .sets import c_set, emitted_letters, empty, in_B, is_regular, is_unital, relative_range, top
from .stone import words_upto
from .words import FreeGroupElement, IDENTITY, fmt_word


def suite_letters(shift, window=5):
    """All letters of a finite alphabet; otherwise the first letters of each family up to `window` in total."""
    if shift.finite_alphabet and hasattr(shift, "alphabet"):
        return tuple(shift.alphabet)
    fams = shift.families
    fixed = [a for f in fams if not f.infinite for a in f.letters()]
    out = list(fixed)
    iters = [iter(f.letters(window)) for f in fams if f.infinite]
    while len(out) < window and iters:
        for it in list(iters):
            a = next(it, None)
            if a is None:
                iters.remove(it)
            elif len(out) < window:
                out.append(a)
    return tuple(sorted(out, key=shift.letter_key))


def set_pool(shift, words, flavor=UNITAL):
    """Distinct nonempty C(α, β) over short words, X, and a few Boolean combinations."""
    short = [w for w in words if len(w) <= 2]
    pool = []

    def add(A):
        if A.is_empty() or any(A == B for B in pool):
            return
        if flavor == PLAIN and not in_B(A):
            return
        pool.append(A)

    if flavor == UNITAL:
        add(top(shift))
    for a, b in itertools.product(short, short):
        if a or b:
            add(c_set(shift, a, b))
    base = list(pool)
    for A, B in itertools.combinations(base[:6], 2):
        add(A | B)
        add(A - B)
    return pool


class Report:
    def __init__(self, shift, L, letters):
        self.shift = shift
        self.L = L
        self.letters = letters
        self.rows = []
        self._cur = None
        self.started = time.time()

    def start(self, name):
        self._cur = {"relation": name, "checked": 0, "failed": 0, "skipped": 0, "witness": None}
        self.rows.append(self._cur)

    def record(self, ok, label):
        self._cur["checked"] += 1
        if not ok:
            self._cur["failed"] += 1
            if self._cur["witness"] is None:
                self._cur["witness"] = label

    def skip(self):
        self._cur["skipped"] += 1

    @property
    def passed(self):
        return all(r["failed"] == 0 for r in self.rows)

    def as_dict(self):
        return {"shift": self.shift.name, "max_len": self.L, "letters": [str(a) for a in self.letters],
                "passed": self.passed, "seconds": round(time.time() - self.started, 3),
                "relations": [dict(r, status="pass" if r["failed"] == 0 else "fail") for r in self.rows]}


def _w(w):
    return fmt_word(w)


def relation_suite(shift, L=3, window=5, ring=ZZ):
    letters = suite_letters(shift, window)
    words = words_upto(shift, letters, L)
    nonempty = [w for w in words if w]
    rep = Report(shift, L, letters)
    unital_pool = set_pool(shift, words, UNITAL)
    _boolean(rep, "unital (i)", shift, unital_pool, ring, UNITAL, with_top=True)
    _unital(rep, shift, letters, words, ring)
    nu = is_unital(shift)
    plain_pool = set_pool(shift, words, PLAIN)
    _boolean(rep, "non-unital (i)", shift, plain_pool, ring, PLAIN, with_top=False)
    _nonunital(rep, shift, letters, nonempty, ring)
    if nu == "yes":
        rep.start("non-unital: every pool set lies in the algebra without top")
        for A in unital_pool:
            rep.record(in_B(A), str(A))
    _consequences(rep, shift, letters, words, ring)
    _skew_products(rep, shift, words, ring)
    _labelled(rep, shift, letters, unital_pool, ring)
    return rep


def _boolean(rep, tag, sh, pool, ring, fl, with_top):
    if with_top:
        rep.start(f"{tag} p_X = 1")
        rep.record(gen_p(top(sh), ring, fl) == one(sh, ring, fl), "X")
    rep.start(f"{tag} p_(A∩B) = p_A p_B")
    for A, B in itertools.product(pool, pool):
        rep.record(gen_p(A & B, ring, fl) == gen_p(A, ring, fl) * gen_p(B, ring, fl), f"A={A}, B={B}")
    rep.start(f"{tag} p_(A∪B) = p_A + p_B - p_(A∩B)")
    for A, B in itertools.product(pool, pool):
        lhs = gen_p(A | B, ring, fl)
        rhs = gen_p(A, ring, fl) + gen_p(B, ring, fl) - gen_p(A & B, ring, fl)
        rep.record(lhs == rhs, f"A={A}, B={B}")
    rep.start(f"{tag} p_∅ = 0")
    rep.record(gen_p(empty(sh, fl), ring, fl).is_zero(), "∅")


def _partial_isometry(rep, tag, sh, letters, ring, fl):
    rep.start(f"{tag} s_a s_a* s_a = s_a, s_a* s_a s_a* = s_a*")
    for a in letters:
        s, st = gen_s(sh, a, ring, fl), gen_s_star(sh, a, ring, fl)
        rep.record(s * st * s == s and st * s * st == st, str(a))


def _unital(rep, sh, letters, words, ring):
    _partial_isometry(rep, "unital (ii)", sh, letters, ring, UNITAL)
    rep.start("unital (iii) s_β s_α* s_α s_β* = p_C(α,β)")
    for a, b in itertools.product(words, words):
        lhs = s_prod(sh, b, ring) * st_prod(sh, a, ring) * s_prod(sh, a, ring) * st_prod(sh, b, ring)
        rep.record(lhs == gen_p(c_set(sh, a, b), ring), f"α={_w(a)}, β={_w(b)}")


def _nonunital(rep, sh, letters, words, ring):
    fl = PLAIN
    _partial_isometry(rep, "non-unital (ii)", sh, letters, ring, fl)
    rep.start("non-unital (iii) s_β s_α* s_α s_β* = p_C(α,β), α,β ≠ ω")
    for a, b in itertools.product(words, words):
        C = c_set(sh, a, b, "B")
        lhs = s_prod(sh, b, ring, fl) * st_prod(sh, a, ring, fl) * s_prod(sh, a, ring, fl) * st_prod(sh, b, ring, fl)
        rep.record(lhs == gen_p(C, ring, fl), f"α={_w(a)}, β={_w(b)}")
    rep.start("non-unital (iv) s_α* s_α = p_C(α,ω)")
    for a in words:
        rep.record(st_prod(sh, a, ring, fl) * s_prod(sh, a, ring, fl) == gen_p(c_set(sh, a, (), "B"), ring, fl),
                   f"α={_w(a)}")
    rep.start("non-unital (v) s_β s_β* = p_C(ω,β)")
    for b in words:
        rep.record(s_prod(sh, b, ring, fl) * st_prod(sh, b, ring, fl) == gen_p(c_set(sh, (), b, "B"), ring, fl),
                   f"β={_w(b)}")


def _consequences(rep, sh, letters, words, ring):
    rep.start("consequences (i) s_a* s_b = δ_ab p_F_a")
    for a, b in itertools.product(letters, letters):
        lhs = gen_s_star(sh, a, ring) * gen_s(sh, b, ring)
        rhs = gen_p(c_set(sh, (a,), ()), ring) if a == b else zero(sh, ring)
        rep.record(lhs == rhs, f"a={a}, b={b}")
    ann = {w: st_prod(sh, w, ring) * s_prod(sh, w, ring) for w in words}
    ran = {w: s_prod(sh, w, ring) * st_prod(sh, w, ring) for w in words}
    rep.start("consequences (ii) s_α* s_α and s_β* s_β commute")
    for a, b in itertools.combinations(words, 2):
        rep.record(ann[a] * ann[b] == ann[b] * ann[a], f"α={_w(a)}, β={_w(b)}")
    rep.start("consequences (iii) s_α* s_α and s_β s_β* commute")
    for a, b in itertools.product(words, words):
        rep.record(ann[a] * ran[b] == ran[b] * ann[a], f"α={_w(a)}, β={_w(b)}")
    rep.start("consequences (iv) s_α s_β = 0 when αβ is not in the language")
    for a, b in itertools.product(words, words):
        if sh.is_in_language(a + b):
            rep.skip()
            continue
        rep.record((s_prod(sh, a, ring) * s_prod(sh, b, ring)).is_zero(), f"α={_w(a)}, β={_w(b)}")
    rep.start("consequences (v) p_C(α,β) is generated by s_a, s_a*, 1")
    for a, b in itertools.product(words, words):
        lhs = gen_p(c_set(sh, a, b), ring)
        rhs = s_prod(sh, b, ring) * ann[a] * st_prod(sh, b, ring)
        rep.record(lhs == rhs, f"α={_w(a)}, β={_w(b)}")


def _ind(A, ring):
    return LocFn.indicator(A, 1, ring)


def _skew_products(rep, sh, words, ring):
    def fwd(w):
        return SkewTerm(FreeGroupElement(w, ()), _ind(c_set(sh, (), w), ring))

    def bwd(w):
        return SkewTerm(FreeGroupElement((), w), _ind(c_set(sh, w, ()), ring))

    def prod(terms):
        cur = terms[0]
        for t in terms[1:]:
            out = skew_mul(cur, t)
            if not out:
                return None
            cur = out[0]
        return cur

    def same(u, v):
        if u is None or v is None:
            return (u is None or u.f.is_zero()) and (v is None or v.f.is_zero())
        return u.t == v.t and u.f == v.f

    nonempty = [w for w in words if w]
    rep.start("skew (i) (1_a1 δ_a1)⋯(1_an δ_an) = 1_α δ_α")
    for w in nonempty:
        rep.record(same(prod([fwd((a,)) for a in w]), fwd(w)), _w(w))
    rep.start("skew (ii) (1_an⁻¹ δ_an⁻¹)⋯(1_a1⁻¹ δ_a1⁻¹) = 1_α⁻¹ δ_α⁻¹")
    for w in nonempty:
        rep.record(same(prod([bwd((a,)) for a in reversed(w)]), bwd(w)), _w(w))
    rep.start("skew (iii) (1_α δ_α)(1_α⁻¹ δ_α⁻¹) = 1_α δ_1")
    for w in nonempty:
        rep.record(same(prod([fwd(w), bwd(w)]), SkewTerm(IDENTITY, _ind(c_set(sh, (), w), ring))), _w(w))
    rep.start("skew (iv) (1_α⁻¹ δ_α⁻¹)(1_α δ_α) = 1_α⁻¹ δ_1")
    for w in nonempty:
        rep.record(same(prod([bwd(w), fwd(w)]), SkewTerm(IDENTITY, _ind(c_set(sh, w, ()), ring))), _w(w))
    rep.start("skew (v) (1_α δ_α)(1_β⁻¹ δ_β⁻¹) = 1_αβ⁻¹ δ_αβ⁻¹ for reduced αβ⁻¹")
    for a, b in itertools.product(nonempty, nonempty):
        if a[-1] == b[-1]:
            rep.skip()
            continue
        t = FreeGroupElement(a, b)
        rhs = SkewTerm(t, _ind(c_set(sh, b, a), ring))
        rep.record(same(prod([fwd(a), bwd(b)]), rhs), f"α={_w(a)}, β={_w(b)}")


def _labelled(rep, sh, letters, pool, ring):
    _boolean(rep, "labelled-space (i)", sh, [A for A in pool], ring, UNITAL, with_top=False)
    rep.start("labelled-space (ii) p_A s_a = s_a p_r(A,a), s_a* p_A = p_r(A,a) s_a*")
    for A in pool:
        pA = gen_p(A, ring)
        for a in letters:
            s, st = gen_s(sh, a, ring), gen_s_star(sh, a, ring)
            r = gen_p(relative_range(A, (a,)), ring)
            rep.record(pA * s == s * r and st * pA == r * st, f"A={A}, a={a}")
    rep.start("labelled-space (iii) s_a* s_a = p_r(a), s_b* s_a = 0 for b ≠ a")
    for a, b in itertools.product(letters, letters):
        lhs = gen_s_star(sh, b, ring) * gen_s(sh, a, ring)
        rhs = gen_p(relative_range(top(sh), (a,)), ring) if a == b else zero(sh, ring)
        rep.record(lhs == rhs, f"a={a}, b={b}")
    _partial_isometry(rep, "labelled-space (iv)", sh, letters, ring, UNITAL)
    rep.start("labelled-space (v) p_A = Σ s_a p_r(A,a) s_a* for regular A")
    for A in pool:
        if not is_regular(A):
            rep.skip()
            continue
        rhs = zero(sh, ring)
        for a in emitted_letters(A).members():
            rhs = rhs + gen_s(sh, a, ring) * gen_p(relative_range(A, (a,)), ring) * gen_s_star(sh, a, ring)
        rep.record(gen_p(A, ring) == rhs, f"A={A}")

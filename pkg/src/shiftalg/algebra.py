"""Subshift algebras in skew-ring normal form.

An element is a finite map t ↦ f_t from reduced free-group elements
t = αβ⁻¹ to locally constant functions supported in W_t.  Generators:
s_a = 1_{Z_a} δ_a, s_a* = 1_{F_a} δ_{a⁻¹}, p_A = 1_A δ_1.
"""
from .errors import ParseError, RingMismatch, TopUnavailable, Unprintable
from .partial import LocFn, SkewTerm, skew_mul, tau, domain_of
from .rings import ZZ
from .sets import c_set, in_B, is_unital, parse_set, relative_range, top, _Reader
from .words import FreeGroupElement, IDENTITY, fmt_word

UNITAL = "U"
PLAIN = "B"


def _tkey(shift, t):
    return (len(t.pos) + len(t.neg), len(t.pos), shift.word_key(t.pos), shift.word_key(t.neg))


class AlgebraElement:
    def __init__(self, shift, comps=None, ring=ZZ, flavor=UNITAL):
        self.shift = shift
        self.ring = ring
        self.flavor = flavor
        self.comps = {}
        for t, f in (comps or {}).items():
            if not f.is_zero():
                self.comps[t] = f.canonical()

    def _like(self, comps):
        return AlgebraElement(self.shift, comps, self.ring, self.flavor)

    def _check(self, other):
        if self.shift is not other.shift:
            raise ValueError("elements over different shifts")
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.flavor != other.flavor:
            raise RingMismatch("unital and non-unital elements cannot be combined")

    def __add__(self, other):
        self._check(other)
        out = dict(self.comps)
        for t, f in other.comps.items():
            out[t] = out[t] + f if t in out else f
        return self._like(out)

    def __neg__(self):
        return self._like({t: -f for t, f in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r):
        r = self.ring.norm(r)
        return self._like({t: f.scale(r) for t, f in self.comps.items()})

    def __mul__(self, other):
        return mul(self, other)

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return equals(self, other)

    __hash__ = None

    def terms(self):
        return [SkewTerm(t, self.comps[t]) for t in sorted(self.comps, key=lambda t: _tkey(self.shift, t))]

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        try:
            return f"AlgebraElement({to_text(self)})"
        except Unprintable:
            return f"AlgebraElement(<{len(self.comps)} components>)"


# ------------------------------------------------------------------ generators

def zero(shift, ring=ZZ, flavor=UNITAL):
    return AlgebraElement(shift, {}, ring, flavor)


def gen_p(A, ring=ZZ, flavor=UNITAL):
    if flavor == PLAIN and not in_B(A):
        raise TopUnavailable(f"p_A needs the top generator: {A} is not in the algebra without top")
    return AlgebraElement(A.shift, {IDENTITY: LocFn.indicator(A, 1, ring)}, ring, flavor)


def one(shift, ring=ZZ, flavor=UNITAL):
    if flavor == PLAIN and is_unital(shift) != "yes":
        raise TopUnavailable(f"{shift.name}: the non-unital algebra has no unit available")
    return gen_p(top(shift), ring, flavor)


def gen_s(shift, a, ring=ZZ, flavor=UNITAL):
    return s_word(shift, (a,), ring, flavor)


def gen_s_star(shift, a, ring=ZZ, flavor=UNITAL):
    return st_word(shift, (a,), ring, flavor)


def s_word(shift, alpha, ring=ZZ, flavor=UNITAL):
    """s_α = 1_{Z_α} δ_α (the product s_{α_1}⋯s_{α_n}); s_ω is the unit."""
    alpha = tuple(alpha)
    if not alpha:
        return one(shift, ring, flavor)
    A = c_set(shift, (), alpha)
    return AlgebraElement(shift, {FreeGroupElement(alpha, ()): LocFn.indicator(A, 1, ring)}, ring, flavor)


def st_word(shift, alpha, ring=ZZ, flavor=UNITAL):
    """s_α* = 1_{F_α} δ_{α⁻¹}."""
    alpha = tuple(alpha)
    if not alpha:
        return one(shift, ring, flavor)
    A = c_set(shift, alpha, ())
    return AlgebraElement(shift, {FreeGroupElement((), alpha): LocFn.indicator(A, 1, ring)}, ring, flavor)


def s_prod(shift, alpha, ring=ZZ, flavor=UNITAL):
    """s_{α_1}⋯s_{α_n} as an actual product of letter generators."""
    out = None
    for a in alpha:
        g = gen_s(shift, a, ring, flavor)
        out = g if out is None else out * g
    return out if out is not None else one(shift, ring, flavor)


def st_prod(shift, alpha, ring=ZZ, flavor=UNITAL):
    """s_α* = s_{α_n}*⋯s_{α_1}*."""
    out = None
    for a in reversed(tuple(alpha)):
        g = gen_s_star(shift, a, ring, flavor)
        out = g if out is None else out * g
    return out if out is not None else one(shift, ring, flavor)


def monomial(shift, alpha, A, beta, coef=1, ring=ZZ, flavor=UNITAL):
    """coef · s_α p_A s_β*, computed by multiplying generators."""
    x = gen_p(A, ring, flavor)
    if alpha:
        x = s_word(shift, alpha, ring, flavor) * x
    if beta:
        x = x * st_word(shift, beta, ring, flavor)
    return x.scale(coef)


# ------------------------------------------------------------------ operations

def mul(x, y):
    x._check(y)
    out = {}
    for s, f in x.comps.items():
        for t, g in y.comps.items():
            for term in skew_mul(SkewTerm(s, f), SkewTerm(t, g)):
                out[term.t] = out[term.t] + term.f if term.t in out else term.f
    return x._like(out)


def star(x):
    return x._like({t.inverse(): tau(t.inverse(), f) for t, f in x.comps.items()})


def degree_decompose(x):
    out = {}
    for t, f in x.comps.items():
        out.setdefault(t.degree, {})[t] = f
    return {d: x._like(c) for d, c in sorted(out.items())}


def equals(x, y):
    x._check(y)
    if set(x.comps) != set(y.comps):
        return False
    return all(x.comps[t] == y.comps[t] for t in x.comps)


def is_zero(x):
    return x.is_zero()


def e_M(shift, M, ring=ZZ, flavor=UNITAL):
    out = zero(shift, ring, flavor)
    for a in M:
        out = out + gen_s(shift, a, ring, flavor) * gen_s_star(shift, a, ring, flavor)
    return out


def tau_M(M, x):
    out = zero(x.shift, x.ring, x.flavor)
    for a in M:
        left = gen_s(x.shift, a, x.ring, x.flavor) * x
        if left.is_zero():
            continue
        for b in M:
            out = out + left * gen_s_star(x.shift, b, x.ring, x.flavor)
    return out


def unitize(x, r):
    """x + r·1 in the unital algebra."""
    y = AlgebraElement(x.shift, x.comps, x.ring, UNITAL)
    return y + one(x.shift, x.ring, UNITAL).scale(r)


def as_unital(x):
    return AlgebraElement(x.shift, x.comps, x.ring, UNITAL)


# ------------------------------------------------------------------ printing

def to_text(x):
    sh = x.shift
    if x.is_zero():
        return "0"
    parts = []
    for t in sorted(x.comps, key=lambda t: _tkey(sh, t)):
        f = x.comps[t]
        dom = None
        levels = []
        for v, L in f.level_sets().items():
            A = relative_range(L, t.pos)
            levels.append((str(A), v, A, L))
        levels.sort(key=lambda e: (e[0], repr(e[1])))
        for text, v, A, L in levels:
            facs = []
            if t.pos:
                facs.append(f"s({fmt_word(t.pos, '.') if len(t.pos) > 1 else fmt_word(t.pos)})")
            show_p = True
            if not t.is_identity():
                if dom is None:
                    dom = domain_of(sh, t)
                show_p = not (L == dom)
            if show_p:
                facs.append(f"p({text})")
            if t.neg:
                facs.append(f"st({fmt_word(t.neg, '.') if len(t.neg) > 1 else fmt_word(t.neg)})")
            body = "*".join(facs)
            if v == 1:
                term = body
            elif v == x.ring.norm(-1) and x.ring.name in ("ZZ", "QQ"):
                term = "-" + body
            else:
                term = f"{x.ring.fmt(v)}*{body}"
            parts.append(term)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ------------------------------------------------------------------ parsing

class _Scalar:
    def __init__(self, v):
        self.v = v


def parse_element(shift, text, ring=ZZ, flavor=UNITAL):
    rd = _Reader(text)
    val = _a_sum(shift, rd, ring, flavor)
    rd.ws()
    if rd.i != len(text):
        raise ParseError("unexpected trailing input", text, rd.i)
    return _lift(shift, val, ring, flavor)


def _lift(shift, v, ring, flavor):
    if isinstance(v, _Scalar):
        if not v.v:
            return zero(shift, ring, flavor)
        return one(shift, ring, flavor).scale(v.v)
    return v


def _a_sum(sh, rd, ring, fl):
    acc = _a_prod(sh, rd, ring, fl)
    while True:
        if rd.eat("+"):
            sign = 1
        elif rd.eat("-"):
            sign = -1
        else:
            return acc
        rhs = _a_prod(sh, rd, ring, fl)
        if isinstance(acc, _Scalar) and isinstance(rhs, _Scalar):
            acc = _Scalar(acc.v + sign * rhs.v)
            continue
        a = _lift(sh, acc, ring, fl)
        b = _lift(sh, rhs, ring, fl)
        acc = a + b if sign == 1 else a - b


def _a_prod(sh, rd, ring, fl):
    acc = _a_atom(sh, rd, ring, fl)
    while rd.eat("*"):
        rhs = _a_atom(sh, rd, ring, fl)
        if isinstance(acc, _Scalar) and isinstance(rhs, _Scalar):
            acc = _Scalar(ring.norm(acc.v * rhs.v))
        elif isinstance(acc, _Scalar):
            acc = rhs.scale(acc.v)
        elif isinstance(rhs, _Scalar):
            acc = acc.scale(rhs.v)
        else:
            acc = acc * rhs
    return acc


def _inner(rd):
    start = rd.i
    body = rd.until(")")
    rd.expect(")")
    return body, start


def _a_atom(sh, rd, ring, fl):
    rd.ws()
    txt = rd.text
    if rd.eat("("):
        v = _a_sum(sh, rd, ring, fl)
        rd.expect(")")
        return v
    if rd.eat("-"):
        v = _a_atom(sh, rd, ring, fl)
        return _Scalar(-v.v) if isinstance(v, _Scalar) else -v
    j = rd.i
    while j < len(txt) and (txt[j].isdigit() or txt[j] == "/"):
        j += 1
    if j > rd.i:
        num = txt[rd.i:j]
        try:
            v = ring.parse(num)
        except (ValueError, ZeroDivisionError, RingMismatch) as e:
            raise ParseError(str(e), txt, rd.i) from None
        rd.i = j
        return _Scalar(v)
    for head in ("st(", "s(", "p("):
        if rd.eat(head):
            body, start = _inner(rd)
            try:
                if head == "p(":
                    A = parse_set(sh, body, "U" if fl == UNITAL else "B")
                    return gen_p(A, ring, fl)
                w = sh.parse_word(body)
                return s_word(sh, w, ring, fl) if head == "s(" else st_word(sh, w, ring, fl)
            except ParseError as e:
                raise ParseError(str(e).rsplit(" (line", 1)[0], txt, start + e.pos) from None
            except ValueError as e:
                raise ParseError(str(e), txt, start) from None
    raise ParseError("expected s(w), st(w), p(set), a number or '('", txt, rd.i)

"""Points, shift map and generalised cylinders of the OTW compactification."""
from .errors import BadDepth, HypothesisViolated, UnsupportedBackend
from .intsets import IntSet
from .sets import c_set
from .shifts import RuleShift, normalize_point, point_shift
from .words import fmt_word, sub


class OTWPoint:
    """kind is 'inf' (pre, per), 'fin' (word) or 'zero'."""

    def __init__(self, shift, kind, pre=(), per=(), word=()):
        self.shift = shift
        self.kind = kind
        if kind == "inf":
            self.pre, self.per = normalize_point(pre, per)
            if not shift.contains_point(self.pre, self.per):
                raise HypothesisViolated(f"{fmt_word(pre)}({fmt_word(per)})^∞ is not a point of {shift.name}")
            self.word = ()
        elif kind == "fin":
            self.word = tuple(word)
            if not is_in_Xfin(shift, self.word) or not self.word:
                raise HypothesisViolated(f"{fmt_word(word)} is not a finite point of {shift.name}")
            self.pre = self.per = ()
        elif kind == "zero":
            if not is_in_Xfin(shift, ()):
                raise HypothesisViolated(f"the empty sequence is not a point of {shift.name}")
            self.pre = self.per = self.word = ()
        else:
            raise ValueError(f"unknown point kind {kind!r}")

    def key(self):
        return (self.kind, self.pre, self.per, self.word)

    def __eq__(self, other):
        return isinstance(other, OTWPoint) and self.shift is other.shift and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def letter(self, k):
        """k-th letter (1-based), or None past the end of a finite point."""
        if self.kind == "inf":
            if k <= len(self.pre):
                return self.pre[k - 1]
            return self.per[(k - len(self.pre) - 1) % len(self.per)]
        if k <= len(self.word):
            return self.word[k - 1]
        return None

    def __str__(self):
        if self.kind == "inf":
            return f"inf({fmt_word(self.pre, '.') if self.pre else ''};{fmt_word(self.per, '.')})"
        if self.kind == "fin":
            return f"fin({fmt_word(self.word, '.')})"
        return "zero"

    __repr__ = __str__


def parse_point(shift, text):
    from .errors import ParseError
    t = text.strip()
    try:
        if t == "zero":
            return OTWPoint(shift, "zero")
        if t.startswith("inf(") and t.endswith(")"):
            body = t[4:-1]
            if ";" not in body:
                raise ParseError("expected ';' between preperiod and period", text, len(text) - 1)
            a, b = body.split(";", 1)
            return OTWPoint(shift, "inf", shift.parse_word(a), shift.parse_word(b))
        if t.startswith("fin(") and t.endswith(")"):
            return OTWPoint(shift, "fin", word=shift.parse_word(t[4:-1]))
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e), text, 0) from None
    raise ParseError("expected inf(pre;per), fin(word) or zero", text, 0)


def otw_shift(p):
    sh = p.shift
    if p.kind == "inf":
        pre, per = point_shift(p.pre, p.per, 1)
        return OTWPoint(sh, "inf", pre, per)
    if p.kind == "fin" and len(p.word) >= 2:
        return OTWPoint(sh, "fin", word=p.word[1:])
    return OTWPoint(sh, "zero")


def _infinitely_many_followers(sh, R):
    """Do infinitely many letters have source in the vertex set R?"""
    for f in sh.families:
        if not f.infinite:
            continue
        free = f.idx - IntSet(f.overrides)
        if f.source[0] == "vertex":
            if f.source[1] in R:
                return True
        elif not (free & R.nums.shift(-f.source[1])).is_finite():
            return True
    return False


def is_in_Xfin(shift, w):
    if shift.finite_alphabet:
        return False
    if not isinstance(shift, RuleShift):
        raise UnsupportedBackend("finite points are decided only for rule-presented shifts")
    w = tuple(w)
    if not shift.is_in_language(w):
        return False
    if not w:
        return True
    return _infinitely_many_followers(shift, shift.range(w[-1]))


class GenCylinder:
    """𝒵(base, excluded): points starting with base whose next letter avoids excluded."""

    def __init__(self, shift, base, excluded=()):
        self.shift = shift
        self.base = tuple(base)
        self.excluded = frozenset(excluded)

    def __eq__(self, other):
        return (isinstance(other, GenCylinder) and self.base == other.base
                and self.excluded == other.excluded)

    def __hash__(self):
        return hash((self.base, self.excluded))

    def __str__(self):
        if not self.excluded:
            return f"𝒵({fmt_word(self.base)})"
        ex = ",".join(str(a) for a in sorted(self.excluded, key=self.shift.letter_key))
        return f"𝒵({fmt_word(self.base)},{{{ex}}})"

    __repr__ = __str__

    def contains(self, p):
        """Membership of an OTW point."""
        n = len(self.base)
        for k in range(1, n + 1):
            if p.letter(k) != self.base[k - 1]:
                return False
        nxt = p.letter(n + 1)
        return nxt is None or nxt not in self.excluded


def forward_image(z, n):
    """σⁿ(𝒵(α,F)) as the pair (𝒵(α_{n+1,|α|},F), α_{1,n}); the second entry names ℱ(α_{1,n})."""
    if n < 0 or n > len(z.base):
        raise BadDepth(f"n={n} exceeds the base length {len(z.base)}")
    a = z.base
    return GenCylinder(z.shift, sub(a, n + 1, len(a)), z.excluded), sub(a, 1, n)


def pullback_intersect(z1, n, z2):
    """𝒵(α,F) ∩ σ⁻ⁿ(𝒵(β,G)); None when empty."""
    sh = z1.shift
    a, F = z1.base, z1.excluded
    b, G = z2.base, z2.excluded
    if n < 0 or n > len(a):
        raise BadDepth(f"n={n} exceeds the base length {len(a)}")

    def cyl(g, h):
        return GenCylinder(sh, g, h) if sh.is_in_language(g) else None

    rest = len(a) - n
    if rest == 0 and not b:
        return cyl(a, F | G)
    if rest == 0:
        if b[0] in F:
            return None
        return cyl(a + b, G)
    if len(b) > rest:
        if b[:rest] != a[n:] or b[rest] in F:
            return None
        return cyl(a[:n] + b, G)
    if len(b) == rest:
        if b != a[n:]:
            return None
        return cyl(a, F | G)
    if b != a[n:n + len(b)] or a[n + len(b)] in G:
        return None
    return cyl(a, F)


def restrict_to_Xinf(z):
    """𝒵(α,F) ∩ X^inf as a set of the algebra."""
    sh = z.shift
    A = c_set(sh, (), z.base)
    for x in sorted(z.excluded, key=sh.letter_key):
        A = A - c_set(sh, (), z.base + (x,))
    return A

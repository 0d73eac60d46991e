"""Letters, words and reduced elements of the free group on the alphabet."""
from typing import NamedTuple, Tuple

RESIDUE = -1


class Letter(NamedTuple):
    family: str
    index: object = None   # None for a bare symbol, int for indexed families

    def __str__(self):
        if self.index is None:
            return self.family
        if self.index == RESIDUE:
            return self.family + "*"
        return f"{self.family}{self.index}"

    @property
    def is_residue(self):
        return self.index == RESIDUE


Word = Tuple[Letter, ...]
EMPTY: Word = ()


def fmt_word(w, sep=""):
    if not w:
        return "ω"
    parts = [str(a) for a in w]
    if sep == "" and any(len(p) > 1 for p in parts):
        sep = "."
    return sep.join(parts)


def sub(w, i, j):
    """1-based inclusive slice; empty when i > j."""
    if i > j:
        return EMPTY
    return tuple(w[i - 1:j])


def common_suffix_len(a, b):
    n = 0
    while n < len(a) and n < len(b) and a[-1 - n] == b[-1 - n]:
        n += 1
    return n


class FreeGroupElement(NamedTuple):
    """Reduced element pos·neg⁻¹."""
    pos: Word
    neg: Word

    def inverse(self):
        return FreeGroupElement(self.neg, self.pos)

    @property
    def degree(self):
        return len(self.pos) - len(self.neg)

    def is_identity(self):
        return not self.pos and not self.neg

    def __str__(self):
        if self.is_identity():
            return "1"
        if not self.neg:
            return fmt_word(self.pos)
        if not self.pos:
            return f"({fmt_word(self.neg)})^-1"
        return f"{fmt_word(self.pos)}({fmt_word(self.neg)})^-1"


IDENTITY = FreeGroupElement(EMPTY, EMPTY)


class NotPositiveNegativeShape:
    """Marker for products that do not reduce to the form αβ⁻¹."""
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NotPositiveNegativeShape"


NOT_PN = NotPositiveNegativeShape()


def fg_from_pair(alpha, beta):
    alpha = tuple(alpha)
    beta = tuple(beta)
    n = common_suffix_len(alpha, beta)
    if n:
        alpha = alpha[:-n]
        beta = beta[:-n]
    return FreeGroupElement(alpha, beta)


def fg_mul(s, t):
    a, b = s.pos, s.neg
    c, d = t.pos, t.neg
    # b⁻¹c: cancel the common prefix
    k = 0
    while k < len(b) and k < len(c) and b[k] == c[k]:
        k += 1
    b2, c2 = b[k:], c[k:]
    if b2 and c2:
        return NOT_PN
    if not b2:
        return fg_from_pair(a + c2, d)
    return fg_from_pair(a, d + b2)


def fg_reduce(syms):
    """Free reduction of a sequence of (letter, ±1); generic oracle."""
    out = []
    for x, e in syms:
        if out and out[-1][0] == x and out[-1][1] == -e:
            out.pop()
        else:
            out.append((x, e))
    return tuple(out)


def fg_to_syms(t):
    return tuple((a, 1) for a in t.pos) + tuple((a, -1) for a in reversed(t.neg))


def syms_to_fg(syms):
    """Inverse of fg_to_syms; NOT_PN when the reduced word is not αβ⁻¹."""
    i = 0
    while i < len(syms) and syms[i][1] == 1:
        i += 1
    if any(e == 1 for _, e in syms[i:]):
        return NOT_PN
    pos = tuple(x for x, _ in syms[:i])
    neg = tuple(x for x, _ in reversed(syms[i:]))
    return FreeGroupElement(pos, neg)

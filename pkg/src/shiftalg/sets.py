"""Elements of the Boolean algebras generated by the sets C(α, β).

A set is stored as a finite set of cells of its shift at some window and
depth (see ``shifts``).  Two sets are compared by lifting both to a common
window and depth, where equal sets have equal cell sets.
"""
from functools import reduce

from .errors import TopUnavailable, ParseError, Unprintable, ClosureViolation
from .intsets import EMPTY_INTS
from .words import Letter, fmt_word


class USet:
    __slots__ = ("shift", "W", "N", "cells", "flavor")

    def __init__(self, shift, W, N, cells, flavor="U"):
        self.shift = shift
        self.W = W
        self.N = N
        self.cells = frozenset(cells)
        self.flavor = flavor

    # lifting -------------------------------------------------------------
    def lift(self, W2, N2):
        if W2 == self.W and N2 == self.N:
            return self
        sh = self.shift
        out = set()
        for c in self.cells:
            out.update(sh.refine(self.W, self.N, c, W2, N2))
        return USet(sh, W2, N2, out, self.flavor)

    def _common(self, other):
        if other.shift is not self.shift:
            raise ValueError("sets over different shifts")
        W = self.shift.join(self.W, other.W)
        N = max(self.N, other.N)
        return self.lift(W, N), other.lift(W, N)

    def with_flavor(self, flavor):
        return USet(self.shift, self.W, self.N, self.cells, flavor)

    # Boolean structure -----------------------------------------------------
    def __or__(self, other):
        a, b = self._common(other)
        fl = "B" if (self.flavor == "B" and other.flavor == "B") else "U"
        return USet(a.shift, a.W, a.N, a.cells | b.cells, fl)

    def __and__(self, other):
        a, b = self._common(other)
        fl = "B" if "B" in (self.flavor, other.flavor) else "U"
        return USet(a.shift, a.W, a.N, a.cells & b.cells, fl)

    def __sub__(self, other):
        a, b = self._common(other)
        return USet(a.shift, a.W, a.N, a.cells - b.cells, self.flavor)

    def complement(self):
        if self.flavor == "B":
            raise TopUnavailable("complement in X is not available without the top generator")
        allc = self.shift.cells(self.W, self.N)
        return USet(self.shift, self.W, self.N, set(allc) - self.cells, "U")

    def is_empty(self):
        return not self.cells

    def __eq__(self, other):
        if not isinstance(other, USet):
            return NotImplemented
        a, b = self._common(other)
        return a.cells == b.cells

    __hash__ = None

    def issubset(self, other):
        a, b = self._common(other)
        return a.cells <= b.cells

    def isdisjoint(self, other):
        a, b = self._common(other)
        return not (a.cells & b.cells)

    # canonical depth --------------------------------------------------------
    def canonical(self):
        """Same set at the least depth representing it (window unchanged)."""
        sh = self.shift
        cur = self
        while cur.N > 0:
            groups = {}
            for c in cur.cells:
                groups.setdefault(sh.coarsen(cur.W, cur.N, c, cur.W, cur.N - 1), []).append(c)
            ok = all(len(sh.refine(cur.W, cur.N - 1, k, cur.W, cur.N)) == len(v) for k, v in groups.items())
            if not ok:
                break
            cur = USet(sh, cur.W, cur.N - 1, groups.keys(), cur.flavor)
        return cur

    def contains_point(self, pre, per):
        c = self.shift.point_cell(self.W, self.N, pre, per)
        return c in self.cells

    def __repr__(self):
        try:
            return f"USet({to_text(self)})"
        except Unprintable:
            return f"USet(<{len(self.cells)} cells at depth {self.N}>)"

    def __str__(self):
        return to_text(self)


# ------------------------------------------------------------------ generators

def c_set(shift, alpha, beta, flavor="U"):
    alpha, beta = tuple(alpha), tuple(beta)
    if flavor == "B" and not alpha and not beta:
        raise TopUnavailable("C(ω,ω) = X is not a generator of the algebra without top")
    W = shift.window_for(alpha + beta)
    N = len(beta)
    if not shift.is_in_language(alpha) or not shift.is_in_language(beta):
        return USet(shift, W, 0, (), flavor)
    cells = [c for c in shift.cells(W, N) if shift.in_C(W, c, alpha, beta)]
    return USet(shift, W, N, cells, flavor).canonical()


def cyl(shift, beta, flavor="U"):
    return c_set(shift, (), beta, flavor)


def fol(shift, alpha, flavor="U"):
    return c_set(shift, alpha, (), flavor)


def top(shift):
    W = shift.base_window()
    return USet(shift, W, 0, shift.cells(W, 0), "U")


def empty(shift, flavor="U"):
    return USet(shift, shift.base_window(), 0, (), flavor)


def bool_op(op, A, B=None):
    if op == "union":
        return A | B
    if op == "intersect":
        return A & B
    if op == "relative_complement":
        return A - B
    if op == "complement_in_X":
        return A.complement()
    raise ValueError(f"unknown operation {op!r}")


def relative_range(A, alpha):
    """r(A, α) = {x : αx ∈ A}."""
    alpha = tuple(alpha)
    if not alpha:
        return A
    sh = A.shift
    W = sh.join(A.W, sh.window_for(alpha))
    N = max(A.N, len(alpha))
    L = A.lift(W, N)
    k = len(alpha)
    cells = [c[k:] for c in L.cells if c[:k] == alpha]
    return USet(sh, W, N - k, cells, A.flavor).canonical()


def prepend(a, A):
    """aA = {ax ∈ X : x ∈ A}."""
    sh = A.shift
    W = sh.join(A.W, sh.window_for((a,)))
    L = A.lift(W, A.N)
    cells = [(a,) + c for c in L.cells if sh.realizable(W, (a,) + c)]
    return USet(sh, W, A.N + 1, cells, A.flavor).canonical()


def prepend_word(alpha, A):
    for a in reversed(tuple(alpha)):
        A = prepend(a, A)
    return A


class LetterSet:
    """Explicit letters plus, per infinite family, a finite/cofinite index set."""

    def __init__(self, letters, families=None):
        self.letters = tuple(letters)
        self.families = {k: v for k, v in (families or {}).items() if v}

    @property
    def finite(self):
        return all(v.is_finite() for v in self.families.values())

    def members(self):
        out = list(self.letters)
        for fam, idx in self.families.items():
            if idx.is_finite():
                out.extend(Letter(fam, i) for i in sorted(idx.fin))
        return out

    def __len__(self):
        if not self.finite:
            raise ValueError("infinite letter set")
        return len(self.members())

    def __contains__(self, a):
        return a in self.letters or (a.family in self.families and a.index in self.families[a.family])

    def __str__(self):
        parts = [str(a) for a in self.letters]
        for fam, idx in self.families.items():
            if idx.is_finite():
                parts.extend(f"{fam}{i}" for i in sorted(idx.fin))
            else:
                parts.append(f"{fam}_i for i in {idx!r}")
        return "{" + ", ".join(parts) + "}"


def emitted_letters(A):
    """{a : Z_a ∩ A ≠ ∅}."""
    sh = A.shift
    L = A.lift(A.W, max(A.N, 1))
    explicit = set()
    fams = {}
    for c in L.cells:
        a = c[0]
        if sh.is_explicit(a):
            explicit.add(a)
        else:
            idx = sh.residue_first_indices(L.W, c)
            fams[a.family] = fams.get(a.family, EMPTY_INTS) | idx
    return LetterSet(sorted(explicit, key=sh.letter_key), fams)


def is_regular(A):
    em = emitted_letters(A)
    return em.finite and len(em) > 0


def in_B(A):
    """Is A in the algebra generated by the C(α, β) with (α, β) ≠ (ω, ω)?

    Equivalent to A lying inside a finite union of cylinders Z_a and
    follower sets F_α with α nonempty.
    """
    sh = A.shift
    if sh.finite_alphabet:
        return True
    L = A.lift(A.W, max(A.N, 1))
    for c in L.cells:
        if sh.is_explicit(c[0]):
            continue
        idx = sh.residue_first_indices(L.W, c)
        if idx.is_finite():
            continue
        f = sh.fam[c[0].family]
        if f.source[0] == "vertex":
            if not sh.letter_covers_vertex(f.source[1]):
                return False
        elif not sh.has_cofinite_range():
            return False
    return True


def is_unital(shift):
    """'yes' when X lies in the top-free algebra, 'no' when it provably does not."""
    if shift.finite_alphabet:
        return "yes"
    try:
        return "yes" if in_B(top(shift)) else "no"
    except ClosureViolation:
        return "unknown"


def atoms(gens, shift=None):
    """Nonempty atoms of the Boolean algebra generated by gens and X."""
    gens = list(gens)
    sh = shift if shift is not None else gens[0].shift
    W = reduce(sh.join, [g.W for g in gens], sh.base_window())
    N = max([g.N for g in gens] + [0])
    lifted = [g.lift(W, N).cells for g in gens]
    groups = {}
    for c in sh.cells(W, N):
        sig = tuple(c in g for g in lifted)
        groups.setdefault(sig, []).append(c)
    return [USet(sh, W, N, cs, "U") for cs in groups.values()]


# ------------------------------------------------------------------ parsing

class _Reader:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self, s):
        self.ws()
        return self.text.startswith(s, self.i)

    def eat(self, s):
        if self.peek(s):
            self.i += len(s)
            return True
        return False

    def expect(self, s):
        if not self.eat(s):
            raise ParseError(f"expected {s!r}", self.text, self.i)

    def until(self, stops):
        j = self.i
        depth = 0
        while j < len(self.text):
            ch = self.text[j]
            if depth == 0 and ch in stops:
                break
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            j += 1
        if j >= len(self.text):
            raise ParseError(f"expected one of {stops!r}", self.text, j)
        s = self.text[self.i:j]
        self.i = j
        return s


def parse_set_ast(shift, text):
    rd = _Reader(text)
    ast = _p_union(shift, rd)
    rd.ws()
    if rd.i != len(text):
        raise ParseError("unexpected trailing input", text, rd.i)
    return ast


def _word(shift, rd, raw):
    try:
        return shift.parse_word(raw)
    except ValueError as e:
        raise ParseError(str(e), rd.text, rd.i) from None


def _p_union(sh, rd):
    left = _p_diff(sh, rd)
    while rd.eat("|") or rd.eat("∪"):
        left = ("|", left, _p_diff(sh, rd))
    return left


def _p_diff(sh, rd):
    left = _p_inter(sh, rd)
    while rd.eat("\\"):
        left = ("\\", left, _p_inter(sh, rd))
    return left


def _p_inter(sh, rd):
    left = _p_unary(sh, rd)
    while rd.eat("&") or rd.eat("∩"):
        left = ("&", left, _p_unary(sh, rd))
    return left


def _p_unary(sh, rd):
    if rd.eat("~"):
        return ("~", _p_unary(sh, rd))
    return _p_primary(sh, rd)


def _p_primary(sh, rd):
    rd.ws()
    if rd.eat("("):
        e = _p_union(sh, rd)
        rd.expect(")")
        return e
    if rd.eat("∅") or rd.eat("empty"):
        return ("empty",)
    for head in ("C(", "Z(", "F("):
        if rd.eat(head):
            if head == "C(":
                a = _word(sh, rd, rd.until(","))
                rd.expect(",")
                b = _word(sh, rd, rd.until(")"))
                rd.expect(")")
                return ("C", a, b)
            w = _word(sh, rd, rd.until(")"))
            rd.expect(")")
            return ("Z", w) if head == "Z(" else ("F", w)
    if rd.eat("X"):
        return ("X",)
    raise ParseError("expected a set expression", rd.text, rd.i)


def eval_set_ast(shift, ast, flavor="U"):
    op = ast[0]
    if op == "X":
        if flavor == "B":
            raise TopUnavailable("X is not available without the top generator")
        return top(shift)
    if op == "empty":
        return empty(shift, flavor)
    if op == "C":
        return c_set(shift, ast[1], ast[2], flavor)
    if op == "Z":
        return c_set(shift, (), ast[1], flavor)
    if op == "F":
        return c_set(shift, ast[1], (), flavor)
    if op == "~":
        return eval_set_ast(shift, ast[1], flavor).complement()
    a = eval_set_ast(shift, ast[1], flavor)
    b = eval_set_ast(shift, ast[2], flavor)
    if op == "|":
        return a | b
    if op == "&":
        return a & b
    return a - b


def parse_set(shift, text, flavor="U"):
    return eval_set_ast(shift, parse_set_ast(shift, text), flavor)


def point_in_ast(shift, ast, pre, per):
    """Membership of the eventually periodic point pre·per^∞ of X, decided directly."""
    op = ast[0]
    if op == "X":
        return True
    if op == "empty":
        return False
    if op == "C":
        alpha, beta = ast[1], ast[2]
    elif op == "Z":
        alpha, beta = (), ast[1]
    elif op == "F":
        alpha, beta = ast[1], ()
    if op in ("C", "Z", "F"):
        return point_in_c(shift, alpha, beta, pre, per)
    if op == "~":
        return not point_in_ast(shift, ast[1], pre, per)
    a = point_in_ast(shift, ast[1], pre, per)
    b = point_in_ast(shift, ast[2], pre, per)
    if op == "|":
        return a or b
    if op == "&":
        return a and b
    return a and not b


def point_in_c(shift, alpha, beta, pre, per):
    from .shifts import point_prefix, point_shift
    k = len(beta)
    if point_prefix(pre, per, k) != tuple(beta):
        return False
    p2, q2 = point_shift(pre, per, k)
    return shift.contains_point(tuple(alpha) + p2, q2)


# ------------------------------------------------------------------ printing

def to_text(A):
    sh = A.shift
    if A.is_empty():
        return "∅"
    A = A.canonical()
    if sh.finite_alphabet and not hasattr(sh, "families"):
        windows = [A.W]
    else:
        windows = [sh.grow_window(A.W, j) for j in range(0, A.N + 4)]
    for W in windows:
        best = None
        for N in (A.N, A.N + 1):
            B = A.lift(W, N)
            s = _tree_text(sh, W, N, B.cells)
            if s is not None and (best is None or len(s) < len(best)):
                best = s
        if best is not None:
            return best
    raise Unprintable("no window of the tried sizes separates this set by cylinders and follower sets")


def _zname(sh, p):
    if not p:
        return sh.top_name()
    return f"Z({fmt_word(p)})"


def _cname(alpha, p):
    if not alpha:
        return f"Z({fmt_word(p)})"
    if not p:
        return f"F({fmt_word(alpha)})"
    return f"C({fmt_word(alpha)},{fmt_word(p)})"


def _tree_text(sh, W, N, S):
    allc = sh.cells(W, N)
    S = set(S)
    gens = sh.follower_generators(W)

    def rec(p, Sp, Fp):
        if Sp == Fp:
            return _zname(sh, p)
        k = len(p)
        if k == N:
            return tail_text(p, {c[-1] for c in Sp}, {c[-1] for c in Fp})
        res_F = {c for c in Fp if not sh.is_explicit(c[k])}
        res_S = {c for c in Sp if not sh.is_explicit(c[k])}
        if res_S and res_S != res_F:
            return None
        kids = []
        for c in Fp:
            b = c[k]
            if sh.is_explicit(b) and b not in kids:
                kids.append(b)
        kids.sort(key=sh.letter_key)
        parts = []
        if res_S:
            minus = []
            for b in kids:
                Fb = {c for c in Fp if c[k] == b}
                Sb = {c for c in Sp if c[k] == b}
                if Sb == Fb:
                    continue
                minus.append(_zname(sh, p + (b,)))
                if Sb:
                    r = rec(p + (b,), Sb, Fb)
                    if r is None:
                        return None
                    parts.append(r)
            parts.insert(0, _zname(sh, p) + "".join(" \\ " + m for m in minus))
        else:
            for b in kids:
                Sb = {c for c in Sp if c[k] == b}
                if not Sb:
                    continue
                Fb = {c for c in Fp if c[k] == b}
                r = rec(p + (b,), Sb, Fb)
                if r is None:
                    return None
                parts.append(r)
        return " | ".join(parts)

    def tail_text(p, chosen, allt):
        sig = {t: tuple(bool(pred(t)) for _, pred in gens) for t in allt}
        chosen_sigs = {sig[t] for t in chosen}
        if any(sig[t] in chosen_sigs for t in allt - chosen):
            return None
        for alpha, pred in gens:
            pos = {t for t in allt if pred(t)}
            if chosen == pos:
                return _cname(alpha, p)
            if chosen == allt - pos:
                return _zname(sh, p) + " \\ " + _cname(alpha, p)
        terms = []
        for s in sorted(chosen_sigs, reverse=True):
            pos = [_cname(gens[j][0], p) for j in range(len(gens)) if s[j]]
            neg = [_cname(gens[j][0], p) for j in range(len(gens)) if not s[j]]
            term = " & ".join(pos) if pos else _zname(sh, p)
            term += "".join(" \\ " + n for n in neg)
            terms.append(term)
        return " | ".join(terms)

    return rec((), S, set(allc))

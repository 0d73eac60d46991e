"""The partial action of the free group on X and skew-ring term multiplication.

For t = αβ⁻¹ the domain W_t is C(β, α) and τ̂_t sends βx to αx.  Functions
are finitely supported combinations of cell indicators (``LocFn``); the
dual action on them is τ_t(f) = f ∘ τ̂_{t⁻¹}.
"""
from typing import NamedTuple

from .rings import ZZ
from .errors import RingMismatch
from .sets import USet, c_set, empty
from .words import FreeGroupElement, NOT_PN, IDENTITY, fg_mul


class LocFn:
    """Locally constant function with values in ring, stored on the cells at (W, N)."""
    __slots__ = ("shift", "W", "N", "vals", "ring")

    def __init__(self, shift, W, N, vals, ring=ZZ):
        self.shift = shift
        self.W = W
        self.N = N
        self.ring = ring
        out = {}
        for c, v in vals.items():
            v = ring.norm(v)
            if v:
                out[c] = v
        self.vals = out

    @classmethod
    def indicator(cls, A, coef=1, ring=ZZ):
        return cls(A.shift, A.W, A.N, {c: coef for c in A.cells}, ring)

    @classmethod
    def zero(cls, shift, ring=ZZ):
        return cls(shift, shift.base_window(), 0, {}, ring)

    def is_zero(self):
        return not self.vals

    def lift(self, W2, N2):
        if W2 == self.W and N2 == self.N:
            return self
        sh = self.shift
        out = {}
        for c, v in self.vals.items():
            for d in sh.refine(self.W, self.N, c, W2, N2):
                out[d] = v
        return LocFn(sh, W2, N2, out, self.ring)

    def _common(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        W = self.shift.join(self.W, other.W)
        N = max(self.N, other.N)
        return self.lift(W, N), other.lift(W, N)

    def __add__(self, other):
        a, b = self._common(other)
        out = dict(a.vals)
        for c, v in b.vals.items():
            out[c] = out.get(c, 0) + v
        return LocFn(a.shift, a.W, a.N, out, a.ring).canonical()

    def __neg__(self):
        return LocFn(self.shift, self.W, self.N, {c: -v for c, v in self.vals.items()}, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r):
        return LocFn(self.shift, self.W, self.N, {c: r * v for c, v in self.vals.items()}, self.ring)

    def __mul__(self, other):
        a, b = self._common(other)
        out = {c: v * b.vals[c] for c, v in a.vals.items() if c in b.vals}
        return LocFn(a.shift, a.W, a.N, out, a.ring).canonical()

    def support(self):
        return USet(self.shift, self.W, self.N, self.vals.keys())

    def restrict(self, A):
        return self * LocFn.indicator(A, 1, self.ring)

    def level_sets(self):
        """value -> USet, in first-appearance order of sorted cells."""
        out = {}
        for c in sorted(self.vals, key=repr):
            out.setdefault(self.vals[c], []).append(c)
        return {v: USet(self.shift, self.W, self.N, cs).canonical() for v, cs in out.items()}

    def canonical(self):
        sh = self.shift
        cur = self
        while cur.N > 0:
            groups = {}
            for c, v in cur.vals.items():
                groups.setdefault(sh.coarsen(cur.W, cur.N, c, cur.W, cur.N - 1), []).append(v)
            ok = all(len(set(vs)) == 1 and len(sh.refine(cur.W, cur.N - 1, k, cur.W, cur.N)) == len(vs)
                     for k, vs in groups.items())
            if not ok:
                break
            cur = LocFn(sh, cur.W, cur.N - 1, {k: vs[0] for k, vs in groups.items()}, cur.ring)
        return cur

    def __eq__(self, other):
        if not isinstance(other, LocFn):
            return NotImplemented
        a, b = self._common(other)
        return a.vals == b.vals

    __hash__ = None

    def at_point(self, pre, per):
        return self.vals.get(self.shift.point_cell(self.W, self.N, pre, per), self.ring.norm(0))

    def __repr__(self):
        return f"LocFn(N={self.N}, {len(self.vals)} cells)"


class SkewTerm(NamedTuple):
    t: FreeGroupElement
    f: LocFn


def domain_of(shift, t):
    """W_t; empty when t is not of the form αβ⁻¹."""
    if t is NOT_PN:
        return empty(shift)
    return c_set(shift, t.neg, t.pos)


def _push(shift, W, N, cells, t):
    """Cells of W_{t⁻¹} at (W, N) with N ≥ |β| mapped by βc ↦ αc."""
    alpha, beta = t.pos, t.neg
    k = len(beta)
    out = {}
    for c, v in cells.items():
        if tuple(c[:k]) != beta:
            continue
        if not shift.in_C(W, c, alpha, beta):
            continue
        out[alpha + tuple(c[k:])] = v
    return out


def _prep(shift, t, W, N):
    W2 = shift.join(W, shift.window_for(t.pos + t.neg))
    return W2, max(N, len(t.neg))


def tau_hat_apply(t, B):
    """τ̂_t(B ∩ W_{t⁻¹})."""
    sh = B.shift
    if t is NOT_PN:
        return empty(sh)
    if t.is_identity():
        return B
    W, N = _prep(sh, t, B.W, B.N)
    L = B.lift(W, N)
    img = _push(sh, W, N, {c: 1 for c in L.cells}, t)
    return USet(sh, W, N - len(t.neg) + len(t.pos), img.keys(), B.flavor).canonical()


def tau(t, f):
    """τ_t(f) = f ∘ τ̂_{t⁻¹}, supported in W_t (f is first cut down to W_{t⁻¹})."""
    sh = f.shift
    if t is NOT_PN:
        return LocFn.zero(sh, f.ring)
    if t.is_identity():
        return f
    W, N = _prep(sh, t, f.W, f.N)
    L = f.lift(W, N)
    img = _push(sh, W, N, L.vals, t)
    return LocFn(sh, W, N - len(t.neg) + len(t.pos), img, f.ring).canonical()


def skew_mul(u, v):
    """(f_s δ_s)(g_t δ_t) = τ_s(τ_{s⁻¹}(f_s) g_t) δ_{st}; returns a list of at most one term."""
    s, fs = u
    t, gt = v
    h = tau(s, tau(s.inverse(), fs) * gt)
    st = fg_mul(s, t)
    if st is NOT_PN:
        assert h.is_zero(), "nonzero function on an empty domain"
        return []
    if h.is_zero():
        return []
    return [SkewTerm(st, h)]


def one_term(shift, ring=ZZ):
    from .sets import top
    return SkewTerm(IDENTITY, LocFn.indicator(top(shift), 1, ring))

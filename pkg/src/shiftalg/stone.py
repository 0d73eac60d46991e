"""Finite-depth Stone dual, the map σ̂, the cover map π and truncated groupoid arrows.

Level k uses the generators Z_w (|w| ≤ k) and C(α, β) (|α|, |β| ≤ k) over a
letter window (the first k letters of each infinite family).  Its atoms are
the points of the finite Stone dual at depth k.  σ̂ sends level-k atoms to
level-(k-1) atoms.
"""
import json
from functools import reduce

from .errors import DepthInsufficient, Inconsistent, NotInDomain, Unprintable
from .sets import USet, c_set, to_text
from .shifts import point_prefix, point_shift
from .words import fmt_word


def window_letters(shift, k):
    if shift.finite_alphabet:
        letters = []
        for f in getattr(shift, "families", ()):
            letters.extend(f.letters())
        return tuple(letters) if letters else tuple(shift.alphabet)
    out = []
    for f in shift.families:
        out.extend(f.letters(k) if f.infinite else f.letters())
        if f.infinite:
            out.extend(a for a in shift.pinned() if a.family == f.name and a not in out)
    return tuple(sorted(set(out), key=shift.letter_key))


def words_upto(shift, letters, k):
    out = [()]
    layer = [()]
    for _ in range(k):
        layer = [w + (a,) for w in layer for a in letters if shift.is_in_language(w + (a,))]
        out.extend(layer)
    return out


def _follower_key(shift, alpha):
    if not alpha:
        return ("all",)
    if hasattr(shift, "delta"):
        return ("q", shift.state_of(alpha))
    return ("r", shift.range(alpha[-1]))


class Level:
    """Atoms of the depth-k generator algebra."""

    def __init__(self, shift, k):
        self.shift = shift
        self.k = k
        letters = window_letters(shift, k)
        self.letters = letters
        words = words_upto(shift, letters, k)
        reps = {}
        for a in words:
            reps.setdefault(_follower_key(shift, a), a)
        gens = [c_set(shift, (), w) for w in words if w]
        for a in reps.values():
            for b in words:
                if a or b:
                    gens.append(c_set(shift, a, b))
        self.gens = gens
        W = reduce(shift.join, [g.W for g in gens], shift.window_for(letters))
        self.W, self.N = W, k
        lifted = [g.lift(W, k).cells for g in gens]
        groups = {}
        for c in shift.cells(W, k):
            sig = tuple(c in g for g in lifted)
            groups.setdefault(sig, []).append(c)
        atoms = sorted((tuple(cs) for cs in groups.values()), key=lambda cs: _cell_key(shift, cs[0]))
        self.atoms = atoms
        self.index = {c: i for i, cs in enumerate(atoms) for c in cs}

    def atom_set(self, i):
        return USet(self.shift, self.W, self.N, self.atoms[i])

    def __len__(self):
        return len(self.atoms)

    def locate_cell(self, W, N, cell):
        """Atom containing a cell given at a finer or equal (W, N)."""
        return self.index[self.shift.coarsen(W, N, cell, self.W, self.N)]


def _cell_key(shift, c):
    return tuple((0, shift.letter_key(x)) if hasattr(x, "family") else (1, repr(x)) for x in c)


class Stone:
    """Cache of levels for one shift."""

    def __init__(self, shift):
        self.shift = shift
        self._levels = {}

    def level(self, k):
        if k < 0:
            raise DepthInsufficient("negative depth")
        if k not in self._levels:
            self._levels[k] = Level(self.shift, k)
        return self._levels[k]


_stones = {}


def stone_of(shift):
    s = _stones.get(id(shift))
    if s is None or s.shift is not shift:
        s = Stone(shift)
        _stones[id(shift)] = s
    return s


class UltraApprox:
    __slots__ = ("shift", "k", "i")

    def __init__(self, shift, k, i):
        self.shift = shift
        self.k = k
        self.i = i

    @property
    def level(self):
        return stone_of(self.shift).level(self.k)

    @property
    def cells(self):
        return self.level.atoms[self.i]

    def atom(self):
        return self.level.atom_set(self.i)

    def __eq__(self, other):
        return isinstance(other, UltraApprox) and (self.k, self.i) == (other.k, other.i) and self.shift is other.shift

    def __hash__(self):
        return hash((self.k, self.i))

    def text(self):
        try:
            return to_text(self.atom())
        except Unprintable:
            return f"atom {self.i}"

    def __repr__(self):
        return f"UltraApprox(depth={self.k}, #{self.i})"


def atoms_at(shift, k):
    lv = stone_of(shift).level(k)
    return [UltraApprox(shift, k, i) for i in range(len(lv))]


def point_to_ultra(shift, pre, per, k):
    """ι(x) at depth k for the eventually periodic point pre·per^∞."""
    lv = stone_of(shift).level(k)
    c = shift.point_cell(lv.W, lv.N, pre, per)
    return UltraApprox(shift, k, lv.index[c])


def coarsen(xi, k):
    """Image of ξ at a coarser depth."""
    if k > xi.k:
        raise DepthInsufficient(f"cannot refine depth {xi.k} to {k}")
    if k == xi.k:
        return xi
    lv = xi.level
    target = stone_of(xi.shift).level(k)
    return UltraApprox(xi.shift, k, target.locate_cell(lv.W, lv.N, xi.cells[0]))


def first_letter(xi):
    firsts = {c[0] for c in xi.cells} if xi.k > 0 else set()
    if len(firsts) != 1:
        return None
    a = next(iter(firsts))
    return a if xi.shift.is_explicit(a) else None


def sigma_hat(xi):
    sh = xi.shift
    a = first_letter(xi)
    if a is None:
        raise NotInDomain(f"{xi!r} is not inside a single cylinder Z_a at this depth")
    lv = xi.level
    target = stone_of(sh).level(xi.k - 1)
    hits = {target.locate_cell(lv.W, lv.N - 1, c[1:]) for c in xi.cells}
    if len(hits) != 1:
        raise Inconsistent(f"relative range of {xi!r} meets several atoms")
    return UltraApprox(sh, xi.k - 1, hits.pop())


def sigma_hat_iter(xi, n):
    for _ in range(n):
        xi = sigma_hat(xi)
    return xi


def phi_hat(a, xi):
    """φ̂_a(ξ): the atom of a·A (A the atom of ξ), one depth lower."""
    sh = xi.shift
    lv = xi.level
    if xi.k < 1:
        raise DepthInsufficient("φ̂ needs depth at least 1")
    W = sh.join(lv.W, sh.window_for((a,)))
    cells = []
    for c in xi.cells:
        for d in sh.refine(lv.W, lv.N, c, W, lv.N):
            e = (a,) + d
            if sh.realizable(W, e):
                cells.append(e)
    if not cells:
        raise NotInDomain(f"{xi!r} does not lie in F_{a}")
    target = stone_of(sh).level(xi.k - 1)
    hits = {target.locate_cell(W, lv.N + 1, e) for e in cells}
    if len(hits) != 1:
        raise Inconsistent(f"a·atom meets several atoms for a={a}")
    return UltraApprox(sh, xi.k - 1, hits.pop())


def pi(xi, extend=8):
    """(forced prefix, status) with status 'exact', 'truncated' or 'zero'."""
    sh = xi.shift
    lv = xi.level
    cells = list(xi.cells)
    prefix = []
    for pos in range(lv.N):
        cls = {c[pos] for c in cells}
        if len(cls) == 1 and sh.is_explicit(next(iter(cls))):
            prefix.append(next(iter(cls)))
            continue
        if pos == 0 and all(not sh.is_explicit(c[0]) for c in cells):
            return (), "zero"
        if all(not sh.is_explicit(c[pos]) for c in cells):
            return tuple(prefix), "exact"
        return tuple(prefix), "truncated"
    W, N = lv.W, lv.N
    for _ in range(extend):
        nxt = [d for c in cells for d in sh.refine(W, N, c, W, N + 1)]
        cls = {d[N] for d in nxt}
        if len(cls) == 1 and sh.is_explicit(next(iter(cls))):
            prefix.append(next(iter(cls)))
            cells, N = nxt, N + 1
            continue
        if all(not sh.is_explicit(d[N]) for d in nxt):
            return tuple(prefix), ("exact" if prefix else "zero")
        break
    return tuple(prefix), "truncated"


def consistent_with(prefix, status, point):
    """Is a π-value compatible with the OTW point?"""
    n = len(prefix)
    if point.kind == "inf":
        if status != "truncated":
            return False
        return point_prefix(point.pre, point.per, n) == prefix
    if point.kind == "fin":
        w = point.word
        if status == "exact":
            return prefix == w
        if status == "truncated":
            return n <= len(w) and w[:n] == prefix
        return False
    return status == "zero" or (status == "truncated" and n == 0)


def cover_fiber(point, depth):
    """Depth-`depth` atoms whose π-prefix is compatible with the point."""
    out = []
    for xi in atoms_at(point.shift, depth):
        p, st = pi(xi)
        if consistent_with(p, st, point):
            out.append(xi)
    return out


# ------------------------------------------------------------------ arrows

class GroupoidArrow:
    """(ξ, n, η) with witnesses σ̂^k(ξ) = σ̂^m(η), n = k − m."""
    __slots__ = ("xi", "n", "eta", "k", "m")

    def __init__(self, xi, n, eta, k, m):
        if xi.k != eta.k:
            raise DepthInsufficient("both ends of an arrow must live at the same depth")
        if n != k - m:
            raise Inconsistent(f"n={n} differs from k-m={k - m}")
        if max(k, m) > xi.k:
            raise DepthInsufficient(f"witness ({k},{m}) exceeds depth {xi.k}")
        a, b = sigma_hat_iter(xi, k), sigma_hat_iter(eta, m)
        lo = min(a.k, b.k)
        if coarsen(a, lo) != coarsen(b, lo):
            raise Inconsistent("σ̂-equation fails at this depth")
        self.xi, self.n, self.eta, self.k, self.m = xi, n, eta, k, m

    @property
    def depth(self):
        return self.xi.k

    def __eq__(self, other):
        return isinstance(other, GroupoidArrow) and (self.xi, self.n, self.eta) == (other.xi, other.n, other.eta)

    def __hash__(self):
        return hash((self.xi, self.n, self.eta))

    def __repr__(self):
        return f"({self.xi.text()}, {self.n}, {self.eta.text()})@{self.depth}"


def unit_arrow(xi):
    return GroupoidArrow(xi, 0, xi, 0, 0)


def compose(g, h):
    """g·h for composable arrows (source of g = range of h)."""
    if g.eta != h.xi:
        raise Inconsistent("arrows are not composable")
    k, m = g.k + h.k, g.m + h.m
    if max(k, m) > g.depth:
        raise DepthInsufficient(f"composite witness ({k},{m}) exceeds depth {g.depth}")
    return GroupoidArrow(g.xi, g.n + h.n, h.eta, k, m)


def inverse(g):
    return GroupoidArrow(g.eta, -g.n, g.xi, g.m, g.k)


def _inside(xi, A):
    """Is the atom of ξ contained in A (None when undecided at this depth)."""
    sh = xi.shift
    lv = xi.level
    W = sh.join(lv.W, A.W)
    N = max(lv.N, A.N)
    B = A.lift(W, N).cells
    ins = out = False
    for c in xi.cells:
        for d in sh.refine(lv.W, lv.N, c, W, N):
            if d in B:
                ins = True
            else:
                out = True
    if ins and out:
        return None
    return ins


def theta(xi, t, eta):
    """Θ(ξ, αβ⁻¹, η) = (ξ, |α| − |β|, η) after checking ξ = φ̂_t(η) at depth."""
    sh = xi.shift
    alpha, beta = t.pos, t.neg
    inside = _inside(eta, c_set(sh, alpha, beta))
    if inside is None:
        raise DepthInsufficient(f"depth {eta.k} does not decide η ∈ W_(t⁻¹)")
    if not inside:
        raise Inconsistent("η is not in the domain of φ̂_t")
    inside = _inside(xi, c_set(sh, beta, alpha))
    if inside is None:
        raise DepthInsufficient(f"depth {xi.k} does not decide ξ ∈ W_t")
    if not inside:
        raise Inconsistent("ξ is not in the range of φ̂_t")
    return GroupoidArrow(xi, len(alpha) - len(beta), eta, len(alpha), len(beta))


def epsilon(g):
    if g.k == 0 or g.m == 0:
        k, m = g.k + 1, g.m + 1
    else:
        k, m = g.k, g.m
    xi, eta = sigma_hat(g.xi), sigma_hat(g.eta)
    k, m = max(k - 1, 0), max(m - 1, 0)
    if max(k, m) > xi.k:
        raise DepthInsufficient("ε lost too much depth")
    return GroupoidArrow(xi, g.n, eta, k, m)


def in_V_M(xi, M):
    a = first_letter(xi)
    return a is not None and a in M


def epsilon_M(g, M):
    if not (in_V_M(g.xi, M) and in_V_M(g.eta, M)):
        raise NotInDomain("arrow outside s⁻¹(V_M) ∩ r⁻¹(V_M)")
    return epsilon(g)


def groupoid_eval(x, g):
    """Value at the arrow of the groupoid function attached to x."""
    sh = x.shift
    total = x.ring.norm(0)
    xi, eta = g.xi, g.eta
    for t, f in x.comps.items():
        if t.degree != g.n:
            continue
        alpha, beta = t.pos, t.neg
        need = max(len(alpha), len(beta))
        if need > xi.k:
            raise DepthInsufficient(f"depth {xi.k} is below |α|,|β| = {need}")
        inx = _inside(xi, c_set(sh, (), alpha))
        iny = _inside(eta, c_set(sh, (), beta))
        if inx is None or iny is None:
            raise DepthInsufficient("depth does not decide the cylinders of a term")
        if not (inx and iny):
            continue
        try:
            a = sigma_hat_iter(xi, len(alpha))
            b = sigma_hat_iter(eta, len(beta))
        except NotInDomain:
            raise DepthInsufficient("σ̂ iterate undefined at this depth") from None
        lo = min(a.k, b.k)
        if coarsen(a, lo) != coarsen(b, lo):
            continue
        lv = xi.level
        W = sh.join(lv.W, f.W)
        N = max(lv.N, f.N)
        F = f.lift(W, N).vals
        vals = {F.get(d, 0) for c in xi.cells for d in sh.refine(lv.W, lv.N, c, W, N)}
        if len(vals) != 1:
            raise DepthInsufficient(f"depth {xi.k} does not resolve the coefficient function")
        total = total + vals.pop()
    return x.ring.norm(total)


# ------------------------------------------------------------------ point arrows

def point_arrow_eval(x, xp, n, yp):
    """Value of x at the arrow (x', n, y') of the groupoid of X, computed from the skew form.

    xp, yp are (pre, per) pairs of eventually periodic points.
    """
    total = x.ring.norm(0)
    for t, f in x.comps.items():
        if t.degree != n:
            continue
        a, b = t.pos, t.neg
        if point_prefix(*xp, len(a)) != a or point_prefix(*yp, len(b)) != b:
            continue
        if point_shift(*xp, len(a)) != point_shift(*yp, len(b)):
            continue
        total = total + f.at_point(*xp)
    return x.ring.norm(total)


# ------------------------------------------------------------------ export

def fiber_json(point, depth, atoms):
    rows = []
    for xi in atoms:
        p, st = pi(xi)
        rows.append({"atom": xi.text(), "prefix": fmt_word(p), "status": st})
    return {"point": str(point), "depth": depth, "count": len(atoms), "atoms": rows}


def atoms_json(shift, depth):
    rows = []
    for xi in atoms_at(shift, depth):
        p, st = pi(xi)
        rows.append({"atom": xi.text(), "prefix": fmt_word(p), "status": st})
    return {"shift": shift.name, "depth": depth, "count": len(rows), "atoms": rows}


def refinement_dot(shift, depth):
    """DOT tree of atoms from depth 0 to depth, edges from each atom to its coarsening."""
    lines = [f'digraph "{shift.name}_atoms" {{', f'  label="depth {depth}";']
    for k in range(depth + 1):
        for xi in atoms_at(shift, k):
            lines.append(f'  "d{k}_{xi.i}" [label={json.dumps(xi.text())}];')
            if k > 0:
                up = coarsen(xi, k - 1)
                lines.append(f'  "d{k - 1}_{up.i}" -> "d{k}_{xi.i}";')
    lines.append("}")
    return "\n".join(lines)


def groupoid_dot(shift, depth):
    """DOT graph of the depth-`depth` atoms with the arrows (ξ, 1, σ̂ξ) drawn at the coarser depth."""
    lines = [f'digraph "{shift.name}_groupoid" {{', f'  label="depth {depth}";']
    for xi in atoms_at(shift, depth):
        lines.append(f'  "d{depth}_{xi.i}" [label={json.dumps(xi.text())}];')
    if depth > 0:
        for xi in atoms_at(shift, depth - 1):
            lines.append(f'  "d{depth - 1}_{xi.i}" [label={json.dumps(xi.text())}];')
        for xi in atoms_at(shift, depth):
            try:
                s = sigma_hat(xi)
            except NotInDomain:
                continue
            lines.append(f'  "d{depth}_{xi.i}" -> "d{depth - 1}_{s.i}" [label="1"];')
    lines.append("}")
    return "\n".join(lines)

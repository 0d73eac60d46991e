"""Subshift backends.

Every backend exposes a *cell space*: for a window ``W`` and depth ``N`` a
cell is a tuple ``(c_1, ..., c_N, t)`` of letter classes followed by a tail
class, standing for the points ``x`` with ``x_k`` in ``c_k`` whose shifted
tail ``σ^N x`` lies in tail class ``t``.  Cells at a fixed window and depth
partition the shift, and every set generated by the ``C(α, β)`` with letters
in the window is a union of cells once the depth is at least ``|β|``.

Finite alphabets use the minimal follower-set automaton; the tail class of a
point is its *profile*, the set of automaton states whose follower set
contains it.  Rule-presented shifts use explicit letters and vertices of a
window plus per-family residue classes.
"""
from collections import deque

from .errors import ClosureViolation, HasSink, UnknownLetter, HypothesisViolated
from .intsets import IntSet, EMPTY_INTS
from .words import Letter, RESIDUE, fmt_word


# ----------------------------------------------------------------- points

def primitive_root(w):
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


def normalize_point(pre, per):
    """Canonical (preperiod, period) of the eventually periodic pre·per^∞."""
    pre, per = tuple(pre), primitive_root(tuple(per))
    if not per:
        raise ValueError("period must be nonempty")
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1:] + per[:-1]
    return pre, per


def point_letter(pre, per, k):
    """k-th letter (1-based)."""
    if k <= len(pre):
        return pre[k - 1]
    return per[(k - len(pre) - 1) % len(per)]


def point_prefix(pre, per, n):
    return tuple(point_letter(pre, per, k) for k in range(1, n + 1))


def point_shift(pre, per, n=1):
    if n <= len(pre):
        return normalize_point(pre[n:], per)
    m = (n - len(pre)) % len(per)
    return normalize_point((), per[m:] + per[:m])


class Shift:
    finite_alphabet = True
    name = "X"

    # letters -------------------------------------------------------------
    def letter_key(self, a):
        return self._order[a.family], (-2 if a.index is None else a.index)

    def word_key(self, w):
        return tuple(self.letter_key(a) for a in w)

    def parse_word(self, text):
        """Tokenize a word; '.' and spaces may separate letters, 'ω' or '' is empty."""
        text = text.strip()
        if text in ("", "ω", "w0", "eps", "_"):
            return ()
        out = []
        i = 0
        names = sorted(self._order, key=len, reverse=True)
        while i < len(text):
            ch = text[i]
            if ch in ". ":
                i += 1
                continue
            for nm in names:
                if text.startswith(nm, i):
                    j = i + len(nm)
                    if self._indexed[nm]:
                        k = j
                        while k < len(text) and text[k].isdigit():
                            k += 1
                        if k == j:
                            continue
                        a = Letter(nm, int(text[j:k]))
                        j = k
                    else:
                        a = Letter(nm, None)
                    self.check_letter(a)
                    out.append(a)
                    i = j
                    break
            else:
                raise UnknownLetter(f"cannot read a letter at {text[i:]!r} in {text!r}")
        return tuple(out)

    def word(self, text):
        return self.parse_word(text)

    def letter(self, text):
        w = self.parse_word(text)
        if len(w) != 1:
            raise UnknownLetter(f"{text!r} is not a single letter")
        return w[0]

    def fmt(self, w):
        return fmt_word(w)

    # default helpers ------------------------------------------------------
    def cells_with_prefix(self, W, N, prefix):
        k = len(prefix)
        return [c for c in self.cells(W, N) if c[:k] == prefix]

    def is_regular_letter_window(self):
        return self.finite_alphabet


# ================================================================ automata

class AutomatonShift(Shift):
    """Finite-alphabet shift given by its minimal follower-set automaton."""

    finite_alphabet = True

    def __init__(self, alphabet, delta, name="X", kind="sofic"):
        self.alphabet = tuple(alphabet)
        self.name = name
        self.kind = kind
        self._order = {a.family: i for i, a in enumerate(self.alphabet)}
        self._indexed = {a.family: False for a in self.alphabet}
        self.delta = [dict(d) for d in delta]
        self.nstates = len(self.delta)
        self._build_profiles()
        self._cells = {}
        self._refine = {}

    # construction ---------------------------------------------------------
    @classmethod
    def from_dfa(cls, alphabet, trans, start, name="X", kind="sofic"):
        """trans: state -> {letter: state}; states with no infinite future are trimmed."""
        alphabet = tuple(alphabet)
        # reachable
        seen = {start}
        todo = [start]
        while todo:
            q = todo.pop()
            for a in alphabet:
                r = trans.get(q, {}).get(a)
                if r is not None and r not in seen:
                    seen.add(r)
                    todo.append(r)
        alive = set(seen)
        changed = True
        while changed:
            changed = False
            for q in list(alive):
                if not any(trans.get(q, {}).get(a) in alive for a in alphabet):
                    alive.discard(q)
                    changed = True
        if start not in alive:
            raise HypothesisViolated(f"{name}: the shift is empty")
        tr = {q: {a: r for a, r in trans.get(q, {}).items() if r in alive} for q in alive}
        # Moore minimization; all states accept
        block = {q: 0 for q in alive}
        nblocks = 1
        while True:
            sigs = {}
            newblock = {}
            for q in sorted(alive, key=repr):
                sig = (block[q],) + tuple(block.get(tr[q].get(a), -1) if tr[q].get(a) is not None else -1
                                          for a in alphabet)
                newblock[q] = sigs.setdefault(sig, len(sigs))
            if len(sigs) == nblocks:
                break
            block, nblocks = newblock, len(sigs)
        block = newblock
        # renumber breadth-first from the start state in letter order
        order = {block[start]: 0}
        queue = deque([start])
        rep = {block[start]: start}
        while queue:
            q = queue.popleft()
            for a in alphabet:
                r = tr[q].get(a)
                if r is not None and block[r] not in order:
                    order[block[r]] = len(order)
                    rep[block[r]] = r
                    queue.append(r)
        delta = [None] * len(order)
        for b, i in order.items():
            q = rep[b]
            delta[i] = {a: order[block[r]] for a, r in tr[q].items()}
        return cls(alphabet, delta, name=name, kind=kind)

    @classmethod
    def sft(cls, symbols, forbidden, name="X"):
        alphabet = tuple(Letter(s) for s in symbols)
        by = {s: Letter(s) for s in symbols}
        fw = set()
        for f in forbidden:
            w = tuple(by[s] for s in _split_symbols(f, symbols))
            if not w:
                raise HypothesisViolated("the empty word cannot be forbidden")
            fw.add(w)
        m = max((len(f) for f in fw), default=1)
        h = m - 1
        start = ()
        trans = {}
        todo = [start]
        seen = {start}
        while todo:
            s = todo.pop()
            trans[s] = {}
            for a in alphabet:
                t = s + (a,)
                if any(t[len(t) - k:] in fw for k in range(1, len(t) + 1)):
                    continue
                nxt = t[len(t) - h:] if h > 0 else ()
                trans[s][a] = nxt
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        shift = cls.from_dfa(alphabet, trans, start, name=name, kind="sft")
        shift.forbidden = tuple(sorted(fw, key=shift.word_key))
        return shift

    @classmethod
    def sofic(cls, vertices, edges, name="X", require_right_resolving=True, kind="sofic", alphabet=None):
        """edges: (source vertex, label, target vertex) triples."""
        if alphabet is None:
            labels = []
            for _, lab, _ in edges:
                if lab not in labels:
                    labels.append(lab)
            alphabet = labels
        letters = tuple(a if isinstance(a, Letter) else Letter(str(a)) for a in alphabet)
        lk = {str(a): a for a in letters}
        out = {v: {} for v in vertices}
        for s, lab, t in edges:
            a = lk[str(lab)]
            out[s].setdefault(a, set()).add(t)
        if require_right_resolving:
            for v in vertices:
                for a, ts in out[v].items():
                    if len(ts) > 1:
                        raise HypothesisViolated(f"{name}: presentation is not right-resolving at {v!r}, label {a}")
        # keep vertices with an infinite forward path
        alive = set(vertices)
        changed = True
        while changed:
            changed = False
            for v in list(alive):
                if not any(ts & alive for ts in out[v].values()):
                    alive.discard(v)
                    changed = True
        start = frozenset(alive)
        trans = {}
        todo = [start]
        seen = {start}
        while todo:
            S = todo.pop()
            trans[S] = {}
            for a in letters:
                T = set()
                for v in S:
                    T |= out[v].get(a, set())
                T &= alive
                if T:
                    T = frozenset(T)
                    trans[S][a] = T
                    if T not in seen:
                        seen.add(T)
                        todo.append(T)
        return cls.from_dfa(letters, trans, start, name=name, kind=kind)

    # profiles ------------------------------------------------------------
    def _build_profiles(self):
        n = self.nstates
        d = self.delta
        start = tuple(range(n))
        seen = {start}
        todo = [start]
        while todo:
            tup = todo.pop()
            for a in self.alphabet:
                nt = tuple(None if q is None else d[q].get(a) for q in tup)
                if all(x is None for x in nt):
                    continue
                if nt not in seen:
                    seen.add(nt)
                    todo.append(nt)
        tuples = list(seen)
        cand = {frozenset(x for x in t if x is not None) for t in tuples}
        changed = True
        while changed:
            changed = False
            for P in list(cand):
                ok = False
                for a in self.alphabet:
                    img = [d[q].get(a) for q in P]
                    if None not in img and frozenset(img) in cand:
                        ok = True
                        break
                if not ok:
                    cand.discard(P)
                    changed = True
        profs = set()
        for t in tuples:
            alive = frozenset(q for q in range(n) if t[q] is not None)
            img = frozenset(x for x in t if x is not None)
            if 0 in alive and img in cand:
                profs.add(alive)
        self.profiles = sorted(profs, key=lambda S: (-len(S), sorted(S)))
        self.profile_index = {S: i for i, S in enumerate(self.profiles)}
        # pre-images: the profile of a·y from that of y
        self.pre = {}
        self.ext = {}
        for a in self.alphabet:
            for j, S in enumerate(self.profiles):
                P = frozenset(q for q in range(n) if d[q].get(a) in S)
                i = self.profile_index.get(P)
                self.pre[a, j] = i
                if i is not None:
                    self.ext.setdefault((i, a), []).append(j)
        # shortest word reaching each state
        self.access = {0: ()}
        queue = deque([0])
        while queue:
            q = queue.popleft()
            for a in self.alphabet:
                r = d[q].get(a)
                if r is not None and r not in self.access:
                    self.access[r] = self.access[q] + (a,)
                    queue.append(r)
        self.top_word = None
        queue = deque([((a,), d[0].get(a)) for a in self.alphabet if d[0].get(a) is not None])
        seenq = set()
        while queue:
            w, q = queue.popleft()
            if q == 0:
                self.top_word = w
                break
            if q in seenq:
                continue
            seenq.add(q)
            for a in self.alphabet:
                r = d[q].get(a)
                if r is not None:
                    queue.append((w + (a,), r))

    # basics ----------------------------------------------------------------
    def check_letter(self, a):
        if a not in self._order_letters():
            raise UnknownLetter(f"{a} is not in the alphabet of {self.name}")

    def _order_letters(self):
        if not hasattr(self, "_letterset"):
            self._letterset = frozenset(self.alphabet)
        return self._letterset

    def run(self, q, w):
        d = self.delta
        for a in w:
            if q is None:
                return None
            q = d[q].get(a)
        return q

    def state_of(self, w):
        return self.run(0, w)

    def is_in_language(self, w):
        for a in w:
            self.check_letter(a)
        return self.run(0, w) is not None

    def enumerate_language(self, n, budget=None):
        out = []

        def rec(w, q):
            if len(w) == n:
                out.append(w)
                return
            for a in self.alphabet:
                r = self.delta[q].get(a)
                if r is not None:
                    rec(w + (a,), r)
        rec((), 0)
        return out, False

    def survives(self, q, pre, per):
        q = self.run(q, pre)
        if q is None:
            return False
        seen = set()
        while q not in seen:
            seen.add(q)
            q = self.run(q, per)
            if q is None:
                return False
        return True

    def contains_point(self, pre, per):
        return self.survives(0, pre, per)

    def point_profile(self, pre, per):
        return frozenset(q for q in range(self.nstates) if self.survives(q, pre, per))

    # cell space -------------------------------------------------------------
    def window_for(self, letters=(), vertices=()):
        for a in letters:
            self.check_letter(a)
        return None

    def join(self, W1, W2):
        return None

    def base_window(self):
        return None

    def grow_window(self, W, j):
        return None

    def letter_classes(self, W):
        return self.alphabet

    def tail_classes(self, W):
        return tuple(range(len(self.profiles)))

    def realizable(self, W, cell):
        q = self.run(0, cell[:-1])
        return q is not None and q in self.profiles[cell[-1]]

    def cells(self, W, N):
        got = self._cells.get(N)
        if got is None:
            out = []

            def rec(w, q):
                if len(w) == N:
                    for i, S in enumerate(self.profiles):
                        if q in S:
                            out.append(w + (i,))
                    return
                for a in self.alphabet:
                    r = self.delta[q].get(a)
                    if r is not None:
                        rec(w + (a,), r)
            rec((), 0)
            got = tuple(out)
            self._cells[N] = got
        return got

    def refine(self, W, N, cell, W2, N2):
        if N2 == N:
            return [cell]
        key = (cell, N2)
        got = self._refine.get(key)
        if got is None:
            frontier = [(cell, self.run(0, cell[:-1]))]
            for _ in range(N2 - N):
                nxt = []
                for c, q in frontier:
                    w, p = c[:-1], c[-1]
                    for a in self.alphabet:
                        r = self.delta[q].get(a)
                        if r is None:
                            continue
                        for p2 in self.ext.get((p, a), ()):
                            if r in self.profiles[p2]:
                                nxt.append((w + (a, p2), r))
                frontier = nxt
            got = [c for c, _ in frontier]
            self._refine[key] = got
        return got

    def coarsen(self, W2, N2, cell, W, N):
        w, p = cell[:-1], cell[-1]
        while len(w) > N:
            p = self.pre[w[-1], p]
            w = w[:-1]
        return w + (p,)

    def in_C(self, W, cell, alpha, beta):
        k = len(beta)
        if tuple(cell[:k]) != tuple(beta):
            return False
        q = self.run(0, alpha)
        if q is None:
            return False
        q = self.run(q, cell[k:-1])
        return q is not None and q in self.profiles[cell[-1]]

    def point_cell(self, W, N, pre, per):
        w = point_prefix(pre, per, N)
        tail = point_shift(pre, per, N)
        return w + (self.profile_index[self.point_profile(*tail)],)

    def is_explicit(self, c):
        return True

    def residue_first_indices(self, W, cell):
        return None

    # printing support
    def follower_generators(self, W):
        """(word, predicate on tail classes) pairs separating the tail classes."""
        out = []
        for q in range(1, self.nstates):
            out.append((self.access[q], (lambda t, q=q: q in self.profiles[t])))
        return out

    def top_name(self):
        if self.top_word is not None:
            return f"F({self.fmt(self.top_word)})"
        return "X"

    def describe(self):
        return {"name": self.name, "kind": self.kind, "alphabet": [str(a) for a in self.alphabet],
                "states": self.nstates, "profiles": len(self.profiles)}


def _split_symbols(text, symbols):
    if isinstance(text, (list, tuple)):
        return list(text)
    syms = sorted(symbols, key=len, reverse=True)
    out = []
    i = 0
    text = text.replace(".", "").replace(" ", "")
    while i < len(text):
        for s in syms:
            if text.startswith(s, i):
                out.append(s)
                i += len(s)
                break
        else:
            raise UnknownLetter(f"cannot read {text!r} over {list(symbols)}")
    return out


# ================================================================ rule shifts

class VSet:
    """Vertex set: named vertices plus a finite/cofinite set of numeric ones."""
    __slots__ = ("named", "nums")

    def __init__(self, named=(), nums=EMPTY_INTS):
        self.named = frozenset(named)
        self.nums = nums

    def meets(self, other):
        return bool(self.named & other.named) or bool(self.nums & other.nums)

    def __contains__(self, v):
        if isinstance(v, int):
            return v in self.nums
        return v in self.named

    def __bool__(self):
        return bool(self.named) or bool(self.nums)

    def __or__(self, other):
        return VSet(self.named | other.named, self.nums | other.nums)

    def __and__(self, other):
        return VSet(self.named & other.named, self.nums & other.nums)

    def __sub__(self, other):
        return VSet(self.named - other.named, self.nums - other.nums)

    def __eq__(self, other):
        return isinstance(other, VSet) and self.named == other.named and self.nums == other.nums

    def __hash__(self):
        return hash((self.named, self.nums))

    def __repr__(self):
        parts = sorted(self.named)
        if self.nums:
            parts.append(repr(self.nums))
        return "V" + "{" + ",".join(map(str, parts)) + "}"

    @staticmethod
    def single(v):
        if isinstance(v, int):
            return VSet((), IntSet([v]))
        return VSet([v])

    def explicit(self, base):
        """Vertices whose membership must be tracked individually."""
        out = set(self.named)
        out |= set(self.nums.fin)
        if self.nums.tail is not None and base is not None:
            out |= set(range(base, self.nums.tail))
        return out


class Family:
    def __init__(self, name, indices, source, rng, overrides=None):
        self.name = name
        # indices: None (single letter), list of ints, or ('from', start)
        if indices is None:
            self.single = True
            self.idx = None
            self.infinite = False
        elif isinstance(indices, tuple) and indices and indices[0] == "from":
            self.single = False
            self.idx = IntSet.ray(indices[1])
            self.infinite = True
        else:
            self.single = False
            self.idx = IntSet(indices)
            self.infinite = False
        self.source = source       # ('vertex', v) or ('shift', c)
        self.rng = rng             # ('set', VSet) or ('shift', b)
        self.overrides = dict(overrides or {})   # index -> (source, rng)

    def letters(self, limit=None):
        if self.single:
            return [Letter(self.name, None)]
        return [Letter(self.name, i) for i in self.idx.take(limit if self.infinite else len(self.idx.fin))]


class RWindow(tuple):
    __slots__ = ()

    def __new__(cls, letters, vertices):
        return super().__new__(cls, (frozenset(letters), frozenset(vertices)))

    @property
    def letters(self):
        return self[0]

    @property
    def vertices(self):
        return self[1]


RES_V = "*"


def _vkey(v):
    return (1, v) if isinstance(v, int) else (0, v)


class RuleShift(Shift):
    """Edge shift of a graph or ultragraph given by finitely many edge families."""

    finite_alphabet = False
    CLOSURE_LIMIT = 400

    def __init__(self, named_vertices, numeric_base, families, name="X", kind="ultragraph_rules"):
        self.name = name
        self.kind = kind
        self.named = tuple(named_vertices)
        self.base = numeric_base
        self.families = list(families)
        self.fam = {f.name: f for f in self.families}
        self._order = {f.name: i for i, f in enumerate(self.families)}
        self._indexed = {f.name: not f.single for f in self.families}
        self.finite_alphabet = not any(f.infinite for f in self.families)
        self.all_v = VSet(self.named, IntSet.ray(numeric_base) if numeric_base is not None else EMPTY_INTS)
        self._wcache = {}
        self._cells = {}
        self._refine = {}
        self._check()

    # letters ---------------------------------------------------------------
    def check_letter(self, a):
        f = self.fam.get(a.family)
        if f is None:
            raise UnknownLetter(f"{a} is not a letter of {self.name}")
        if f.single:
            if a.index is not None:
                raise UnknownLetter(f"{a} is not a letter of {self.name}")
        elif not isinstance(a.index, int) or a.index not in f.idx:
            raise UnknownLetter(f"{a} is not a letter of {self.name}")

    def source(self, a):
        f = self.fam[a.family]
        src = f.overrides.get(a.index, (None, None))[0] or f.source
        if src[0] == "vertex":
            return src[1]
        return a.index + src[1]

    def range(self, a):
        f = self.fam[a.family]
        rng = f.overrides.get(a.index, (None, None))[1] or f.rng
        if rng[0] == "set":
            return rng[1]
        return VSet.single(a.index + rng[1])

    def pinned(self):
        out = []
        for f in self.families:
            if not f.infinite:
                out.extend(f.letters())
            else:
                out.extend(Letter(f.name, i) for i in sorted(f.overrides))
        return out

    def _check(self):
        for f in self.families:
            if f.source[0] == "shift" and self.base is None:
                raise HypothesisViolated(f"family {f.name}: affine sources need numeric vertices")
            if f.source[0] == "vertex" and f.source[1] not in self.all_v:
                raise HypothesisViolated(f"family {f.name}: unknown source vertex {f.source[1]!r}")
            if f.source[0] == "shift" and f.idx is not None:
                lo = f.idx.min() + f.source[1]
                if lo < self.base:
                    raise HypothesisViolated(f"family {f.name}: source below the numeric vertices")
            if f.rng[0] == "set" and not f.rng[1]:
                raise HypothesisViolated(f"family {f.name}: empty range")
        for a in self.pinned():
            if not self.range(a):
                raise HypothesisViolated(f"{a}: empty range")
        # sinks
        covered_named = set()
        covered = EMPTY_INTS
        for f in self.families:
            free = f.idx - IntSet(f.overrides) if f.idx is not None else None
            if f.single or free is None:
                pass
            elif f.source[0] == "shift":
                covered = covered | free.shift(f.source[1])
            elif free:
                v = f.source[1]
                if isinstance(v, int):
                    covered = covered | IntSet([v])
                else:
                    covered_named.add(v)
        for a in self.pinned():
            v = self.source(a)
            if isinstance(v, int):
                covered = covered | IntSet([v])
            else:
                covered_named.add(v)
        sinks = [v for v in self.named if v not in covered_named]
        if self.base is not None:
            rest = self.all_v.nums - covered
            if rest:
                sinks.extend(rest.take(3) if not rest.is_finite() else sorted(rest.fin))
        if sinks:
            raise HasSink(f"{self.name}: vertices without outgoing edges: {sinks}")

    # language ------------------------------------------------------------------
    def _propagate(self, W, classes, T):
        for c in reversed(classes):
            if c.index != RESIDUE:
                if not self.range(c).meets(T):
                    return None
                T = VSet.single(self.source(c))
            else:
                f = self.fam[c.family]
                idx = f.idx - self._wdata(W)["explicit"][f.name]
                idx = self._allowed(f, idx, T)
                if not idx:
                    return None
                T = self._sources(f, idx)
        return T

    def _allowed(self, f, idx, T):
        if f.rng[0] == "set":
            return idx if f.rng[1].meets(T) else EMPTY_INTS
        return idx & T.nums.shift(-f.rng[1])

    def _sources(self, f, idx):
        if f.source[0] == "vertex":
            return VSet.single(f.source[1])
        return VSet((), idx.shift(f.source[1]))

    def is_in_language(self, w):
        for a in w:
            self.check_letter(a)
        return self._propagate(None, tuple(w), self.all_v) is not None

    def enumerate_language(self, n, budget=10):
        out = []
        seen = set()
        k = 1
        truncated = True
        while len(out) < budget:
            letters = []
            for f in self.families:
                letters.extend(f.letters(k))
            letters.sort(key=self.letter_key)
            before = len(out)
            words = [()]
            for _ in range(n):
                words = [w + (a,) for w in words for a in letters]
            fresh = sorted((w for w in words if w not in seen and self.is_in_language(w)), key=self.word_key)
            for w in fresh:
                if len(out) >= budget:
                    break
                seen.add(w)
                out.append(w)
            if self.finite_alphabet and k > max(len(f.letters()) for f in self.families):
                truncated = False
                break
            if n == 0:
                truncated = False
                break
            k += 1
            if k > budget + 64 and len(out) == before:
                break
        return out, truncated

    def contains_point(self, pre, per):
        word = tuple(pre) + tuple(per) + tuple(per[:1])
        for a in word:
            self.check_letter(a)
        for a, b in zip(word, word[1:]):
            if self.source(b) not in self.range(a):
                return False
        return True

    # windows -----------------------------------------------------------------
    def window_for(self, letters=(), vertices=()):
        for a in letters:
            self.check_letter(a)
        return self._closure(set(letters), set(vertices))

    def base_window(self):
        return self._closure(set(), set())

    def join(self, W1, W2):
        if W1 == W2:
            return W1
        return self._closure(set(W1.letters) | set(W2.letters), set(W1.vertices) | set(W2.vertices))

    def grow_window(self, W, j):
        """Add the j smallest non-explicit letters of every infinite family."""
        if j == 0:
            return W
        extra = set()
        for f in self.families:
            if f.infinite:
                have = self._wdata(W)["explicit"][f.name]
                extra.update(Letter(f.name, i) for i in (f.idx - have).take(j))
        return self._closure(set(W.letters) | extra, set(W.vertices))

    def _closure(self, L, V):
        L = set(L) | set(self.pinned())
        V = set(V) | set(self.named)
        for f in self.families:
            if f.source[0] == "vertex":
                V.add(f.source[1])
            if f.rng[0] == "set":
                V |= f.rng[1].explicit(self.base)
        affine = [f for f in self.families if f.source[0] == "shift" and f.infinite]
        while True:
            n0 = (len(L), len(V))
            for a in list(L):
                V.add(self.source(a))
                V |= self.range(a).explicit(self.base)
            for v in list(V):
                if isinstance(v, int):
                    for f in affine:
                        i = v - f.source[1]
                        if i in f.idx and i not in f.overrides:
                            L.add(Letter(f.name, i))
            if len(L) + len(V) > self.CLOSURE_LIMIT:
                raise ClosureViolation(f"{self.name}: window closure does not stay finite")
            if (len(L), len(V)) == n0:
                break
        return RWindow(L, V)

    def _wdata(self, W):
        if W is None:
            W = self.base_window()
        d = self._wcache.get(W)
        if d is not None:
            return d
        explicit = {f.name: IntSet(a.index for a in W.letters if a.family == f.name and a.index is not None)
                    for f in self.families}
        classes = []
        for f in self.families:
            mine = sorted((a for a in W.letters if a.family == f.name), key=self.letter_key)
            classes.extend(mine)
            if f.infinite:
                classes.append(Letter(f.name, RESIDUE))
        tails = sorted(W.vertices, key=_vkey)
        if self.base is not None:
            tails.append(RES_V)
        Vnum = IntSet(v for v in W.vertices if isinstance(v, int))
        resv = VSet((), self.all_v.nums - Vnum)
        d = {"explicit": explicit, "classes": tuple(classes), "tails": tuple(tails), "resv": resv}
        by_src = {}
        for c in classes:
            by_src.setdefault(self._src_class(W, c, d), []).append(c)
        d["by_src"] = by_src
        self._wcache[W] = d
        return d

    def _src_class(self, W, c, d=None):
        if c.index != RESIDUE:
            return self.source(c)
        f = self.fam[c.family]
        if f.source[0] == "vertex":
            return f.source[1]
        return RES_V

    def _tailset(self, W, t):
        if t == RES_V:
            return self._wdata(W)["resv"]
        return VSet.single(t)

    def letter_classes(self, W):
        return self._wdata(W)["classes"]

    def tail_classes(self, W):
        return self._wdata(W)["tails"]

    def realizable(self, W, cell):
        return self._propagate(W, cell[:-1], self._tailset(W, cell[-1])) is not None

    def cells(self, W, N):
        key = (W, N)
        got = self._cells.get(key)
        if got is None:
            if N == 0:
                got = tuple((t,) for t in self.tail_classes(W))
            else:
                out = []
                for c in self.cells(W, N - 1):
                    out.extend(self._deepen(W, c))
                got = tuple(out)
            self._cells[key] = got
        return got

    def _deepen(self, W, cell):
        d = self._wdata(W)
        out = []
        head, t = cell[:-1], cell[-1]
        for c in d["by_src"].get(t, ()):
            for t2 in d["tails"]:
                new = head + (c, t2)
                if self.realizable(W, new):
                    out.append(new)
        return out

    def _widen(self, W, W2, cell):
        d = self._wdata(W)
        d2 = self._wdata(W2)
        opts = []
        for c in cell[:-1]:
            if c.index != RESIDUE:
                opts.append([c])
            else:
                have = d["explicit"][c.family]
                new = [a for a in d2["classes"] if a.family == c.family and a.index != RESIDUE
                       and a.index not in have]
                opts.append(new + [c])
        t = cell[-1]
        if t == RES_V:
            opts.append([v for v in d2["tails"] if v not in W.vertices])
        else:
            opts.append([t])
        out = [()]
        for o in opts:
            out = [x + (y,) for x in out for y in o]
        return [c for c in out if self.realizable(W2, c)]

    def refine(self, W, N, cell, W2, N2):
        if W == W2 and N == N2:
            return [cell]
        key = (W, N, cell, W2, N2)
        got = self._refine.get(key)
        if got is None:
            cur = self._widen(W, W2, cell) if W != W2 else [cell]
            for _ in range(N2 - N):
                cur = [x for c in cur for x in self._deepen(W2, c)]
            got = cur
            self._refine[key] = got
        return got

    def _coarsen_class(self, W, c):
        if c.index == RESIDUE or c in W.letters:
            return c
        return Letter(c.family, RESIDUE)

    def _coarsen_vertex(self, W, v):
        if v == RES_V or v in W.vertices:
            return v
        return RES_V

    def coarsen(self, W2, N2, cell, W, N):
        head = cell[:N]
        if N < N2:
            t = self._src_class(W2, cell[N])
        else:
            t = cell[-1]
        if W != W2:
            head = tuple(self._coarsen_class(W, c) for c in head)
            t = self._coarsen_vertex(W, t)
        return head + (t,)

    def in_C(self, W, cell, alpha, beta):
        k = len(beta)
        if tuple(cell[:k]) != tuple(beta):
            return False
        if not alpha:
            return True
        if not self.is_in_language(alpha):
            return False
        R = self.range(alpha[-1])
        N = len(cell) - 1
        v = self._src_class(W, cell[k]) if N > k else cell[-1]
        if v == RES_V:
            return R.nums.tail is not None
        return v in R

    def point_cell(self, W, N, pre, per):
        w = point_prefix(pre, per, N + 1)
        head = tuple(a if a in W.letters else Letter(a.family, RESIDUE) for a in w[:N])
        v = self.source(w[N])
        t = v if v in W.vertices else RES_V
        return head + (t,)

    def is_explicit(self, c):
        return c.index != RESIDUE

    def residue_first_indices(self, W, cell):
        """Indices of the letters that can start a point of a cell whose first class is a residue."""
        c = cell[0]
        T = self._propagate(W, cell[1:-1], self._tailset(W, cell[-1]))
        if T is None:
            return EMPTY_INTS
        f = self.fam[c.family]
        idx = f.idx - self._wdata(W)["explicit"][f.name]
        return self._allowed(f, idx, T)

    def follower_generators(self, W):
        out = []
        seen = []
        for a in sorted(W.letters, key=self.letter_key):
            R = self.range(a)
            if R == self.all_v or R in seen:
                continue
            seen.append(R)
            out.append(((a,), (lambda t, R=R: (R.nums.tail is not None) if t == RES_V else (t in R))))
        return out

    def top_name(self):
        for f in self.families:
            for a in f.letters(3):
                if self.range(a) == self.all_v:
                    return f"F({self.fmt((a,))})"
        return "X"

    def letter_covers_vertex(self, v):
        """Is v in the range of some letter?"""
        for f in self.families:
            free = f.idx - IntSet(f.overrides) if f.idx is not None else None
            if f.single or free is None:
                continue
            if not free:
                continue
            if f.rng[0] == "set":
                if v in f.rng[1]:
                    return True
            elif isinstance(v, int) and (v - f.rng[1]) in free:
                return True
        return any(v in self.range(a) for a in self.pinned())

    def has_cofinite_range(self):
        for f in self.families:
            free = f.idx - IntSet(f.overrides) if f.idx is not None else None
            if f.rng[0] == "set" and f.rng[1].nums.tail is not None and (f.single or free):
                return True
        return any(self.range(a).nums.tail is not None for a in self.pinned())

    def describe(self):
        fams = []
        for f in self.families:
            fams.append({"name": f.name, "infinite": f.infinite})
        return {"name": self.name, "kind": self.kind, "named_vertices": list(self.named),
                "numeric_from": self.base, "families": fams}

"""Finite or cofinite sets of integers, stored as fin ∪ [tail, ∞)."""


class IntSet:
    __slots__ = ("fin", "tail")

    def __init__(self, fin=(), tail=None):
        fin = frozenset(fin)
        if tail is not None:
            fin = frozenset(i for i in fin if i < tail)
            while (tail - 1) in fin:
                tail -= 1
                fin = fin - {tail}
        self.fin = fin
        self.tail = tail

    @classmethod
    def ray(cls, lo):
        return cls((), lo)

    def __contains__(self, i):
        return i in self.fin or (self.tail is not None and i >= self.tail)

    def __eq__(self, other):
        return isinstance(other, IntSet) and self.fin == other.fin and self.tail == other.tail

    def __hash__(self):
        return hash((self.fin, self.tail))

    def __bool__(self):
        return bool(self.fin) or self.tail is not None

    def is_finite(self):
        return self.tail is None

    def __repr__(self):
        parts = [str(i) for i in sorted(self.fin)]
        if self.tail is not None:
            parts.append(f"{self.tail}..")
        return "{" + ",".join(parts) + "}"

    def min(self):
        cands = list(self.fin)
        if self.tail is not None:
            cands.append(self.tail)
        return min(cands)

    def take(self, n):
        """First n members in increasing order."""
        out = sorted(self.fin)[:n]
        i = self.tail
        while i is not None and len(out) < n:
            out.append(i)
            i += 1
        return out

    def _bound(self, other):
        vals = list(self.fin) + list(other.fin)
        for t in (self.tail, other.tail):
            if t is not None:
                vals.append(t)
        return (min(vals), max(vals) + 1) if vals else (0, 0)

    def __or__(self, other):
        tails = [t for t in (self.tail, other.tail) if t is not None]
        tail = min(tails) if tails else None
        return IntSet(self.fin | other.fin, tail)

    def __and__(self, other):
        if self.tail is not None and other.tail is not None:
            tail = max(self.tail, other.tail)
            lo = min(self.tail, other.tail)
            cands = set(self.fin) | set(other.fin) | set(range(lo, tail))
        else:
            tail = None
            cands = set(self.fin) | set(other.fin)
        keep = [i for i in cands if i in self and i in other and (tail is None or i < tail)]
        return IntSet(keep, tail)

    def __sub__(self, other):
        if self.tail is None:
            return IntSet([i for i in self.fin if i not in other])
        if other.tail is not None:
            cands = set(self.fin) | set(range(self.tail, max(self.tail, other.tail)))
            return IntSet([i for i in cands if i in self and i not in other])
        top = max([self.tail] + [i + 1 for i in other.fin])
        cands = set(self.fin) | set(range(self.tail, top))
        return IntSet([i for i in cands if i in self and i not in other], top)

    def shift(self, c):
        return IntSet([i + c for i in self.fin], None if self.tail is None else self.tail + c)

    def clip(self, lo):
        return self & IntSet.ray(lo)


EMPTY_INTS = IntSet()

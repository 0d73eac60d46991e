"""Graphs, ultragraphs and their edge shifts; path-algebra relations inside the subshift algebra."""
import itertools

from .algebra import degree_decompose, gen_p, gen_s, gen_s_star, zero
from .errors import HasSink, HypothesisViolated
from .relations import Report
from .rings import ZZ
from .sets import USet, c_set, cyl, empty, top
from .shifts import RES_V, AutomatonShift, RuleShift, VSet
from .words import RESIDUE, Letter


class Graph:
    """Finite directed graph; edges: name -> (source, target)."""

    def __init__(self, vertices, edges, name="G"):
        self.vertices = list(vertices)
        self.edges = dict(edges)
        self.name = name
        for e, (s, t) in self.edges.items():
            if s not in self.vertices or t not in self.vertices:
                raise HypothesisViolated(f"edge {e} uses an unknown vertex")

    def s(self, e):
        return self.edges[e][0]

    def r(self, e):
        return self.edges[e][1]

    def out(self, v):
        return [e for e in self.edges if self.s(e) == v]

    def sinks(self):
        return [v for v in self.vertices if not self.out(v)]

    def sources(self):
        hit = {self.r(e) for e in self.edges}
        return [v for v in self.vertices if v not in hit]

    def ranges(self, e):
        return [self.r(e)]

    def to_dot(self):
        lines = [f'digraph "{self.name}" {{']
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for e in self.edges:
            for t in self.ranges(e):
                lines.append(f'  "{self.s(e)}" -> "{t}" [label="{e}"];')
        lines.append("}")
        return "\n".join(lines)


class Ultragraph(Graph):
    """Finite ultragraph; edges: name -> (source, list of range vertices)."""

    def __init__(self, vertices, edges, name="G"):
        self.vertices = list(vertices)
        self.edges = {e: (s, list(r)) for e, (s, r) in dict(edges).items()}
        self.name = name
        for e, (s, r) in self.edges.items():
            if not r:
                raise HypothesisViolated(f"edge {e} has an empty range")
            if s not in self.vertices or any(v not in self.vertices for v in r):
                raise HypothesisViolated(f"edge {e} uses an unknown vertex")

    def ranges(self, e):
        return self.edges[e][1]

    def sources(self):
        hit = {v for e in self.edges for v in self.ranges(e)}
        return [v for v in self.vertices if v not in hit]


def edge_shift(g):
    """Edge shift of a finite graph/ultragraph (automaton backend) or a rule-presented one."""
    if isinstance(g, RuleShift):
        return g
    sinks = g.sinks()
    if sinks:
        raise HasSink(f"{g.name}: vertices without outgoing edges: {sinks}")
    triples = [(g.s(e), e, t) for e in g.edges for t in g.ranges(e)]
    alphabet = [Letter(str(e)) for e in g.edges]
    sh = AutomatonShift.sofic(g.vertices, triples, name=g.name, kind="graph",
                              require_right_resolving=False, alphabet=alphabet)
    sh.graph = g
    return sh


# ------------------------------------------------------------------ path-algebra generators

def _graph_of(g):
    if isinstance(g, (Graph, RuleShift)):
        return g
    got = getattr(g, "graph", None)
    if got is None:
        raise HypothesisViolated(f"{getattr(g, 'name', g)} is not an edge shift")
    return got


class LPAGenerators:
    """q_v, t_e, t_e* of a finite graph realised in the unital subshift algebra of its edge shift."""

    def __init__(self, g, shift, q, t, ts):
        self.graph = g
        self.shift = shift
        self.q = q
        self.t = t
        self.ts = ts

    def as_text(self):
        out = {f"q_{v}": str(x) for v, x in self.q.items()}
        out.update({f"t_{e}": str(x) for e, x in self.t.items()})
        out.update({f"t_{e}*": str(x) for e, x in self.ts.items()})
        return out


def lpa_generators(g, ring=ZZ):
    g = _graph_of(g)
    if isinstance(g, Ultragraph):
        raise HypothesisViolated("path-algebra generators are built for graphs; use the ultragraph relations")
    sh = edge_shift(g)
    letter = {e: sh.letter(str(e)) for e in g.edges}
    t = {e: gen_s(sh, letter[e], ring) for e in g.edges}
    ts = {e: gen_s_star(sh, letter[e], ring) for e in g.edges}
    q = {}
    for v in g.vertices:
        into = [e for e in g.edges if g.r(e) == v]
        if into:
            q[v] = gen_p(c_set(sh, (letter[into[0]],), ()), ring)
        else:
            x = zero(sh, ring)
            for e in g.out(v):
                x = x + t[e] * ts[e]
            q[v] = x
    return LPAGenerators(g, sh, q, t, ts)


def verify_lpa_relations(g, ring=ZZ):
    gens = lpa_generators(g, ring)
    g, sh = gens.graph, gens.shift
    q, t, ts = gens.q, gens.t, gens.ts
    rep = Report(sh, None, [sh.letter(str(e)) for e in g.edges])
    z = zero(sh, ring)

    rep.start("V: q_v q_w = δ_{v,w} q_v")
    for v in g.vertices:
        for w in g.vertices:
            rep.record(q[v] * q[w] == (q[v] if v == w else z), f"v={v}, w={w}")
    rep.start("E1: q_{s(e)} t_e = t_e = t_e q_{r(e)}")
    for e in g.edges:
        rep.record(q[g.s(e)] * t[e] == t[e] and t[e] * q[g.r(e)] == t[e], f"e={e}")
    rep.start("E2: q_{r(e)} t_e* = t_e* = t_e* q_{s(e)}")
    for e in g.edges:
        rep.record(q[g.r(e)] * ts[e] == ts[e] and ts[e] * q[g.s(e)] == ts[e], f"e={e}")
    rep.start("CK1: t_e* t_f = δ_{e,f} q_{r(e)}")
    for e in g.edges:
        for f in g.edges:
            rep.record(ts[e] * t[f] == (q[g.r(e)] if e == f else z), f"e={e}, f={f}")
    rep.start("CK2: q_v = Σ_{s(e)=v} t_e t_e*")
    for v in g.vertices:
        x = z
        for e in g.out(v):
            x = x + t[e] * ts[e]
        rep.record(q[v] == x, f"v={v}")
    rep.start("degrees: deg t_e = 1, deg t_e* = -1, deg q_v = 0")
    for e in g.edges:
        rep.record(list(degree_decompose(t[e])) == [1] and list(degree_decompose(ts[e])) == [-1], f"e={e}")
    for v in g.vertices:
        rep.record(list(degree_decompose(q[v])) == [0], f"v={v}")
    return rep


# ------------------------------------------------------------------ ultragraphs

class _FiniteUG:
    def __init__(self, u):
        self.u = u
        self.shift = edge_shift(u)
        self.vertices = list(u.vertices)
        self.letter = {self.shift.letter(str(e)): e for e in u.edges}
        self.letters = sorted(self.letter, key=self.shift.letter_key)
        self.everything = frozenset(u.vertices)

    def single(self, v):
        return frozenset([v])

    def s(self, a):
        return self.u.s(self.letter[a])

    def r(self, a):
        return frozenset(self.u.ranges(self.letter[a]))

    def out(self, v):
        return [a for a in self.letters if self.s(a) == v]

    def qset(self, A):
        S = empty(self.shift)
        for a in self.letters:
            if self.s(a) in A:
                S = S | cyl(self.shift, (a,))
        return S

    def name(self, A):
        return "{" + ",".join(sorted(map(str, A))) + "}"


class _RuleUG:
    def __init__(self, sh, budget):
        self.shift = sh
        nums = list(range(sh.base, sh.base + budget)) if sh.base is not None else []
        self.vertices = list(sh.named) + nums
        W = sh.window_for(vertices=self.vertices)
        self.letters = sorted((a for a in W.letters if sh.source(a) in self.vertices), key=sh.letter_key)
        self.everything = sh.all_v

    def single(self, v):
        return VSet.single(v)

    def s(self, a):
        return self.shift.source(a)

    def r(self, a):
        return self.shift.range(a)

    def out(self, v):
        sh = self.shift
        W = sh.window_for(vertices=[v])
        cls = sh._wdata(W)["by_src"].get(v, [])
        if any(c.index == RESIDUE for c in cls):
            return None
        return sorted(cls, key=sh.letter_key)

    def qset(self, A):
        sh = self.shift
        W = sh.window_for(vertices=A.explicit(sh.base))
        cells = [(v,) for v in sh.tail_classes(W)
                 if (A.nums.tail is not None if v == RES_V else v in A)]
        return USet(sh, W, 0, cells)

    def name(self, A):
        return repr(A)


def _ug(u, budget):
    if isinstance(u, RuleShift):
        return _RuleUG(u, budget)
    u = _graph_of(u)
    if isinstance(u, RuleShift):
        return _RuleUG(u, budget)
    if not isinstance(u, Ultragraph):
        u = Ultragraph(u.vertices, {e: (s, [t]) for e, (s, t) in u.edges.items()}, name=u.name)
    return _FiniteUG(u)


def generalized_vertices(u, vertex_budget=6, limit=512):
    """Closure of the vertices and edge ranges within budget under pairwise ∪ and ∩."""
    ug = _ug(u, vertex_budget)
    gens = [ug.single(v) for v in ug.vertices] + [ug.r(a) for a in ug.letters]
    out = []
    for A in gens:
        if A and A not in out:
            out.append(A)
    grew = True
    while grew:
        grew = False
        for A, B in itertools.combinations(list(out), 2):
            for C in (A | B, A & B):
                if C and C not in out:
                    if len(out) >= limit:
                        raise HypothesisViolated(f"generalized vertices exceed {limit} within budget")
                    out.append(C)
                    grew = True
    return out


def q_set(u, A, vertex_budget=6):
    """A′ = {x : s(x_1) ∈ A}."""
    return _ug(u, vertex_budget).qset(A)


def verify_ultragraph_relations(u, vertex_budget=6, ring=ZZ):
    ug = _ug(u, vertex_budget)
    sh = ug.shift
    for v in ug.vertices:
        out = ug.out(v)
        if out is None:
            raise HypothesisViolated(f"vertex {v} emits infinitely many edges")
        if not out:
            raise HasSink(f"vertex {v} emits no edges")
    rep = Report(sh, None, ug.letters)
    rep.vertex_budget = vertex_budget
    z = zero(sh, ring)

    def q(A):
        return gen_p(ug.qset(A), ring)

    s = {a: gen_s(sh, a, ring) for a in ug.letters}
    st = {a: gen_s_star(sh, a, ring) for a in ug.letters}
    base = []
    for A in [ug.single(v) for v in ug.vertices] + [ug.r(a) for a in ug.letters]:
        if A not in base:
            base.append(A)

    rep.start("(1) q_∅ = 0, q_A q_B = q_{A∩B}, q_{A∪B} = q_A + q_B - q_{A∩B}")
    rep.record(q(ug.single(ug.vertices[0]) - ug.single(ug.vertices[0])) == z, "empty set")
    for A, B in itertools.product(base, base):
        qa, qb, qi = q(A), q(B), q(A & B)
        rep.record(qa * qb == qi and q(A | B) == qa + qb - qi, f"A={ug.name(A)}, B={ug.name(B)}")
    rep.start("(2) s_e* s_f = δ_{e,f} q_{r(e)}")
    for a in ug.letters:
        for b in ug.letters:
            rep.record(st[a] * s[b] == (q(ug.r(a)) if a == b else z), f"e={a}, f={b}")
    rep.start("(3) s_e s_e* ≤ q_{s(e)}")
    for a in ug.letters:
        ee = s[a] * st[a]
        rep.record(q(ug.single(ug.s(a))) * ee == ee, f"e={a}")
    rep.start("(4) q_v = Σ_{s(e)=v} s_e s_e*")
    for v in ug.vertices:
        x = z
        for a in ug.out(v):
            x = x + gen_s(sh, a, ring) * gen_s_star(sh, a, ring)
        rep.record(q(ug.single(v)) == x, f"v={v}")
    rep.start("full ranges: q_{r(e)} = p_X")
    for a in ug.letters:
        if ug.r(a) == ug.everything:
            rep.record(q(ug.r(a)) == gen_p(top(sh), ring), f"e={a}")
    return rep

"""Strict double categories, spans of finite sets, and lax functors into spans.

A double category is carried by a graph of categories (a category of edges,
a category of vertices, source and target functors) with a chosen unit and a
strict loose composition.  Loose composition is diagrammatic like everything
else: `hcomp(m, n)` means m-then-n and needs tgt(m) = src(n).

The span side is kept intensional: `Span` values are composed by pullback
with a fixed lexicographic indexing of the composite apex, and `SpanOracle`
only carries a cardinality bound, never a global enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .fincat import (
    FinCat,
    FinFunctor,
    StructuralError,
    Violation,
    check_category,
    check_functor,
    discrete_cat,
    pullback_cat,
    tid,
)
from .opfib import DOpf, LiftCounterexample, is_discrete_opfib


@dataclass(frozen=True)
class GraphOfCats:
    edges: FinCat
    vertices: FinCat
    src: FinFunctor
    tgt: FinFunctor


def check_graph(g: GraphOfCats) -> list[Violation]:
    out = []
    out += [Violation(v.kind, f"edges: {v.message}") for v in check_category(g.edges)]
    out += [Violation(v.kind, f"vertices: {v.message}") for v in check_category(g.vertices)]
    out += [Violation(v.kind, f"src: {v.message}") for v in check_functor(g.src)]
    out += [Violation(v.kind, f"tgt: {v.message}") for v in check_functor(g.tgt)]
    return out


@dataclass(frozen=True)
class GraphMap:
    """A map of graphs of categories: levelwise functors commuting with src/tgt."""

    dom: GraphOfCats
    cod: GraphOfCats
    on_edges: FinFunctor
    on_vertices: FinFunctor


def check_graph_map(m: GraphMap) -> list[Violation]:
    out = []
    out += [Violation(v.kind, f"edges: {v.message}") for v in check_functor(m.on_edges)]
    out += [Violation(v.kind, f"vertices: {v.message}") for v in check_functor(m.on_vertices)]
    if out:
        return out
    for e in m.dom.edges.objects:
        if m.cod.src.ob(m.on_edges.ob(e)) != m.on_vertices.ob(m.dom.src.ob(e)):
            out.append(Violation("law", f"src not preserved at {e}"))
        if m.cod.tgt.ob(m.on_edges.ob(e)) != m.on_vertices.ob(m.dom.tgt.ob(e)):
            out.append(Violation("law", f"tgt not preserved at {e}"))
    for c in m.dom.edges.morphisms:
        if m.cod.src.mor(m.on_edges.mor(c)) != m.on_vertices.mor(m.dom.src.mor(c)):
            out.append(Violation("law", f"src not preserved at cell {c}"))
        if m.cod.tgt.mor(m.on_edges.mor(c)) != m.on_vertices.mor(m.dom.tgt.mor(c)):
            out.append(Violation("law", f"tgt not preserved at cell {c}"))
    return out


class DoubleCat:
    """A strict double category with explicit unit and loose-composition tables.

    `hcomp_obj` maps composable pairs of loose arrows (edge objects) to their
    composite; `hcomp_mor` does the same for cells (edge morphisms) whose
    middle tight boundaries agree.
    """

    def __init__(
        self,
        graph: GraphOfCats,
        unit: FinFunctor,
        hcomp_obj: dict[tuple[str, str], str],
        hcomp_mor: dict[tuple[str, str], str],
    ):
        self.graph = graph
        self.unit = unit
        self.hcomp_obj = dict(hcomp_obj)
        self.hcomp_mor = dict(hcomp_mor)

    @property
    def edges(self) -> FinCat:
        return self.graph.edges

    @property
    def vertices(self) -> FinCat:
        return self.graph.vertices

    def src_of(self, loose: str) -> str:
        return self.graph.src.ob(loose)

    def tgt_of(self, loose: str) -> str:
        return self.graph.tgt.ob(loose)

    def hcomp(self, m: str, n: str) -> str:
        try:
            return self.hcomp_obj[(m, n)]
        except KeyError:
            raise StructuralError(f"loose arrows not composable: ({m!r}, {n!r})") from None

    def hcomp_cells(self, c1: str, c2: str) -> str:
        try:
            return self.hcomp_mor[(c1, c2)]
        except KeyError:
            raise StructuralError(f"cells not loose-composable: ({c1!r}, {c2!r})") from None

    def hcomp_many(self, ms: list[str], at_vertex: Optional[str] = None) -> str:
        if not ms:
            if at_vertex is None:
                raise StructuralError("empty loose composite needs a vertex")
            return self.unit.ob(at_vertex)
        acc = ms[0]
        for m in ms[1:]:
            acc = self.hcomp(acc, m)
        return acc

    def hcomp_many_cells(self, cs: list[str], at_tight: Optional[str] = None) -> str:
        if not cs:
            if at_tight is None:
                raise StructuralError("empty cell composite needs a tight morphism")
            return self.unit.mor(at_tight)
        acc = cs[0]
        for c in cs[1:]:
            acc = self.hcomp_cells(acc, c)
        return acc

    def loose_composable(self, m: str, n: str) -> bool:
        return self.tgt_of(m) == self.src_of(n)


def check_double_category(d: DoubleCat) -> list[Violation]:
    """Unit, associativity, boundary and interchange laws, exhaustively."""
    out = check_graph(d.graph)
    if out:
        return out
    out += [Violation(v.kind, f"unit: {v.message}") for v in check_functor(d.unit)]
    E, V = d.edges, d.vertices
    for a in V.objects:
        u = d.unit.ob(a)
        if d.src_of(u) != a or d.tgt_of(u) != a:
            out.append(Violation("law", f"unit loose arrow at {a} has wrong boundary"))
    if out:
        return out
    # totality of hcomp on composable pairs, boundary compatibility
    for m in E.objects:
        for n in E.objects:
            if not d.loose_composable(m, n):
                if (m, n) in d.hcomp_obj:
                    out.append(Violation("structural", f"hcomp defined on non-composable ({m},{n})"))
                continue
            c = d.hcomp_obj.get((m, n))
            if c is None:
                out.append(Violation("structural", f"hcomp missing at ({m},{n})"))
            elif d.src_of(c) != d.src_of(m) or d.tgt_of(c) != d.tgt_of(n):
                out.append(Violation("law", f"hcomp boundary wrong at ({m},{n})"))
    for c1 in E.morphisms:
        for c2 in E.morphisms:
            composable = (
                d.loose_composable(E.src[c1], E.src[c2])
                and d.loose_composable(E.tgt[c1], E.tgt[c2])
                and d.graph.tgt.mor(c1) == d.graph.src.mor(c2)
            )
            if composable and (c1, c2) not in d.hcomp_mor:
                out.append(Violation("structural", f"cell hcomp missing at ({c1},{c2})"))
            if not composable and (c1, c2) in d.hcomp_mor:
                out.append(Violation("structural", f"cell hcomp on non-composable ({c1},{c2})"))
    if out:
        return out
    for (c1, c2), c in d.hcomp_mor.items():
        if E.src[c] != d.hcomp_obj[(E.src[c1], E.src[c2])] or E.tgt[c] != d.hcomp_obj[(E.tgt[c1], E.tgt[c2])]:
            out.append(Violation("law", f"cell hcomp boundary wrong at ({c1},{c2})"))
    # strict unitality
    for m in E.objects:
        if d.hcomp_obj[(d.unit.ob(d.src_of(m)), m)] != m or d.hcomp_obj[(m, d.unit.ob(d.tgt_of(m)))] != m:
            out.append(Violation("law", f"loose unit law fails at {m}"))
    for c in E.morphisms:
        lu = d.unit.mor(d.graph.src.mor(c))
        ru = d.unit.mor(d.graph.tgt.mor(c))
        if d.hcomp_mor.get((lu, c)) != c or d.hcomp_mor.get((c, ru)) != c:
            out.append(Violation("law", f"cell unit law fails at {c}"))
    # strict associativity
    for m in E.objects:
        for n in E.objects:
            if not d.loose_composable(m, n):
                continue
            for k in E.objects:
                if not d.loose_composable(n, k):
                    continue
                if d.hcomp_obj[(d.hcomp_obj[(m, n)], k)] != d.hcomp_obj[(m, d.hcomp_obj[(n, k)])]:
                    out.append(Violation("law", f"loose associativity fails at ({m},{n},{k})"))
    for (c1, c2) in d.hcomp_mor:
        for c3 in E.morphisms:
            if (c2, c3) in d.hcomp_mor and (d.hcomp_mor[(c1, c2)], c3) in d.hcomp_mor:
                lhs = d.hcomp_mor[(d.hcomp_mor[(c1, c2)], c3)]
                rhs = d.hcomp_mor.get((c1, d.hcomp_mor[(c2, c3)]))
                if lhs != rhs:
                    out.append(Violation("law", f"cell associativity fails at ({c1},{c2},{c3})"))
    # interchange = functoriality of hcomp on the pullback; check directly
    for (c1, c2), c in d.hcomp_mor.items():
        for (c3, c4), cc in d.hcomp_mor.items():
            if d.edges.tgt[c1] == d.edges.src[c3] and d.edges.tgt[c2] == d.edges.src[c4]:
                lhs = d.edges.compose.get((c, cc))
                rhs = d.hcomp_mor.get((d.edges.comp(c1, c3), d.edges.comp(c2, c4)))
                if lhs != rhs:
                    out.append(Violation("law", f"interchange fails at ({c1},{c2};{c3},{c4})"))
    # unit preserves composition of loose units
    for u in V.morphisms:
        for v in V.morphisms:
            if V.tgt[u] == V.src[v]:
                if d.hcomp_mor.get((d.unit.mor(u), d.unit.mor(u))) is not None:
                    pass  # covered by interchange/unit laws above
    return out


def hcomp_functor(d: DoubleCat) -> tuple[FinFunctor, FinFunctor]:
    """Materialize hcomp as a functor out of the strict pullback of edges over vertices.

    Returns (hcomp, witness) where witness is unused beyond its domain; callers
    mostly want functoriality of hcomp, which `check_double_category` already
    covers through interchange.
    """
    pb = pullback_cat(d.graph.tgt, d.graph.src)
    on_obj = {}
    for o in pb.cat.objects:
        m, n = pb.proj0.ob(o), pb.proj1.ob(o)
        on_obj[o] = d.hcomp_obj[(m, n)]
    on_mor = {}
    for c in pb.cat.morphisms:
        c1, c2 = pb.proj0.mor(c), pb.proj1.mor(c)
        on_mor[c] = d.hcomp_mor[(c1, c2)]
    f = FinFunctor(pb.cat, d.edges, on_obj, on_mor)
    return f, pb.proj0


def sq(c: FinCat) -> DoubleCat:
    """Double category of commuting squares of c (loose and tight both c)."""
    vertices = c
    eobjs = list(c.morphisms)
    emors = []
    for f in eobjs:
        for g in eobjs:
            for u in c.hom(c.src[f], c.src[g]):
                for v in c.hom(c.tgt[f], c.tgt[g]):
                    if c.comp(f, v) == c.comp(u, g):
                        emors.append((tid(u, v, f, g), f, g))
    identity = {f: tid(c.identity[c.src[f]], c.identity[c.tgt[f]], f, f) for f in eobjs}
    compose = {}
    import json

    parts = {m: tuple(json.loads(m)) for m, _, _ in emors}
    for m1, f1, g1 in emors:
        u1, v1, _, _ = parts[m1]
        for m2, f2, g2 in emors:
            if g1 != f2:
                continue
            u2, v2, _, _ = parts[m2]
            compose[(m1, m2)] = tid(c.comp(u1, u2), c.comp(v1, v2), f1, g2)
    edges = FinCat(eobjs, emors, identity, compose)
    src = FinFunctor(edges, vertices, {f: c.src[f] for f in eobjs}, {m: parts[m][0] for m in parts})
    tgt = FinFunctor(edges, vertices, {f: c.tgt[f] for f in eobjs}, {m: parts[m][1] for m in parts})
    unit = FinFunctor(vertices, edges, {a: c.identity[a] for a in c.objects},
                      {u: tid(u, u, c.identity[c.src[u]], c.identity[c.tgt[u]]) for u in c.morphisms})
    hcomp_obj = {}
    hcomp_mor = {}
    for f in eobjs:
        for g in eobjs:
            if c.tgt[f] == c.src[g]:
                hcomp_obj[(f, g)] = c.comp(f, g)
    for m1 in edges.morphisms:
        u1, v1, f1, g1 = parts[m1]
        for m2 in edges.morphisms:
            u2, v2, f2, g2 = parts[m2]
            if c.tgt[f1] == c.src[f2] and c.tgt[g1] == c.src[g2] and v1 == u2:
                hcomp_mor[(m1, m2)] = tid(u1, v2, c.comp(f1, f2), c.comp(g1, g2))
    return DoubleCat(GraphOfCats(edges, vertices, src, tgt), unit, hcomp_obj, hcomp_mor)


def unit_only_double(c: FinCat) -> DoubleCat:
    """The double category on c with only unit loose arrows and unit cells."""
    edges = FinCat(
        list(c.objects),
        [(tid("u", m), c.src[m], c.tgt[m]) for m in c.morphisms],
        {a: tid("u", c.identity[a]) for a in c.objects},
        {(tid("u", f), tid("u", g)): tid("u", h) for (f, g), h in c.compose.items()},
    )
    src = FinFunctor(edges, c, {a: a for a in c.objects}, {tid("u", m): m for m in c.morphisms})
    tgt = FinFunctor(edges, c, {a: a for a in c.objects}, {tid("u", m): m for m in c.morphisms})
    unit = FinFunctor(c, edges, {a: a for a in c.objects}, {m: tid("u", m) for m in c.morphisms})
    hcomp_obj = {(a, a): a for a in c.objects}
    hcomp_mor = {}
    for m in c.morphisms:
        um = tid("u", m)
        hcomp_mor[(um, um)] = um
    return DoubleCat(GraphOfCats(edges, c, src, tgt), unit, hcomp_obj, hcomp_mor)


def double_of_cat(c: FinCat) -> DoubleCat:
    """c as a double category: discrete vertices and edges, loose arrows = morphisms.

    The free-category monad acts on exactly this shape; its algebra structure
    is composition in c, so functors become strict algebra morphisms.
    """
    vertices = discrete_cat(list(c.objects))
    edges = discrete_cat(list(c.morphisms))
    src = FinFunctor(
        edges, vertices,
        {m: c.src[m] for m in c.morphisms},
        {edges.identity[m]: vertices.identity[c.src[m]] for m in c.morphisms},
    )
    tgt = FinFunctor(
        edges, vertices,
        {m: c.tgt[m] for m in c.morphisms},
        {edges.identity[m]: vertices.identity[c.tgt[m]] for m in c.morphisms},
    )
    unit = FinFunctor(
        vertices, edges,
        {a: c.identity[a] for a in c.objects},
        {vertices.identity[a]: edges.identity[c.identity[a]] for a in c.objects},
    )
    hcomp_obj = {(f, g): c.comp(f, g) for f, g in c.composable_pairs()}
    hcomp_mor = {
        (edges.identity[f], edges.identity[g]): edges.identity[c.comp(f, g)]
        for f, g in c.composable_pairs()
    }
    return DoubleCat(GraphOfCats(edges, vertices, src, tgt), unit, hcomp_obj, hcomp_mor)


def loose_cover_z2() -> DoubleCat:
    """Two loose arrows over a point with Z/2 composition; covers sq(1) twofold."""
    vertices = discrete_cat(["*"])
    edges = discrete_cat(["g0", "g1"])
    iv = vertices.identity["*"]
    src = FinFunctor(edges, vertices, {"g0": "*", "g1": "*"},
                     {edges.identity["g0"]: iv, edges.identity["g1"]: iv})
    tgt = FinFunctor(edges, vertices, {"g0": "*", "g1": "*"},
                     {edges.identity["g0"]: iv, edges.identity["g1"]: iv})
    unit = FinFunctor(vertices, edges, {"*": "g0"}, {iv: edges.identity["g0"]})
    hcomp_obj = {
        ("g0", "g0"): "g0", ("g0", "g1"): "g1",
        ("g1", "g0"): "g1", ("g1", "g1"): "g0",
    }
    hcomp_mor = {
        (edges.identity[a], edges.identity[b]): edges.identity[c]
        for (a, b), c in hcomp_obj.items()
    }
    return DoubleCat(GraphOfCats(edges, vertices, src, tgt), unit, hcomp_obj, hcomp_mor)


# -- spans ---------------------------------------------------------------------


@dataclass(frozen=True)
class Span:
    left: int
    apex: int
    right: int
    l: tuple[int, ...]
    r: tuple[int, ...]

    def __post_init__(self):
        if len(self.l) != self.apex or len(self.r) != self.apex:
            raise StructuralError("span legs must be total on the apex")
        if any(not 0 <= v < self.left for v in self.l) or any(
            not 0 <= v < self.right for v in self.r
        ):
            raise StructuralError("span leg out of range")


def span_unit(n: int) -> Span:
    return Span(n, n, n, tuple(range(n)), tuple(range(n)))


def span_compose(s1: Span, s2: Span) -> Span:
    """Pullback composite; apex pairs are indexed lexicographically in (x, y)."""
    if s1.right != s2.left:
        raise StructuralError("span boundary mismatch")
    pairs = [(x, y) for x in range(s1.apex) for y in range(s2.apex) if s1.r[x] == s2.l[y]]
    return Span(
        s1.left,
        len(pairs),
        s2.right,
        tuple(s1.l[x] for x, _ in pairs),
        tuple(s2.r[y] for _, y in pairs),
    )


def span_compose_pairs(s1: Span, s2: Span) -> list[tuple[int, int]]:
    """The canonical apex indexing of `span_compose`, exposed for laxator tables."""
    if s1.right != s2.left:
        raise StructuralError("span boundary mismatch")
    return [(x, y) for x in range(s1.apex) for y in range(s2.apex) if s1.r[x] == s2.l[y]]


def find_span_iso(s1: Span, s2: Span) -> Optional[tuple[int, ...]]:
    """Bijection of apexes commuting with both legs, if one exists."""
    if (s1.left, s1.right, s1.apex) != (s2.left, s2.right, s2.apex):
        return None
    # group apex elements by leg values; any fiberwise bijection works
    from collections import defaultdict

    f1 = defaultdict(list)
    f2 = defaultdict(list)
    for i in range(s1.apex):
        f1[(s1.l[i], s1.r[i])].append(i)
    for j in range(s2.apex):
        f2[(s2.l[j], s2.r[j])].append(j)
    if {k: len(v) for k, v in f1.items()} != {k: len(v) for k, v in f2.items()}:
        return None
    out = [0] * s1.apex
    for k, xs in f1.items():
        for x, y in zip(xs, f2[k]):
            out[x] = y
    return tuple(out)


@dataclass(frozen=True)
class SpanOracle:
    """The double category of finite sets and spans, presented lazily.

    Объects are sets {0..k-1} with k <= bound; nothing global is enumerated,
    the oracle only answers composition/unit/validation queries.
    """

    bound: int

    def check_set(self, n: int) -> bool:
        return 0 <= n <= self.bound

    def check_span(self, s: Span) -> bool:
        return self.check_set(s.left) and self.check_set(s.right) and s.apex <= self.bound

    def unit(self, n: int) -> Span:
        if not self.check_set(n):
            raise StructuralError("set exceeds oracle bound")
        return span_unit(n)

    def compose(self, s1: Span, s2: Span) -> Span:
        out = span_compose(s1, s2)
        return out

    def spans(self, left: int, right: int) -> Iterator[Span]:
        """All spans between two fixed boundaries, apex <= bound, канonical order."""
        for apex in range(self.bound + 1):
            for l in itertools.product(range(left), repeat=apex):
                for r in itertools.product(range(right), repeat=apex):
                    yield Span(left, apex, right, l, r)


# -- lax double functors into spans ---------------------------------------------


class LaxDoubleFunctor:
    """A lax double functor from a strict double category into spans of sets.

    Data: set sizes per vertex object, functions per tight morphism, spans per
    loose arrow, span morphisms (apex functions) per cell, a unitor per vertex
    and a laxator per loose-composable pair.  The laxator at (m, n) maps the
    canonical pullback apex of F(m), F(n) into the apex of F(m then n).
    """

    def __init__(
        self,
        source: DoubleCat,
        on_obj: dict[str, int],
        on_tight: dict[str, tuple[int, ...]],
        on_loose: dict[str, Span],
        on_cell: dict[str, tuple[int, ...]],
        unitor: dict[str, tuple[int, ...]],
        laxator: dict[tuple[str, str], tuple[int, ...]],
    ):
        self.source = source
        self.on_obj = dict(on_obj)
        self.on_tight = {k: tuple(v) for k, v in on_tight.items()}
        self.on_loose = dict(on_loose)
        self.on_cell = {k: tuple(v) for k, v in on_cell.items()}
        self.unitor = {k: tuple(v) for k, v in unitor.items()}
        self.laxator = {k: tuple(v) for k, v in laxator.items()}

    def table(self) -> tuple:
        return (
            tuple(sorted(self.on_obj.items())),
            tuple(sorted(self.on_tight.items())),
            tuple(sorted(self.on_loose.items())),
            tuple(sorted(self.on_cell.items())),
            tuple(sorted(self.unitor.items())),
            tuple(sorted(self.laxator.items())),
        )


def check_lax_double_functor(F: LaxDoubleFunctor) -> list[Violation]:
    """Report every failed axiom with its witnessing datum."""
    d = F.source
    E, V = d.edges, d.vertices
    out: list[Violation] = []
    for a in V.objects:
        if a not in F.on_obj or F.on_obj[a] < 0:
            out.append(Violation("structural", f"object set missing at {a}"))
    for u in V.morphisms:
        arr = F.on_tight.get(u)
        if arr is None or len(arr) != F.on_obj.get(V.src[u], -1) or any(
            not 0 <= v < F.on_obj.get(V.tgt[u], 0) for v in arr
        ):
            out.append(Violation("structural", f"tight action missing or ill-typed at {u}"))
    for m in E.objects:
        s = F.on_loose.get(m)
        if s is None or s.left != F.on_obj.get(d.src_of(m)) or s.right != F.on_obj.get(d.tgt_of(m)):
            out.append(Violation("structural", f"loose span missing or ill-typed at {m}"))
    if out:
        return out
    # tight functoriality
    for a in V.objects:
        if F.on_tight[V.identity[a]] != tuple(range(F.on_obj[a])):
            out.append(Violation("law", f"tight identity fails at {a}"))
    for (u, v), w in V.compose.items():
        if tuple(F.on_tight[v][x] for x in F.on_tight[u]) != F.on_tight[w]:
            out.append(Violation("law", f"tight functoriality fails at ({u},{v})"))
    # cells: typing and compatibility with legs
    for c in E.morphisms:
        arr = F.on_cell.get(c)
        sm, sn = F.on_loose[E.src[c]], F.on_loose[E.tgt[c]]
        if arr is None or len(arr) != sm.apex or any(not 0 <= v < sn.apex for v in arr):
            out.append(Violation("structural", f"cell action missing or ill-typed at {c}"))
            continue
        fu = F.on_tight[d.graph.src.mor(c)]
        fv = F.on_tight[d.graph.tgt.mor(c)]
        for i in range(sm.apex):
            if sn.l[arr[i]] != fu[sm.l[i]] or sn.r[arr[i]] != fv[sm.r[i]]:
                out.append(Violation("law", f"cell {c} does not commute with span legs"))
                break
    if any(v.kind == "structural" for v in out):
        return out
    for m in E.objects:
        if F.on_cell[E.identity[m]] != tuple(range(F.on_loose[m].apex)):
            out.append(Violation("law", f"cell identity fails at {m}"))
    for (c1, c2), c3 in E.compose.items():
        if tuple(F.on_cell[c2][x] for x in F.on_cell[c1]) != F.on_cell[c3]:
            out.append(Violation("law", f"cell functoriality fails at ({c1},{c2})"))
    # unitor typing: section of both legs of the unit span
    for a in V.objects:
        arr = F.unitor.get(a)
        su = F.on_loose[d.unit.ob(a)]
        if arr is None or len(arr) != F.on_obj[a] or any(not 0 <= v < su.apex for v in arr):
            out.append(Violation("structural", f"unitor missing or ill-typed at {a}"))
            continue
        for x in range(F.on_obj[a]):
            if su.l[arr[x]] != x or su.r[arr[x]] != x:
                out.append(Violation("law", f"unitor at {a} is not a section of the unit span"))
                break
    # unitor naturality in tight morphisms
    for u in V.morphisms:
        a, b = V.src[u], V.tgt[u]
        cu = F.on_cell.get(d.unit.mor(u))
        if cu is None:
            continue
        fu = F.on_tight[u]
        ua, ub = F.unitor.get(a), F.unitor.get(b)
        if ua is None or ub is None:
            continue
        for x in range(F.on_obj[a]):
            if cu[ua[x]] != ub[fu[x]]:
                out.append(Violation("law", f"unitor not natural at tight {u}"))
                break
    # laxator typing + leg compatibility + naturality
    for (m, n), arr in sorted(F.laxator.items()):
        if not d.loose_composable(m, n):
            out.append(Violation("structural", f"laxator on non-composable ({m},{n})"))
            continue
        sm, sn = F.on_loose[m], F.on_loose[n]
        sc = F.on_loose[d.hcomp(m, n)]
        pairs = span_compose_pairs(sm, sn)
        if len(arr) != len(pairs) or any(not 0 <= v < sc.apex for v in arr):
            out.append(Violation("structural", f"laxator ill-typed at ({m},{n})"))
            continue
        for k, (x, y) in enumerate(pairs):
            if sc.l[arr[k]] != sm.l[x] or sc.r[arr[k]] != sn.r[y]:
                out.append(Violation("law", f"laxator at ({m},{n}) breaks outer legs"))
                break
    for m in E.objects:
        for n in E.objects:
            if d.loose_composable(m, n) and (m, n) not in F.laxator:
                out.append(Violation("structural", f"laxator missing at ({m},{n})"))
    if out:
        # coherence below assumes well-typed and leg-compatible tables
        return out
    # laxator naturality at loose-composable cells
    for c1 in E.morphisms:
        for c2 in E.morphisms:
            if (c1, c2) not in d.hcomp_mor:
                continue
            m1, n1 = E.src[c1], E.src[c2]
            m2, n2 = E.tgt[c1], E.tgt[c2]
            pairs1 = span_compose_pairs(F.on_loose[m1], F.on_loose[n1])
            pairs2 = span_compose_pairs(F.on_loose[m2], F.on_loose[n2])
            idx2 = {p: k for k, p in enumerate(pairs2)}
            lac = F.on_cell[d.hcomp_mor[(c1, c2)]]
            for k, (x, y) in enumerate(pairs1):
                moved = (F.on_cell[c1][x], F.on_cell[c2][y])
                lhs = lac[F.laxator[(m1, n1)][k]]
                rhs = F.laxator[(m2, n2)][idx2[moved]]
                if lhs != rhs:
                    out.append(Violation("law", f"laxator not natural at cells ({c1},{c2})"))
                    break
    # unit coherence (left and right) and associativity
    for m in E.objects:
        a, b = d.src_of(m), d.tgt_of(m)
        sm = F.on_loose[m]
        ua = d.unit.ob(a)
        pairs = span_compose_pairs(F.on_loose[ua], sm)
        idx = {p: k for k, p in enumerate(pairs)}
        for s in range(sm.apex):
            k = idx[(F.unitor[a][sm.l[s]], s)]
            if F.laxator[(ua, m)][k] != s:
                out.append(Violation("law", f"left unit coherence fails at {m}"))
                break
        ub = d.unit.ob(b)
        pairs = span_compose_pairs(sm, F.on_loose[ub])
        idx = {p: k for k, p in enumerate(pairs)}
        for s in range(sm.apex):
            k = idx[(s, F.unitor[b][sm.r[s]])]
            if F.laxator[(m, ub)][k] != s:
                out.append(Violation("law", f"right unit coherence fails at {m}"))
                break
    for m in E.objects:
        for n in E.objects:
            if not d.loose_composable(m, n):
                continue
            for k in E.objects:
                if not d.loose_composable(n, k):
                    continue
                sm, sn, sk = F.on_loose[m], F.on_loose[n], F.on_loose[k]
                mn, nk = d.hcomp(m, n), d.hcomp(n, k)
                pairs_mn = span_compose_pairs(sm, sn)
                idx_mn = {p: i for i, p in enumerate(pairs_mn)}
                pairs_nk = span_compose_pairs(sn, sk)
                idx_nk = {p: i for i, p in enumerate(pairs_nk)}
                pairs_l = span_compose_pairs(F.on_loose[mn], sk)
                idx_l = {p: i for i, p in enumerate(pairs_l)}
                pairs_r = span_compose_pairs(sm, F.on_loose[nk])
                idx_r = {p: i for i, p in enumerate(pairs_r)}
                ok = True
                for x in range(sm.apex):
                    for y in range(sn.apex):
                        if sm.r[x] != sn.l[y]:
                            continue
                        for z in range(sk.apex):
                            if sn.r[y] != sk.l[z]:
                                continue
                            lhs = F.laxator[(mn, k)][
                                idx_l[(F.laxator[(m, n)][idx_mn[(x, y)]], z)]
                            ]
                            rhs = F.laxator[(m, nk)][
                                idx_r[(x, F.laxator[(n, k)][idx_nk[(y, z)]])]
                            ]
                            if lhs != rhs:
                                out.append(
                                    Violation("law", f"laxator associativity fails at ({m},{n},{k})")
                                )
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
    return out


def constant_singleton_lax(d: DoubleCat) -> LaxDoubleFunctor:
    """Everything goes to a point; the unique strict functor to the trivial span data."""
    return LaxDoubleFunctor(
        d,
        {a: 1 for a in d.vertices.objects},
        {u: (0,) for u in d.vertices.morphisms},
        {m: span_unit(1) for m in d.edges.objects},
        {c: (0,) for c in d.edges.morphisms},
        {a: (0,) for a in d.vertices.objects},
        {pair: (0,) for pair in d.hcomp_obj},
    )


# -- double discrete opfibrations ------------------------------------------------


@dataclass(frozen=True)
class DblFunctor:
    """A strict double functor, given by its edge-level and vertex-level parts."""

    source: DoubleCat
    target: DoubleCat
    on_edges: FinFunctor
    on_vertices: FinFunctor


def check_dbl_functor(p: DblFunctor) -> list[Violation]:
    out = []
    out += [Violation(v.kind, f"edges: {v.message}") for v in check_functor(p.on_edges)]
    out += [Violation(v.kind, f"vertices: {v.message}") for v in check_functor(p.on_vertices)]
    if out:
        return out
    s, t = p.source, p.target
    for m in s.edges.objects:
        if t.src_of(p.on_edges.ob(m)) != p.on_vertices.ob(s.src_of(m)):
            out.append(Violation("law", f"src not preserved at {m}"))
        if t.tgt_of(p.on_edges.ob(m)) != p.on_vertices.ob(s.tgt_of(m)):
            out.append(Violation("law", f"tgt not preserved at {m}"))
    for c in s.edges.morphisms:
        if t.graph.src.mor(p.on_edges.mor(c)) != p.on_vertices.mor(s.graph.src.mor(c)):
            out.append(Violation("law", f"src not preserved at cell {c}"))
        if t.graph.tgt.mor(p.on_edges.mor(c)) != p.on_vertices.mor(s.graph.tgt.mor(c)):
            out.append(Violation("law", f"tgt not preserved at cell {c}"))
    for a in s.vertices.objects:
        if p.on_edges.ob(s.unit.ob(a)) != t.unit.ob(p.on_vertices.ob(a)):
            out.append(Violation("law", f"unit not preserved at {a}"))
    for u in s.vertices.morphisms:
        if p.on_edges.mor(s.unit.mor(u)) != t.unit.mor(p.on_vertices.mor(u)):
            out.append(Violation("law", f"unit cell not preserved at {u}"))
    for (m, n), c in s.hcomp_obj.items():
        if t.hcomp_obj.get((p.on_edges.ob(m), p.on_edges.ob(n))) != p.on_edges.ob(c):
            out.append(Violation("law", f"hcomp not preserved at ({m},{n})"))
    for (c1, c2), c in s.hcomp_mor.items():
        if t.hcomp_mor.get((p.on_edges.mor(c1), p.on_edges.mor(c2))) != p.on_edges.mor(c):
            out.append(Violation("law", f"cell hcomp not preserved at ({c1},{c2})"))
    return out


@dataclass(frozen=True)
class DblDOpf:
    """A strict double functor whose edge and vertex parts are both certified."""

    functor: DblFunctor
    edge_part: DOpf
    vertex_part: DOpf


def certify_dbl_dopf(p: DblFunctor) -> DblDOpf | LiftCounterexample | list[Violation]:
    """Check strictness and certify both components as discrete opfibrations."""
    bad = check_dbl_functor(p)
    if bad:
        return bad
    ep = is_discrete_opfib(p.on_edges)
    if isinstance(ep, LiftCounterexample):
        return ep
    vp = is_discrete_opfib(p.on_vertices)
    if isinstance(vp, LiftCounterexample):
        return vp
    return DblDOpf(p, ep, vp)


def identity_dbl(d: DoubleCat) -> DblFunctor:
    from .fincat import identity_functor

    return DblFunctor(d, d, identity_functor(d.edges), identity_functor(d.vertices))

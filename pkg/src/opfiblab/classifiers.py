"""Classifier constructions: fiberwise composition of span paths, the
double-category classify/elements correspondence, and the coslice-presheaf
classifier of a finite index category.

The object of all spans is never built; a "map into it" is always concrete
data (a `Copresheaf`, a `Span`, or a `LaxDoubleFunctor`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .fincat import (
    FinCat,
    FinFunctor,
    FunctorCat,
    StructuralError,
    Violation,
    check_functor,
    comma,
    finset_cat,
    functor_category,
    identity_functor,
    tid,
)
from .doublecat import (
    DblDOpf,
    DblFunctor,
    DoubleCat,
    GraphOfCats,
    LaxDoubleFunctor,
    Span,
    SpanOracle,
    certify_dbl_dopf,
    check_lax_double_functor,
    span_compose,
    span_compose_pairs,
    span_unit,
)
from .opfib import DOpf, LiftCounterexample, is_discrete_opfib


@dataclass(frozen=True)
class PathOfSpans:
    """A composable sequence of spans; boundaries[i] frames spans[i] on the left.

    An empty path carries its single designated boundary set.
    """

    boundaries: tuple[int, ...]
    spans: tuple[Span, ...]

    def __post_init__(self):
        if len(self.boundaries) != len(self.spans) + 1:
            raise StructuralError("path needs one more boundary than spans")
        for i, s in enumerate(self.spans):
            if s.left != self.boundaries[i] or s.right != self.boundaries[i + 1]:
                raise StructuralError(f"span {i} does not match its boundaries")


def omega_via_classifier(path: PathOfSpans) -> Span:
    """Composite span computed fiberwise: apex elements are matching tuples.

    The apex is the set of sequences (s_1, ..., s_n), s_i in the i-th apex,
    with adjacent leg values equal; tuples are ordered lexicographically.
    This is what classifying the image of the path under the free-composition
    monad forces the composite to be.
    """
    if not path.spans:
        return span_unit(path.boundaries[0])
    tuples: list[tuple[int, ...]] = [()]
    for i, s in enumerate(path.spans):
        nxt = []
        for t in tuples:
            for x in range(s.apex):
                if i == 0 or path.spans[i - 1].r[t[-1]] == s.l[x]:
                    nxt.append(t + (x,))
        tuples = nxt
    first, last = path.spans[0], path.spans[-1]
    return Span(
        first.left,
        len(tuples),
        last.right,
        tuple(first.l[t[0]] for t in tuples),
        tuple(last.r[t[-1]] for t in tuples),
    )


def bracketings(n: int) -> list[object]:
    """All binary bracketings of n leaves, as nested pairs of leaf indices."""
    if n == 1:
        return [0]
    out = []
    for k in range(1, n):
        for lhs in bracketings(k):
            for rhs in bracketings(n - k):
                out.append((k, lhs, rhs))
    return out


def compose_bracketed(path: PathOfSpans, tree: object, offset: int = 0) -> Span:
    """Iterated span_compose following one bracketing tree."""
    if isinstance(tree, int):
        return path.spans[offset]
    k, lhs, rhs = tree
    return span_compose(
        compose_bracketed(path, lhs, offset), compose_bracketed(path, rhs, offset + k)
    )


# -- the correspondence for double discrete opfibrations ------------------------


def dbl_classify(p: DblDOpf) -> LaxDoubleFunctor:
    """Classify a double discrete opfibration as a lax functor into spans.

    Vertex fibers become sets, tight transport becomes functions, the edge
    fiber over a loose arrow becomes a span via source/target, the unitor
    picks out units of fiber objects and the laxator is loose composition of
    the total double category, read fiberwise.
    """
    func = p.functor
    src_dbl, base = func.source, func.target
    vfib = {a: p.vertex_part.fiber(a) for a in base.vertices.objects}
    vidx = {a: {e: i for i, e in enumerate(vfib[a])} for a in base.vertices.objects}
    efib = {m: p.edge_part.fiber(m) for m in base.edges.objects}
    eidx = {m: {e: i for i, e in enumerate(efib[m])} for m in base.edges.objects}
    on_obj = {a: len(vfib[a]) for a in base.vertices.objects}
    on_tight = {}
    for u in base.vertices.morphisms:
        a, b = base.vertices.src[u], base.vertices.tgt[u]
        on_tight[u] = tuple(vidx[b][p.vertex_part.transport(e, u)] for e in vfib[a])
    on_loose = {}
    for m in base.edges.objects:
        a, b = base.src_of(m), base.tgt_of(m)
        on_loose[m] = Span(
            len(vfib[a]),
            len(efib[m]),
            len(vfib[b]),
            tuple(vidx[a][src_dbl.src_of(e)] for e in efib[m]),
            tuple(vidx[b][src_dbl.tgt_of(e)] for e in efib[m]),
        )
    on_cell = {}
    for c in base.edges.morphisms:
        m, n = base.edges.src[c], base.edges.tgt[c]
        on_cell[c] = tuple(eidx[n][p.edge_part.transport(e, c)] for e in efib[m])
    unitor = {}
    for a in base.vertices.objects:
        ua = base.unit.ob(a)
        unitor[a] = tuple(eidx[ua][src_dbl.unit.ob(e)] for e in vfib[a])
    laxator = {}
    for (m, n), mn in base.hcomp_obj.items():
        pairs = span_compose_pairs(on_loose[m], on_loose[n])
        laxator[(m, n)] = tuple(
            eidx[mn][src_dbl.hcomp(efib[m][x], efib[n][y])] for x, y in pairs
        )
    return LaxDoubleFunctor(base, on_obj, on_tight, on_loose, on_cell, unitor, laxator)


def dbl_elements(F: LaxDoubleFunctor) -> DblDOpf:
    """Total double category of a lax functor into spans, with its projection.

    Rejects incoherent input with the failing axiom; the double-category laws
    of the total are re-checked rather than assumed from coherence.
    """
    bad = check_lax_double_functor(F)
    if bad:
        raise StructuralError(f"incoherent lax functor: {bad[0].message}")
    base = F.source
    BV, BE = base.vertices, base.edges

    vobjs = [tid(a, x) for a in BV.objects for x in range(F.on_obj[a])]
    vmors = []
    for u in BV.morphisms:
        for x in range(F.on_obj[BV.src[u]]):
            vmors.append((tid(u, x), tid(BV.src[u], x), tid(BV.tgt[u], F.on_tight[u][x])))
    videntity = {tid(a, x): tid(BV.identity[a], x) for a in BV.objects for x in range(F.on_obj[a])}
    vcompose = {}
    for (u, v), w in BV.compose.items():
        for x in range(F.on_obj[BV.src[u]]):
            vcompose[(tid(u, x), tid(v, F.on_tight[u][x]))] = tid(w, x)
    vertices = FinCat(vobjs, vmors, videntity, vcompose)

    eobjs = [tid(m, s) for m in BE.objects for s in range(F.on_loose[m].apex)]
    emors = []
    for c in BE.morphisms:
        m = BE.src[c]
        for s in range(F.on_loose[m].apex):
            emors.append((tid(c, s), tid(m, s), tid(BE.tgt[c], F.on_cell[c][s])))
    eidentity = {
        tid(m, s): tid(BE.identity[m], s) for m in BE.objects for s in range(F.on_loose[m].apex)
    }
    ecompose = {}
    for (c1, c2), c3 in BE.compose.items():
        for s in range(F.on_loose[BE.src[c1]].apex):
            ecompose[(tid(c1, s), tid(c2, F.on_cell[c1][s]))] = tid(c3, s)
    edges = FinCat(eobjs, emors, eidentity, ecompose)

    src = FinFunctor(
        edges,
        vertices,
        {tid(m, s): tid(base.src_of(m), F.on_loose[m].l[s]) for m in BE.objects for s in range(F.on_loose[m].apex)},
        {
            tid(c, s): tid(base.graph.src.mor(c), F.on_loose[BE.src[c]].l[s])
            for c in BE.morphisms
            for s in range(F.on_loose[BE.src[c]].apex)
        },
    )
    tgt = FinFunctor(
        edges,
        vertices,
        {tid(m, s): tid(base.tgt_of(m), F.on_loose[m].r[s]) for m in BE.objects for s in range(F.on_loose[m].apex)},
        {
            tid(c, s): tid(base.graph.tgt.mor(c), F.on_loose[BE.src[c]].r[s])
            for c in BE.morphisms
            for s in range(F.on_loose[BE.src[c]].apex)
        },
    )
    unit = FinFunctor(
        vertices,
        edges,
        {tid(a, x): tid(base.unit.ob(a), F.unitor[a][x]) for a in BV.objects for x in range(F.on_obj[a])},
        {
            tid(u, x): tid(base.unit.mor(u), F.unitor[BV.src[u]][x])
            for u in BV.morphisms
            for x in range(F.on_obj[BV.src[u]])
        },
    )
    hcomp_obj = {}
    hcomp_mor = {}
    for (m, n), mn in base.hcomp_obj.items():
        pairs = span_compose_pairs(F.on_loose[m], F.on_loose[n])
        idx = {p: k for k, p in enumerate(pairs)}
        for (x, y), k in idx.items():
            hcomp_obj[(tid(m, x), tid(n, y))] = tid(mn, F.laxator[(m, n)][k])
    for (c1, c2), c3 in base.hcomp_mor.items():
        m1, n1 = BE.src[c1], BE.src[c2]
        pairs = span_compose_pairs(F.on_loose[m1], F.on_loose[n1])
        idx = {p: k for k, p in enumerate(pairs)}
        for (x, y), k in idx.items():
            hcomp_mor[(tid(c1, x), tid(c2, y))] = tid(c3, F.laxator[(m1, n1)][idx[(x, y)]])
    total = DoubleCat(GraphOfCats(edges, vertices, src, tgt), unit, hcomp_obj, hcomp_mor)

    from .doublecat import check_double_category

    laws = check_double_category(total)
    if laws:
        raise StructuralError(f"total of a coherent lax functor broke a law: {laws[0].message}")
    proj = DblFunctor(
        total,
        base,
        FinFunctor(
            edges,
            BE,
            {tid(m, s): m for m in BE.objects for s in range(F.on_loose[m].apex)},
            {tid(c, s): c for c in BE.morphisms for s in range(F.on_loose[BE.src[c]].apex)},
        ),
        FinFunctor(
            vertices,
            BV,
            {tid(a, x): a for a in BV.objects for x in range(F.on_obj[a])},
            {tid(u, x): u for u in BV.morphisms for x in range(F.on_obj[BV.src[u]])},
        ),
    )
    res = certify_dbl_dopf(proj)
    if not isinstance(res, DblDOpf):
        raise StructuralError(f"elements projection failed certification: {res}")
    return res


# -- isomorphism search on both sides of the correspondence ----------------------


def find_lax_iso(F: LaxDoubleFunctor, G: LaxDoubleFunctor) -> Optional[dict]:
    """Invertible tight transformation F => G over the same source.

    Components: bijections per vertex object and per loose arrow (apexwise),
    commuting with tights, legs, cells, unitors and laxators.
    """
    if F.source is not G.source and F.source.hcomp_obj != G.source.hcomp_obj:
        return None
    d = F.source
    V, E = d.vertices, d.edges
    if any(F.on_obj[a] != G.on_obj[a] for a in V.objects):
        return None
    if any(F.on_loose[m].apex != G.on_loose[m].apex for m in E.objects):
        return None
    vkeys = sorted(V.objects)
    ekeys = sorted(E.objects)

    def check(vmap: dict[str, tuple[int, ...]], emap: dict[str, tuple[int, ...]]) -> bool:
        for u in V.morphisms:
            a, b = V.src[u], V.tgt[u]
            for x in range(F.on_obj[a]):
                if vmap[b][F.on_tight[u][x]] != G.on_tight[u][vmap[a][x]]:
                    return False
        for m in E.objects:
            sF, sG = F.on_loose[m], G.on_loose[m]
            a, b = d.src_of(m), d.tgt_of(m)
            for s in range(sF.apex):
                if sG.l[emap[m][s]] != vmap[a][sF.l[s]] or sG.r[emap[m][s]] != vmap[b][sF.r[s]]:
                    return False
        for c in E.morphisms:
            m, n = E.src[c], E.tgt[c]
            for s in range(F.on_loose[m].apex):
                if emap[n][F.on_cell[c][s]] != G.on_cell[c][emap[m][s]]:
                    return False
        for a in V.objects:
            ua = d.unit.ob(a)
            for x in range(F.on_obj[a]):
                if emap[ua][F.unitor[a][x]] != G.unitor[a][vmap[a][x]]:
                    return False
        for (m, n), mn in d.hcomp_obj.items():
            pairsF = span_compose_pairs(F.on_loose[m], F.on_loose[n])
            pairsG = span_compose_pairs(G.on_loose[m], G.on_loose[n])
            idxG = {p: k for k, p in enumerate(pairsG)}
            for k, (x, y) in enumerate(pairsF):
                kk = idxG[(emap[m][x], emap[n][y])]
                if emap[mn][F.laxator[(m, n)][k]] != G.laxator[(m, n)][kk]:
                    return False
        return True

    for vperm in itertools.product(*[itertools.permutations(range(F.on_obj[a])) for a in vkeys]):
        vmap = dict(zip(vkeys, vperm))
        # prune: tight compatibility only
        ok = all(
            vmap[V.tgt[u]][F.on_tight[u][x]] == G.on_tight[u][vmap[V.src[u]][x]]
            for u in V.morphisms
            for x in range(F.on_obj[V.src[u]])
        )
        if not ok:
            continue
        for eperm in itertools.product(
            *[itertools.permutations(range(F.on_loose[m].apex)) for m in ekeys]
        ):
            emap = dict(zip(ekeys, eperm))
            if check(vmap, emap):
                return {"vertices": vmap, "edges": emap}
    return None


def find_dbl_iso_over_base(p: DblDOpf, q: DblDOpf) -> Optional[dict]:
    """Isomorphism of total double categories over a shared base.

    Decided through the classified sides: a fiberwise invertible tight
    transformation is exactly an over-base isomorphism of totals.
    """
    return find_lax_iso(dbl_classify(p), dbl_classify(q))


def enumerate_lax_functors(d: DoubleCat, oracle: SpanOracle) -> Iterator[LaxDoubleFunctor]:
    """All coherent lax double functors from d into spans within the oracle bound.

    Deterministic order; coherence is filtered through check_lax_double_functor
    so the enumeration is usable as an independent counting oracle.
    """
    V, E = d.vertices, d.edges
    vkeys = sorted(V.objects)
    tkeys = sorted(V.non_identity_morphisms())
    ekeys = sorted(E.objects)
    ckeys = sorted(set(E.non_identity_morphisms()))

    for sizes in itertools.product(range(oracle.bound + 1), repeat=len(vkeys)):
        on_obj = dict(zip(vkeys, sizes))
        tight_choices = []
        for u in tkeys:
            n_dom, n_cod = on_obj[V.src[u]], on_obj[V.tgt[u]]
            tight_choices.append([tuple(t) for t in itertools.product(range(n_cod), repeat=n_dom)])
        for tights in itertools.product(*tight_choices):
            on_tight = dict(zip(tkeys, tights))
            for a in vkeys:
                on_tight[V.identity[a]] = tuple(range(on_obj[a]))
            # tight functoriality filter before the expensive part
            if any(
                tuple(on_tight[v][x] for x in on_tight[u]) != on_tight[w]
                for (u, v), w in V.compose.items()
            ):
                continue
            loose_choices = [
                list(oracle.spans(on_obj[d.src_of(m)], on_obj[d.tgt_of(m)])) for m in ekeys
            ]
            for looses in itertools.product(*loose_choices):
                on_loose = dict(zip(ekeys, looses))
                for F in _extend_lax(d, oracle, on_obj, on_tight, on_loose, ckeys):
                    yield F


def _extend_lax(
    d: DoubleCat,
    oracle: SpanOracle,
    on_obj: dict[str, int],
    on_tight: dict[str, tuple[int, ...]],
    on_loose: dict[str, Span],
    ckeys: list[str],
) -> Iterator[LaxDoubleFunctor]:
    V, E = d.vertices, d.edges
    cell_choices = []
    for c in ckeys:
        sm, sn = on_loose[E.src[c]], on_loose[E.tgt[c]]
        cell_choices.append([tuple(t) for t in itertools.product(range(sn.apex), repeat=sm.apex)])
    unitor_choices = []
    for a in sorted(V.objects):
        su = on_loose[d.unit.ob(a)]
        sections = [
            tuple(t)
            for t in itertools.product(range(su.apex), repeat=on_obj[a])
            if all(su.l[t[x]] == x and su.r[t[x]] == x for x in range(on_obj[a]))
        ]
        unitor_choices.append(sections)
    lax_keys = sorted(d.hcomp_obj)
    lax_choices = []
    for (m, n) in lax_keys:
        pairs = span_compose_pairs(on_loose[m], on_loose[n])
        sc = on_loose[d.hcomp(m, n)]
        lax_choices.append([tuple(t) for t in itertools.product(range(sc.apex), repeat=len(pairs))])
    for cells in itertools.product(*cell_choices):
        on_cell = dict(zip(ckeys, cells))
        for m in E.objects:
            on_cell[E.identity[m]] = tuple(range(on_loose[m].apex))
        for unitors in itertools.product(*unitor_choices):
            unitor = dict(zip(sorted(V.objects), unitors))
            for laxs in itertools.product(*lax_choices):
                laxator = dict(zip(lax_keys, laxs))
                F = LaxDoubleFunctor(d, on_obj, on_tight, on_loose, on_cell, unitor, laxator)
                if not check_lax_double_functor(F):
                    yield F


def enumerate_dbl_dopfs(d: DoubleCat, fiber_cap: int) -> Iterator[DblDOpf]:
    """All double discrete opfibrations over d with fibers of size <= fiber_cap.

    Built independently of the lax side: enumerate copresheaves on the edge
    and vertex categories, then search for unit/hcomp structure on the totals
    making the projection strict and the total a lawful double category.
    """
    from .opfib import Copresheaf, elements, enumerate_copresheaves

    V, E = d.vertices, d.edges
    for GV in enumerate_copresheaves(V, fiber_cap):
        pv = elements(GV)
        for GE in enumerate_copresheaves(E, fiber_cap):
            # src/tgt compatibility: edge fibers must project to vertex fibers
            srcs = _copresheaf_maps_over(GE, GV, d.graph.src)
            if srcs is None:
                continue
            tgts = _copresheaf_maps_over(GE, GV, d.graph.tgt)
            if tgts is None:
                continue
            pe = elements(GE)
            yield from _complete_dbl_dopf(d, pv, pe, GV, GE, srcs, tgts, fiber_cap)


def _copresheaf_maps_over(GE, GV, leg: FinFunctor):
    """Candidate fiberwise maps covering a graph leg; None if sizes forbid any."""
    out = {}
    for m in sorted(GE.base.objects):
        n_e = GE.size(m)
        n_v = GV.size(leg.ob(m))
        out[m] = [tuple(t) for t in itertools.product(range(n_v), repeat=n_e)]
        if not out[m]:
            return None
    return out


def _complete_dbl_dopf(d, pv, pe, GV, GE, srcs, tgts, fiber_cap):
    """Fill in src/tgt/unit/hcomp over the chosen fibers; yield certified results."""
    V, E = d.vertices, d.edges
    ekeys = sorted(E.objects)
    for src_pick in itertools.product(*[srcs[m] for m in ekeys]):
        smap = dict(zip(ekeys, src_pick))
        # naturality of src against transports
        if not _natural_over(GE, GV, d.graph.src, smap):
            continue
        for tgt_pick in itertools.product(*[tgts[m] for m in ekeys]):
            tmap = dict(zip(ekeys, tgt_pick))
            if not _natural_over(GE, GV, d.graph.tgt, tmap):
                continue
            yield from _complete_unit_hcomp(d, pv, pe, GV, GE, smap, tmap)


def _natural_over(GE, GV, leg: FinFunctor, comp: dict[str, tuple[int, ...]]) -> bool:
    for c in GE.base.morphisms:
        m, n = GE.base.src[c], GE.base.tgt[c]
        u = leg.mor(c)
        for s in range(GE.size(m)):
            if comp[n][GE.act(c, s)] != GV.act(u, comp[m][s]):
                return False
    return True


def _complete_unit_hcomp(d, pv, pe, GV, GE, smap, tmap):
    V, E = d.vertices, d.edges
    vkeys = sorted(V.objects)
    unit_opts = []
    for a in vkeys:
        ua = d.unit.ob(a)
        opts = [
            tuple(t)
            for t in itertools.product(range(GE.size(ua)), repeat=GV.size(a))
            if all(smap[ua][t[x]] == x and tmap[ua][t[x]] == x for x in range(GV.size(a)))
        ]
        if not opts:
            return
        unit_opts.append(opts)
    hkeys = sorted(d.hcomp_obj)
    hopts = []
    for (m, n) in hkeys:
        mn = d.hcomp_obj[(m, n)]
        pairs = [
            (x, y)
            for x in range(GE.size(m))
            for y in range(GE.size(n))
            if tmap[m][x] == smap[n][y]
        ]
        cands = []
        for pick in itertools.product(range(GE.size(mn)), repeat=len(pairs)):
            ok = all(
                smap[mn][pick[k]] == smap[m][pairs[k][0]] and tmap[mn][pick[k]] == tmap[n][pairs[k][1]]
                for k in range(len(pairs))
            )
            if ok:
                cands.append((tuple(pairs), tuple(pick)))
        if not cands:
            return
        hopts.append(cands)
    for units in itertools.product(*unit_opts):
        umap = dict(zip(vkeys, units))
        for hpick in itertools.product(*hopts):
            hmap = dict(zip(hkeys, hpick))
            res = _assemble_dbl(d, pv, pe, GV, GE, smap, tmap, umap, hmap)
            if res is not None:
                yield res


def _assemble_dbl(d, pv, pe, GV, GE, smap, tmap, umap, hmap):
    """Build the candidate total double functor and certify it; None if unlawful."""
    from .doublecat import check_double_category

    V, E = d.vertices, d.edges
    et, vt = pe.total, pv.total
    src = FinFunctor(
        et,
        vt,
        {tid(m, s): tid(d.src_of(m), smap[m][s]) for m in E.objects for s in range(GE.size(m))},
        {
            tid(c, s): tid(d.graph.src.mor(c), smap[E.src[c]][s])
            for c in E.morphisms
            for s in range(GE.size(E.src[c]))
        },
    )
    tgt = FinFunctor(
        et,
        vt,
        {tid(m, s): tid(d.tgt_of(m), tmap[m][s]) for m in E.objects for s in range(GE.size(m))},
        {
            tid(c, s): tid(d.graph.tgt.mor(c), tmap[E.src[c]][s])
            for c in E.morphisms
            for s in range(GE.size(E.src[c]))
        },
    )
    if check_functor(src) or check_functor(tgt):
        return None
    unit = FinFunctor(
        vt,
        et,
        {tid(a, x): tid(d.unit.ob(a), umap[a][x]) for a in V.objects for x in range(GV.size(a))},
        {
            tid(u, x): tid(d.unit.mor(u), umap[V.src[u]][x])
            for u in V.morphisms
            for x in range(GV.size(V.src[u]))
        },
    )
    if check_functor(unit):
        return None
    hcomp_obj = {}
    hcomp_mor = {}
    for (m, n), (pairs, pick) in hmap.items():
        mn = d.hcomp_obj[(m, n)]
        idx = {p: k for k, p in enumerate(pairs)}
        for (x, y), k in idx.items():
            hcomp_obj[(tid(m, x), tid(n, y))] = tid(mn, pick[k])
    for (c1, c2), c3 in d.hcomp_mor.items():
        m1, n1 = E.src[c1], E.src[c2]
        key = (m1, n1) if (m1, n1) in hmap else None
        if key is None:
            return None
        pairs, pick = hmap[key]
        idx = {p: k for k, p in enumerate(pairs)}
        for (x, y), k in idx.items():
            # strictness forces the lift of the composite cell
            tot = hcomp_obj[(tid(m1, x), tid(n1, y))]
            s = int(__import__("json").loads(tot)[1])
            hcomp_mor[(tid(c1, x), tid(c2, y))] = tid(c3, s)
    total = DoubleCat(GraphOfCats(et, vt, src, tgt), unit, hcomp_obj, hcomp_mor)
    if check_double_category(total):
        return None
    proj = DblFunctor(total, d, pe.proj, pv.proj)
    res = certify_dbl_dopf(proj)
    return res if isinstance(res, DblDOpf) else None


def lax_iso_classes(items: list[LaxDoubleFunctor]) -> list[list[int]]:
    classes: list[list[int]] = []
    reps: list[LaxDoubleFunctor] = []
    for i, F in enumerate(items):
        placed = False
        for k, G in enumerate(reps):
            if find_lax_iso(F, G) is not None:
                classes[k].append(i)
                placed = True
                break
        if not placed:
            reps.append(F)
            classes.append([i])
    return classes


def dbl_dopf_iso_classes(items: list[DblDOpf]) -> list[list[int]]:
    classes: list[list[int]] = []
    reps: list[DblDOpf] = []
    for i, p in enumerate(items):
        placed = False
        for k, q in enumerate(reps):
            if find_dbl_iso_over_base(p, q) is not None:
                classes[k].append(i)
                placed = True
                break
        if not placed:
            reps.append(p)
            classes.append([i])
    return classes


# -- the coslice-presheaf classifier of an indexed 2-category ---------------------


def coslice(c: FinCat, obj: str) -> tuple[FinCat, dict[str, str]]:
    """The coslice obj/c: objects are morphisms out of obj.  Returns (cat, obj->mor)."""
    objs = [m for m in c.morphisms if c.src[m] == obj]
    mors = []
    for p in objs:
        for q in objs:
            for h in c.hom(c.tgt[p], c.tgt[q]):
                if c.comp(p, h) == q:
                    mors.append((tid(h, p, q), p, q))
    compose = {}
    mset = {m for m, _, _ in mors}
    import json

    for m1, p1, q1 in mors:
        h1 = json.loads(m1)[0]
        for m2, p2, q2 in mors:
            if q1 != p2:
                continue
            h2 = json.loads(m2)[0]
            m3 = tid(c.comp(h1, h2), p1, q2)
            if m3 in mset:
                compose[(m1, m2)] = m3
    identity = {p: tid(c.identity[c.tgt[p]], p, p) for p in objs}
    return FinCat(objs, mors, identity, compose), {o: o for o in objs}


@dataclass(frozen=True)
class IndexedClassifier:
    """Value of the pointwise classifier of set-valued diagrams at one index object."""

    index: FinCat
    bound: int
    at: str
    coslice_cat: FinCat
    value: FunctorCat  # the functor category [at/index, FinSet_{<= bound}]


def indexed_classifier(C: FinCat, bound: int, c: str) -> IndexedClassifier:
    """The classifier of set-valued diagrams on C, materialized at the object c.

    Its value at c is the functor category out of the coslice c/C into sets of
    size <= bound; the action along morphisms of C is `indexed_classifier_action`.
    """
    if c not in set(C.objects):
        raise StructuralError(f"unknown index object {c}")
    cs, _ = coslice(C, c)
    val = functor_category(cs, finset_cat(bound))
    return IndexedClassifier(C, bound, c, cs, val)


def coslice_precompose(C: FinCat, f: str) -> FinFunctor:
    """The functor tgt(f)/C -> src(f)/C given by pasting f on the left."""
    a, b = C.src[f], C.tgt[f]
    cb, _ = coslice(C, b)
    ca, _ = coslice(C, a)
    on_obj = {g: C.comp(f, g) for g in cb.objects}
    import json

    on_mor = {}
    for m in cb.morphisms:
        h, p, q = json.loads(m)
        on_mor[m] = tid(h, C.comp(f, p), C.comp(f, q))
    return FinFunctor(cb, ca, on_obj, on_mor)


def indexed_classifier_action(C: FinCat, bound: int, f: str) -> FinFunctor:
    """Restriction along f: the classifier value at src(f) maps to the one at tgt(f)."""
    src_val = indexed_classifier(C, bound, C.src[f])
    tgt_val = indexed_classifier(C, bound, C.tgt[f])
    pre = coslice_precompose(C, f)
    on_obj = {}
    for oid, F in src_val.value.functor_of.items():
        restricted = pre.then(F)
        key = restricted.table()
        # find the id of the restricted functor in the target functor category
        for tid_, G in tgt_val.value.functor_of.items():
            if G.table() == key:
                on_obj[oid] = tid_
                break
    on_mor = {}
    for mid, t in src_val.value.nat_of.items():
        rf = pre.then(t.src)
        rg = pre.then(t.tgt)
        comps = {x: t.at(pre.ob(x)) for x in pre.dom.objects}
        rt = type(t)(rf, rg, comps)
        for mid2, t2 in tgt_val.value.nat_of.items():
            if (
                t2.src.table() == rf.table()
                and t2.tgt.table() == rg.table()
                and t2.table() == rt.table()
            ):
                on_mor[mid] = mid2
                break
    out = FinFunctor(src_val.value, tgt_val.value, on_obj, on_mor)
    bad = check_functor(out)
    if bad:
        raise StructuralError(f"classifier action failed: {bad[0].message}")
    return out


def functor_cat_iso_from_shape_iso(
    fc_from: FunctorCat, fc_to: FunctorCat, shape_iso: FinFunctor
) -> Optional[FinFunctor]:
    """Lift an isomorphism of index shapes to the functor categories over them.

    `shape_iso` runs from the index of fc_to to the index of fc_from, so that
    precomposition carries objects of fc_from to objects of fc_to.  The built
    functor is verified bijective and functorial before being returned.
    """
    obj_lookup = {F.table(): oid for oid, F in fc_to.functor_of.items()}
    on_obj = {}
    for oid, F in fc_from.functor_of.items():
        key = shape_iso.then(F).table()
        target = obj_lookup.get(key)
        if target is None:
            return None
        on_obj[oid] = target
    mor_lookup: dict[tuple, str] = {}
    for mid, t in fc_to.nat_of.items():
        mor_lookup[(t.src.table(), t.tgt.table(), t.table())] = mid
    on_mor = {}
    for mid, t in fc_from.nat_of.items():
        rf = shape_iso.then(t.src)
        rg = shape_iso.then(t.tgt)
        comps = tuple(sorted((x, t.at(shape_iso.ob(x))) for x in shape_iso.dom.objects))
        target = mor_lookup.get((rf.table(), rg.table(), comps))
        if target is None:
            return None
        on_mor[mid] = target
    out = FinFunctor(fc_from, fc_to, on_obj, on_mor)
    if check_functor(out):
        return None
    if len(set(on_obj.values())) != len(fc_to.objects) or len(set(on_mor.values())) != len(
        fc_to.morphisms
    ):
        return None
    return out


def graph_shape_cat() -> FinCat:
    """The two-object index shape with a parallel pair e =| v (source and target)."""
    mors = [("ie", "e", "e"), ("iv", "v", "v"), ("s", "e", "v"), ("t", "e", "v")]
    compose = {
        ("ie", "ie"): "ie",
        ("iv", "iv"): "iv",
        ("ie", "s"): "s",
        ("s", "iv"): "s",
        ("ie", "t"): "t",
        ("t", "iv"): "t",
    }
    return FinCat(["e", "v"], mors, {"e": "ie", "v": "iv"}, compose)


def span_shape_cat() -> FinCat:
    """mid -> left, mid -> right: the shape whose set-diagrams are spans."""
    mors = [
        ("im", "mid", "mid"),
        ("il", "left", "left"),
        ("ir", "right", "right"),
        ("pl", "mid", "left"),
        ("pr", "mid", "right"),
    ]
    compose = {
        ("im", "im"): "im",
        ("il", "il"): "il",
        ("ir", "ir"): "ir",
        ("im", "pl"): "pl",
        ("pl", "il"): "pl",
        ("im", "pr"): "pr",
        ("pr", "ir"): "pr",
    }
    return FinCat(["mid", "left", "right"], mors, {"mid": "im", "left": "il", "right": "ir"}, compose)

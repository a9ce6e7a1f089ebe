"""Discrete opfibrations in Cat: recognition, elements, classification, pullback.

A `Copresheaf` is a finite-set-valued functor out of a finite base; the
classifying object of sets is never materialized, a copresheaf *is* the
classifying map.  A `DOpf` carries its projection together with a full lift
certificate: for every total object e and every base morphism out of the
image of e, the unique lift starting at e.

Fibers are always indexed canonically, by sorted total-category object ids;
that one deterministic choice is what makes `classify` a function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .fincat import (
    CapExceeded,
    CommaSquare,
    FinCat,
    FinFunctor,
    NatTrans,
    StructuralError,
    Violation,
    check_functor,
    comma,
    identity_functor,
    pullback_cat,
    tid,
)


class Copresheaf:
    """A functor base -> FinSet; fibers are {0..n-1}, actions are target arrays."""

    def __init__(self, base: FinCat, on_obj: dict[str, int], on_mor: dict[str, tuple[int, ...]]):
        self.base = base
        self.on_obj = dict(on_obj)
        self.on_mor = {m: tuple(v) for m, v in on_mor.items()}

    def size(self, b: str) -> int:
        return self.on_obj[b]

    def act(self, m: str, x: int) -> int:
        return self.on_mor[m][x]

    def precompose(self, g: FinFunctor) -> "Copresheaf":
        """Restrict along g: dom(g) -> base."""
        return Copresheaf(
            g.dom,
            {a: self.on_obj[g.ob(a)] for a in g.dom.objects},
            {m: self.on_mor[g.mor(m)] for m in g.dom.morphisms},
        )

    def table(self) -> tuple:
        return (tuple(sorted(self.on_obj.items())), tuple(sorted(self.on_mor.items())))


def check_copresheaf(F: Copresheaf) -> list[Violation]:
    out: list[Violation] = []
    c = F.base
    for b in c.objects:
        if b not in F.on_obj or F.on_obj[b] < 0:
            out.append(Violation("structural", f"fiber missing at {b}"))
    for m in c.morphisms:
        if m not in F.on_mor:
            out.append(Violation("structural", f"action missing at {m}"))
            continue
        arr = F.on_mor[m]
        if len(arr) != F.on_obj.get(c.src[m], -1):
            out.append(Violation("structural", f"action at {m} has wrong domain size"))
        elif any(not (0 <= v < F.on_obj.get(c.tgt[m], 0)) for v in arr):
            out.append(Violation("structural", f"action at {m} lands outside fiber"))
    if out:
        return out
    for a in c.objects:
        if F.on_mor[c.identity[a]] != tuple(range(F.on_obj[a])):
            out.append(Violation("law", f"identity action at {a} is not the identity"))
    for (f, g), h in c.compose.items():
        lhs = tuple(F.on_mor[g][v] for v in F.on_mor[f])
        if lhs != F.on_mor[h]:
            out.append(Violation("law", f"functoriality fails at ({f},{g})"))
    return out


@dataclass(frozen=True)
class DOpf:
    """A certified discrete opfibration: projection plus unique-lift table."""

    total: FinCat
    base: FinCat
    proj: FinFunctor
    certificate: dict[tuple[str, str], str]  # (total object, base morphism out of its image) -> lift

    def fiber(self, b: str) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.total.objects if self.proj.ob(e) == b))

    def lift(self, e: str, m: str) -> str:
        return self.certificate[(e, m)]

    def transport(self, e: str, m: str) -> str:
        """Target object of the unique lift of m starting at e."""
        return self.total.tgt[self.certificate[(e, m)]]


@dataclass(frozen=True)
class LiftCounterexample:
    total_object: str
    base_morphism: str
    lifts: tuple[str, ...]  # zero or >= two


def is_discrete_opfib(p: FinFunctor) -> DOpf | LiftCounterexample:
    """Certify p as a discrete opfibration or exhibit a failing lifting problem."""
    cert: dict[tuple[str, str], str] = {}
    for e in p.dom.objects:
        b = p.ob(e)
        for m in p.cod.morphisms:
            if p.cod.src[m] != b:
                continue
            lifts = tuple(
                n for n in p.dom.morphisms if p.dom.src[n] == e and p.mor(n) == m
            )
            if len(lifts) != 1:
                return LiftCounterexample(e, m, lifts)
            cert[(e, m)] = lifts[0]
    return DOpf(p.dom, p.cod, p, cert)


def elements(F: Copresheaf) -> DOpf:
    """Total category of F: objects (b, x in F(b)), morphisms (f, x)."""
    B = F.base
    objs = []
    for b in B.objects:
        for x in range(F.size(b)):
            objs.append(tid(b, x))
    mors = []
    for f in B.morphisms:
        for x in range(F.size(B.src[f])):
            mors.append((tid(f, x), tid(B.src[f], x), tid(B.tgt[f], F.act(f, x))))
    if len(mors) > 10_000:
        raise CapExceeded("elements total exceeds cap")
    identity = {tid(b, x): tid(B.identity[b], x) for b in B.objects for x in range(F.size(b))}
    compose = {}
    for f, g in B.composable_pairs():
        h = B.comp(f, g)
        for x in range(F.size(B.src[f])):
            compose[(tid(f, x), tid(g, F.act(f, x)))] = tid(h, x)
    total = FinCat(objs, mors, identity, compose)
    on_obj = {tid(b, x): b for b in B.objects for x in range(F.size(b))}
    on_mor = {tid(f, x): f for f in B.morphisms for x in range(F.size(B.src[f]))}
    proj = FinFunctor(total, B, on_obj, on_mor)
    res = is_discrete_opfib(proj)
    assert isinstance(res, DOpf), "elements projection must be a discrete opfibration"
    return res


def classify(p: DOpf) -> Copresheaf:
    """Copresheaf of fibers, with cocartesian transport read off the certificate."""
    B = p.base
    fibers = {b: p.fiber(b) for b in B.objects}
    index = {b: {e: i for i, e in enumerate(fibers[b])} for b in B.objects}
    on_obj = {b: len(fibers[b]) for b in B.objects}
    on_mor = {}
    for m in B.morphisms:
        a, b = B.src[m], B.tgt[m]
        on_mor[m] = tuple(index[b][p.transport(e, m)] for e in fibers[a])
    return Copresheaf(B, on_obj, on_mor)


def pullback_opfib(p: DOpf, g: FinFunctor) -> DOpf:
    """Pullback of a discrete opfibration along g into its base."""
    if g.cod.morphisms != p.base.morphisms or g.cod.objects != p.base.objects:
        raise StructuralError("pullback_opfib: codomain mismatch")
    square = pullback_cat(g, p.proj)
    res = is_discrete_opfib(square.proj0)
    assert isinstance(res, DOpf), "pullback of a discrete opfibration failed certification"
    return res


def representable_opfib(b: FinFunctor) -> DOpf:
    """The projection b/B -> B out of the comma of b with the identity of B."""
    square = comma(b, identity_functor(b.cod))
    res = is_discrete_opfib(square.proj1)
    assert isinstance(res, DOpf), "comma projection must be a discrete opfibration"
    return res


def constant_singleton(base: FinCat) -> Copresheaf:
    return Copresheaf(
        base, {b: 1 for b in base.objects}, {m: (0,) for m in base.morphisms}
    )


# -- natural isomorphism of copresheaves, isomorphism over the base ------------


def find_copresheaf_iso(F: Copresheaf, G: Copresheaf) -> Optional[dict[str, tuple[int, ...]]]:
    """Natural bijection F => G over a shared base, by backtracking search."""
    B = F.base
    objs = sorted(B.objects)
    if any(F.size(b) != G.size(b) for b in objs):
        return None
    comps: dict[str, tuple[int, ...]] = {}

    def natural_so_far() -> bool:
        for m in B.morphisms:
            a, b = B.src[m], B.tgt[m]
            if a in comps and b in comps:
                for x in range(F.size(a)):
                    if comps[b][F.act(m, x)] != G.act(m, comps[a][x]):
                        return False
        return True

    def rec(i: int) -> Optional[dict[str, tuple[int, ...]]]:
        if i == len(objs):
            return dict(comps)
        b = objs[i]
        for perm in itertools.permutations(range(F.size(b))):
            comps[b] = perm
            if natural_so_far():
                res = rec(i + 1)
                if res is not None:
                    return res
            del comps[b]
        return None

    return rec(0)


def find_iso_over_base(p: DOpf, q: DOpf) -> Optional[FinFunctor]:
    """Isomorphism of totals commuting with the projections to a shared base."""
    if p.base.morphisms != q.base.morphisms:
        return None
    iso = find_copresheaf_iso(classify(p), classify(q))
    if iso is None:
        return None
    # rebuild the total-level functor from the fiberwise bijection
    pf = {b: p.fiber(b) for b in p.base.objects}
    qf = {b: q.fiber(b) for b in q.base.objects}
    on_obj = {}
    for b in p.base.objects:
        for i, e in enumerate(pf[b]):
            on_obj[e] = qf[b][iso[b][i]]
    on_mor = {}
    for n in p.total.morphisms:
        e = p.total.src[n]
        m = p.proj.mor(n)
        on_mor[n] = q.lift(on_obj[e], m)
    f = FinFunctor(p.total, q.total, on_obj, on_mor)
    assert not check_functor(f)
    return f


def enumerate_copresheaves(base: FinCat, fiber_cap: int) -> Iterator[Copresheaf]:
    """All copresheaves on `base` with fibers of size <= fiber_cap.

    Deterministic order: sizes lexicographically by sorted object id, then
    actions lexicographically by sorted morphism id.
    """
    objs = sorted(base.objects)
    nonid = sorted(base.non_identity_morphisms())
    for sizes in itertools.product(range(fiber_cap + 1), repeat=len(objs)):
        on_obj = dict(zip(objs, sizes))
        on_mor: dict[str, tuple[int, ...]] = {
            base.identity[b]: tuple(range(on_obj[b])) for b in objs
        }

        def consistent(m: str) -> bool:
            for (f, g), h in base.compose.items():
                if m not in (f, g, h):
                    continue
                af, ag, ah = on_mor.get(f), on_mor.get(g), on_mor.get(h)
                if af is None or ag is None or ah is None:
                    continue
                if tuple(ag[v] for v in af) != ah:
                    return False
            return True

        def rec(i: int) -> Iterator[Copresheaf]:
            if i == len(nonid):
                yield Copresheaf(base, dict(on_obj), dict(on_mor))
                return
            m = nonid[i]
            dom_n = on_obj[base.src[m]]
            cod_n = on_obj[base.tgt[m]]
            for arr in itertools.product(range(cod_n), repeat=dom_n):
                on_mor[m] = arr
                if consistent(m):
                    yield from rec(i + 1)
                del on_mor[m]

        yield from rec(0)


def copresheaf_iso_classes(items: list[Copresheaf]) -> list[list[int]]:
    """Group indices by natural isomorphism; deterministic representative order."""
    classes: list[list[int]] = []
    reps: list[Copresheaf] = []
    for i, F in enumerate(items):
        placed = False
        for k, G in enumerate(reps):
            if find_copresheaf_iso(F, G) is not None:
                classes[k].append(i)
                placed = True
                break
        if not placed:
            reps.append(F)
            classes.append([i])
    return classes


def dopf_iso_classes_over_base(items: list[DOpf]) -> list[list[int]]:
    """Group discrete opfibrations over one base by isomorphism over that base."""
    classes: list[list[int]] = []
    reps: list[DOpf] = []
    for i, p in enumerate(items):
        placed = False
        for k, q in enumerate(reps):
            if find_iso_over_base(p, q) is not None:
                classes[k].append(i)
                placed = True
                break
        if not placed:
            reps.append(p)
            classes.append([i])
    return classes

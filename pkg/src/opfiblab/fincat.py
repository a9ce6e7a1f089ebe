"""Finite categories, functors, natural transformations and their finite limits.

Everything downstream builds on the types here.  Conventions, fixed once:

* composition is written diagrammatically: ``compose(f, g)`` means "f then g",
  so for f: a -> b and g: b -> c the composite runs a -> c;
* object and morphism ids are strings, equality of ids is string equality,
  and any structural comparison of categories goes through explicit search
  (`find_iso`, `find_split_equivalence`), never through id coincidence;
* constructed categories refuse to grow past `MAX_MORPHISMS` morphisms and
  raise `CapExceeded` instead of degrading.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

MAX_MORPHISMS = 10_000


class CapExceeded(RuntimeError):
    """A size or search cap was hit; the result is inconclusive, not false."""


class StructuralError(ValueError):
    """Input data is malformed (dangling ids, mismatched boundaries)."""


def tid(*parts: object) -> str:
    """Canonical id for a derived object; injective on part tuples."""
    return json.dumps(parts, separators=(",", ":"), sort_keys=False)


@dataclass(frozen=True)
class Violation:
    kind: str  # "structural" | "law"
    message: str


class FinCat:
    """A finite category given by explicit tables.

    `morphisms` is a list of (id, src, tgt); `identity` maps object -> morphism
    id; `compose` maps composable pairs (f, g), meaning f-then-g, to ids.
    The constructor only normalizes; run `check_category` to validate.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[tuple[str, str, str]],
        identity: dict[str, str],
        compose: dict[tuple[str, str], str],
    ):
        self.objects: tuple[str, ...] = tuple(objects)
        mors = tuple(morphisms)
        self.morphisms: tuple[str, ...] = tuple(m for m, _, _ in mors)
        self.src: dict[str, str] = {m: s for m, s, _ in mors}
        self.tgt: dict[str, str] = {m: t for m, _, t in mors}
        self.identity: dict[str, str] = dict(identity)
        self.compose: dict[tuple[str, str], str] = dict(compose)
        if len(self.morphisms) > MAX_MORPHISMS:
            raise CapExceeded(f"{len(self.morphisms)} morphisms exceeds cap {MAX_MORPHISMS}")
        self._hom: dict[tuple[str, str], tuple[str, ...]] = {}
        for m in self.morphisms:
            key = (self.src[m], self.tgt[m])
            self._hom.setdefault(key, ())
        homs: dict[tuple[str, str], list[str]] = {k: [] for k in self._hom}
        for m in self.morphisms:
            homs[(self.src[m], self.tgt[m])].append(m)
        self._hom = {k: tuple(v) for k, v in homs.items()}
        self._identity_set = frozenset(self.identity.values())

    # -- basic accessors -------------------------------------------------

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._hom.get((a, b), ())

    def comp(self, f: str, g: str) -> str:
        """Composite f-then-g; raises StructuralError on non-composable pairs."""
        try:
            return self.compose[(f, g)]
        except KeyError:
            raise StructuralError(f"no composite for ({f!r}, {g!r})") from None

    def comp_many(self, ms: Iterable[str], at_object: Optional[str] = None) -> str:
        """Left fold of a composable list; empty list gives identity at `at_object`."""
        ms = list(ms)
        if not ms:
            if at_object is None:
                raise StructuralError("empty composite needs an object")
            return self.identity[at_object]
        acc = ms[0]
        for m in ms[1:]:
            acc = self.comp(acc, m)
        return acc

    def is_identity(self, m: str) -> bool:
        return m in self._identity_set

    def composable_pairs(self) -> Iterator[tuple[str, str]]:
        for f in self.morphisms:
            for g in self.morphisms:
                if self.tgt[f] == self.src[g]:
                    yield (f, g)

    def non_identity_morphisms(self) -> tuple[str, ...]:
        return tuple(m for m in self.morphisms if not self.is_identity(m))

    def __repr__(self) -> str:
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def check_category(c: FinCat) -> list[Violation]:
    """Report every violated category law; empty list means valid.

    Structural problems (dangling ids, missing tables) are reported before
    and separately from law violations, in a deterministic order.
    """
    out: list[Violation] = []
    objset = set(c.objects)
    morset = set(c.morphisms)
    if len(c.objects) != len(objset):
        out.append(Violation("structural", "duplicate object ids"))
    if len(c.morphisms) != len(morset):
        out.append(Violation("structural", "duplicate morphism ids"))
    for m in c.morphisms:
        if c.src[m] not in objset:
            out.append(Violation("structural", f"morphism {m}: dangling src {c.src[m]}"))
        if c.tgt[m] not in objset:
            out.append(Violation("structural", f"morphism {m}: dangling tgt {c.tgt[m]}"))
    for a in c.objects:
        i = c.identity.get(a)
        if i is None:
            out.append(Violation("structural", f"object {a}: no identity assigned"))
        elif i not in morset:
            out.append(Violation("structural", f"object {a}: identity {i} is not a morphism"))
        elif c.src[i] != a or c.tgt[i] != a:
            out.append(Violation("structural", f"object {a}: identity {i} is not an endomorphism of {a}"))
    for (f, g), h in sorted(c.compose.items()):
        if f not in morset or g not in morset or h not in morset:
            out.append(Violation("structural", f"compose table ({f},{g})={h}: dangling id"))
            continue
        if c.tgt[f] != c.src[g]:
            out.append(Violation("structural", f"compose table entry ({f},{g}) is not composable"))
        elif c.src[h] != c.src[f] or c.tgt[h] != c.tgt[g]:
            out.append(Violation("structural", f"compose ({f},{g})={h}: boundary mismatch"))
    if out:
        # laws are only meaningful on structurally sound tables
        return out
    for f in c.morphisms:
        g = c.compose.get((f, c.identity[c.tgt[f]]))
        if g != f:
            out.append(Violation("law", f"right identity fails at {f}: got {g}"))
        g = c.compose.get((c.identity[c.src[f]], f))
        if g != f:
            out.append(Violation("law", f"left identity fails at {f}: got {g}"))
    for f, g in c.composable_pairs():
        if (f, g) not in c.compose:
            out.append(Violation("law", f"compose table not total at ({f},{g})"))
    if any(v.kind == "law" for v in out):
        return out
    for f, g in c.composable_pairs():
        for h in c.morphisms:
            if c.src[h] != c.tgt[g]:
                continue
            if c.compose[(c.compose[(f, g)], h)] != c.compose[(f, c.compose[(g, h)])]:
                out.append(Violation("law", f"associativity fails at ({f},{g},{h})"))
    return out


class FinFunctor:
    """A functor between finite categories, as explicit object/morphism maps."""

    def __init__(self, dom: FinCat, cod: FinCat, on_obj: dict[str, str], on_mor: dict[str, str]):
        self.dom = dom
        self.cod = cod
        self.on_obj = dict(on_obj)
        self.on_mor = dict(on_mor)

    def ob(self, x: str) -> str:
        return self.on_obj[x]

    def mor(self, m: str) -> str:
        return self.on_mor[m]

    def then(self, other: "FinFunctor") -> "FinFunctor":
        if other.dom is not self.cod and other.dom.morphisms != self.cod.morphisms:
            raise StructuralError("functor composition boundary mismatch")
        return FinFunctor(
            self.dom,
            other.cod,
            {x: other.on_obj[y] for x, y in self.on_obj.items()},
            {m: other.on_mor[n] for m, n in self.on_mor.items()},
        )

    def table(self) -> tuple:
        return (tuple(sorted(self.on_obj.items())), tuple(sorted(self.on_mor.items())))

    def __repr__(self) -> str:
        return f"FinFunctor({self.dom!r} -> {self.cod!r})"


def identity_functor(c: FinCat) -> FinFunctor:
    return FinFunctor(c, c, {x: x for x in c.objects}, {m: m for m in c.morphisms})


def constant_functor(dom: FinCat, cod: FinCat, at: str) -> FinFunctor:
    i = cod.identity[at]
    return FinFunctor(dom, cod, {x: at for x in dom.objects}, {m: i for m in dom.morphisms})


def check_functor(f: FinFunctor) -> list[Violation]:
    out: list[Violation] = []
    for x in f.dom.objects:
        if x not in f.on_obj:
            out.append(Violation("structural", f"object {x} unmapped"))
        elif f.on_obj[x] not in set(f.cod.objects):
            out.append(Violation("structural", f"object {x} maps to dangling {f.on_obj[x]}"))
    for m in f.dom.morphisms:
        if m not in f.on_mor:
            out.append(Violation("structural", f"morphism {m} unmapped"))
        elif f.on_mor[m] not in set(f.cod.morphisms):
            out.append(Violation("structural", f"morphism {m} maps to dangling {f.on_mor[m]}"))
    if out:
        return out
    for m in f.dom.morphisms:
        fm = f.on_mor[m]
        if f.cod.src[fm] != f.on_obj[f.dom.src[m]] or f.cod.tgt[fm] != f.on_obj[f.dom.tgt[m]]:
            out.append(Violation("law", f"src/tgt not preserved at {m}"))
    for a in f.dom.objects:
        if f.on_mor[f.dom.identity[a]] != f.cod.identity[f.on_obj[a]]:
            out.append(Violation("law", f"identity not preserved at {a}"))
    for pair, h in f.dom.compose.items():
        m, n = pair
        fm, fn = f.on_mor.get(m), f.on_mor.get(n)
        if fm is None or fn is None:
            continue
        if f.cod.compose.get((fm, fn)) != f.on_mor.get(h):
            out.append(Violation("law", f"composition not preserved at ({m},{n})"))
    return out


class NatTrans:
    """A natural transformation, components indexed by objects of the domain."""

    def __init__(self, src: FinFunctor, tgt: FinFunctor, components: dict[str, str]):
        self.src = src
        self.tgt = tgt
        self.components = dict(components)

    def at(self, x: str) -> str:
        return self.components[x]

    def then(self, other: "NatTrans") -> "NatTrans":
        cod = self.src.cod
        comps = {x: cod.comp(self.components[x], other.components[x]) for x in self.components}
        return NatTrans(self.src, other.tgt, comps)

    def table(self) -> tuple:
        return tuple(sorted(self.components.items()))


def check_nat_trans(t: NatTrans) -> list[Violation]:
    out: list[Violation] = []
    f, g = t.src, t.tgt
    cod = f.cod
    for x in f.dom.objects:
        c = t.components.get(x)
        if c is None or c not in set(cod.morphisms):
            out.append(Violation("structural", f"component at {x} missing or dangling"))
            continue
        if cod.src[c] != f.on_obj[x] or cod.tgt[c] != g.on_obj[x]:
            out.append(Violation("law", f"component at {x} has wrong boundary"))
    if out:
        return out
    for m in f.dom.morphisms:
        a, b = f.dom.src[m], f.dom.tgt[m]
        left = cod.comp(f.on_mor[m], t.components[b])
        right = cod.comp(t.components[a], g.on_mor[m])
        if left != right:
            out.append(Violation("law", f"naturality fails at {m}"))
    return out


# -- small standard categories -----------------------------------------------


def discrete_cat(names: Iterable[str]) -> FinCat:
    names = list(names)
    mors = [(tid("id", x), x, x) for x in names]
    return FinCat(
        names,
        mors,
        {x: tid("id", x) for x in names},
        {(m, m): m for m, _, _ in mors},
    )


def terminal_cat() -> FinCat:
    return discrete_cat(["*"])


def empty_cat() -> FinCat:
    return FinCat([], [], {}, {})


def walking_arrow() -> FinCat:
    """The category 2: objects a, b and one arrow t: a -> b."""
    mors = [("ia", "a", "a"), ("ib", "b", "b"), ("t", "a", "b")]
    compose = {
        ("ia", "ia"): "ia",
        ("ib", "ib"): "ib",
        ("ia", "t"): "t",
        ("t", "ib"): "t",
    }
    return FinCat(["a", "b"], mors, {"a": "ia", "b": "ib"}, compose)


def chain_cat(n: int) -> FinCat:
    """The poset 0 < 1 < ... < n as a category."""
    objs = [str(i) for i in range(n + 1)]
    mors = []
    compose = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            mors.append((tid("le", i, j), str(i), str(j)))
    for i in range(n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                compose[(tid("le", i, j), tid("le", j, k))] = tid("le", i, k)
    return FinCat(objs, mors, {str(i): tid("le", i, i) for i in range(n + 1)}, compose)


def parallel_pair_cat() -> FinCat:
    mors = [("ia", "a", "a"), ("ib", "b", "b"), ("f", "a", "b"), ("g", "a", "b")]
    compose = {
        ("ia", "ia"): "ia",
        ("ib", "ib"): "ib",
        ("ia", "f"): "f",
        ("f", "ib"): "f",
        ("ia", "g"): "g",
        ("g", "ib"): "g",
    }
    return FinCat(["a", "b"], mors, {"a": "ia", "b": "ib"}, compose)


def contractible_groupoid(n: int) -> FinCat:
    """n objects with exactly one morphism between any two (all invertible)."""
    objs = [f"x{i}" for i in range(n)]
    mors = [(tid("u", i, j), f"x{i}", f"x{j}") for i in range(n) for j in range(n)]
    compose = {
        (tid("u", i, j), tid("u", j, k)): tid("u", i, k)
        for i in range(n)
        for j in range(n)
        for k in range(n)
    }
    return FinCat(objs, mors, {f"x{i}": tid("u", i, i) for i in range(n)}, compose)


def fn_id(m: int, n: int, imgs: tuple[int, ...]) -> str:
    return tid("fn", m, n, list(imgs))


def finset_cat(bound: int) -> FinCat:
    """Skeletal category of sets {0..k-1} for k <= bound, with all functions."""
    objs = [str(n) for n in range(bound + 1)]
    mors: list[tuple[str, str, str]] = []
    table: dict[str, tuple[int, int, tuple[int, ...]]] = {}
    for m in range(bound + 1):
        for n in range(bound + 1):
            for imgs in itertools.product(range(n), repeat=m):
                mid = fn_id(m, n, imgs)
                mors.append((mid, str(m), str(n)))
                table[mid] = (m, n, imgs)
    compose = {}
    for f, (m, n, fi) in table.items():
        for g, (n2, p, gi) in table.items():
            if n2 != n:
                continue
            compose[(f, g)] = fn_id(m, p, tuple(gi[i] for i in fi))
    identity = {str(n): fn_id(n, n, tuple(range(n))) for n in range(bound + 1)}
    return FinCat(objs, mors, identity, compose)


def finset_fn_parts(mid: str) -> tuple[int, int, tuple[int, ...]]:
    """Decode a finset_cat морphism id back to (dom size, cod size, images)."""
    kind, m, n, imgs = json.loads(mid)
    assert kind == "fn"
    return m, n, tuple(imgs)


def pointed_sets_cat(bound: int) -> FinCat:
    """Pointed sets {0..k-1} with basepoint 0, k in 1..bound, point-preserving maps."""
    objs = [str(n) for n in range(1, bound + 1)]
    mors: list[tuple[str, str, str]] = []
    table: dict[str, tuple[int, int, tuple[int, ...]]] = {}
    for m in range(1, bound + 1):
        for n in range(1, bound + 1):
            for rest in itertools.product(range(n), repeat=m - 1):
                imgs = (0,) + rest
                mid = fn_id(m, n, imgs)
                mors.append((mid, str(m), str(n)))
                table[mid] = (m, n, imgs)
    compose = {}
    for f, (m, n, fi) in table.items():
        for g, (n2, p, gi) in table.items():
            if n2 != n:
                continue
            compose[(f, g)] = fn_id(m, p, tuple(gi[i] for i in fi))
    identity = {str(n): fn_id(n, n, tuple(range(n))) for n in range(1, bound + 1)}
    return FinCat(objs, mors, identity, compose)


# -- limits -------------------------------------------------------------------


@dataclass(frozen=True)
class CommaSquare:
    cat: FinCat
    proj0: FinFunctor  # to dom(f)
    proj1: FinFunctor  # to dom(g)
    filler: NatTrans  # f . proj0 => g . proj1


def comma(f: FinFunctor, g: FinFunctor) -> CommaSquare:
    """Comma category of the cospan (f, g): objects (x, y, phi: f x -> g y)."""
    if f.cod.morphisms != g.cod.morphisms or f.cod.objects != g.cod.objects:
        raise StructuralError("comma: codomain mismatch")
    base = f.cod
    objs: list[str] = []
    parts: dict[str, tuple[str, str, str]] = {}
    for x in f.dom.objects:
        for y in g.dom.objects:
            for phi in base.hom(f.ob(x), g.ob(y)):
                o = tid(x, y, phi)
                objs.append(o)
                parts[o] = (x, y, phi)
    mors: list[tuple[str, str, str]] = []
    mparts: dict[str, tuple[str, str, str, str]] = {}
    for o1 in objs:
        x1, y1, p1 = parts[o1]
        for o2 in objs:
            x2, y2, p2 = parts[o2]
            for u in f.dom.hom(x1, x2):
                fu = f.mor(u)
                for v in g.dom.hom(y1, y2):
                    if base.comp(p1, g.mor(v)) == base.comp(fu, p2):
                        m = tid(u, v, o1, o2)
                        mors.append((m, o1, o2))
                        mparts[m] = (u, v, o1, o2)
    if len(mors) > MAX_MORPHISMS:
        raise CapExceeded("comma category exceeds morphism cap")
    identity = {o: tid(f.dom.identity[parts[o][0]], g.dom.identity[parts[o][1]], o, o) for o in objs}
    compose = {}
    for m1, (u1, v1, a1, b1) in mparts.items():
        for m2, (u2, v2, a2, b2) in mparts.items():
            if b1 != a2:
                continue
            compose[(m1, m2)] = tid(f.dom.comp(u1, u2), g.dom.comp(v1, v2), a1, b2)
    cat = FinCat(objs, mors, identity, compose)
    proj0 = FinFunctor(cat, f.dom, {o: parts[o][0] for o in objs}, {m: mparts[m][0] for m in mparts})
    proj1 = FinFunctor(cat, g.dom, {o: parts[o][1] for o in objs}, {m: mparts[m][1] for m in mparts})
    filler = NatTrans(proj0.then(f), proj1.then(g), {o: parts[o][2] for o in objs})
    return CommaSquare(cat, proj0, proj1, filler)


@dataclass(frozen=True)
class PullbackSquare:
    cat: FinCat
    proj0: FinFunctor  # to dom(f)
    proj1: FinFunctor  # to dom(g)


def pullback_cat(f: FinFunctor, g: FinFunctor) -> PullbackSquare:
    """Strict pullback: matching pairs of objects and morphisms."""
    if f.cod.morphisms != g.cod.morphisms or f.cod.objects != g.cod.objects:
        raise StructuralError("pullback: codomain mismatch")
    objs = []
    parts = {}
    for x in f.dom.objects:
        for y in g.dom.objects:
            if f.ob(x) == g.ob(y):
                o = tid(x, y)
                objs.append(o)
                parts[o] = (x, y)
    mors = []
    mparts = {}
    for o1 in objs:
        x1, y1 = parts[o1]
        for o2 in objs:
            x2, y2 = parts[o2]
            for u in f.dom.hom(x1, x2):
                fu = f.mor(u)
                for v in g.dom.hom(y1, y2):
                    if fu == g.mor(v):
                        m = tid(u, v)
                        mors.append((m, o1, o2))
                        mparts[m] = (u, v)
    if len(mors) > MAX_MORPHISMS:
        raise CapExceeded("pullback category exceeds morphism cap")
    identity = {o: tid(f.dom.identity[parts[o][0]], g.dom.identity[parts[o][1]]) for o in objs}
    compose = {}
    for m1, (u1, v1) in mparts.items():
        for m2, (u2, v2) in mparts.items():
            if f.dom.tgt[u1] == f.dom.src[u2] and g.dom.tgt[v1] == g.dom.src[v2]:
                if tid(u1, v1) in mparts and tid(u2, v2) in mparts:
                    compose[(m1, m2)] = tid(f.dom.comp(u1, u2), g.dom.comp(v1, v2))
    cat = FinCat(objs, mors, identity, compose)
    proj0 = FinFunctor(cat, f.dom, {o: parts[o][0] for o in objs}, {m: mparts[m][0] for m in mparts})
    proj1 = FinFunctor(cat, g.dom, {o: parts[o][1] for o in objs}, {m: mparts[m][1] for m in mparts})
    return PullbackSquare(cat, proj0, proj1)


def product_cat(c: FinCat, d: FinCat) -> PullbackSquare:
    """Binary product, as the pullback over the terminal category."""
    one = terminal_cat()
    return pullback_cat(constant_functor(c, one, "*"), constant_functor(d, one, "*"))


def slice_cat(c: FinCat, y: str) -> tuple[FinCat, dict[str, str]]:
    """The slice c/y: objects are morphisms into y.  Returns (cat, obj -> morphism)."""
    objs = [m for m in c.morphisms if c.tgt[m] == y]
    mors = []
    compose = {}
    for p in objs:
        for q in objs:
            for h in c.hom(c.src[p], c.src[q]):
                if c.comp(h, q) == p:
                    mors.append((tid(h, p, q), p, q))
    mset = {m for m, _, _ in mors}
    for m1, p1, q1 in mors:
        h1 = json.loads(m1)[0]
        for m2, p2, q2 in mors:
            if q1 != p2:
                continue
            h2 = json.loads(m2)[0]
            m3 = tid(c.comp(h1, h2), p1, q2)
            if m3 in mset:
                compose[(m1, m2)] = m3
    identity = {p: tid(c.identity[c.src[p]], p, p) for p in objs}
    cat = FinCat(objs, mors, identity, compose)
    return cat, {o: o for o in objs}


# -- functor enumeration, functor categories ----------------------------------


def enumerate_functors(c: FinCat, d: FinCat, cap: int = 200_000) -> Iterator[FinFunctor]:
    """All functors c -> d, by backtracking over object then morphism images."""
    objs = list(c.objects)
    nonid = list(c.non_identity_morphisms())
    triples = _triples_by_morphism(c)
    count = 0

    def obj_assignments() -> Iterator[dict[str, str]]:
        for imgs in itertools.product(d.objects, repeat=len(objs)):
            yield dict(zip(objs, imgs))

    for on_obj in obj_assignments():
        on_mor: dict[str, str] = {c.identity[a]: d.identity[on_obj[a]] for a in objs}

        def consistent(m: str) -> bool:
            # check every complete composition triple involving m
            for f, g, h in triples[m]:
                fm, gm, hm = on_mor.get(f), on_mor.get(g), on_mor.get(h)
                if fm is None or gm is None or hm is None:
                    continue
                if d.compose.get((fm, gm)) != hm:
                    return False
            return True

        def rec(i: int) -> Iterator[dict[str, str]]:
            nonlocal count
            if i == len(nonid):
                yield dict(on_mor)
                return
            m = nonid[i]
            for img in d.hom(on_obj[c.src[m]], on_obj[c.tgt[m]]):
                count += 1
                if count > cap:
                    raise CapExceeded("functor enumeration cap hit")
                on_mor[m] = img
                if consistent(m):
                    yield from rec(i + 1)
                del on_mor[m]

        for table in rec(0):
            yield FinFunctor(c, d, dict(on_obj), table)


def enumerate_nat_trans(f: FinFunctor, g: FinFunctor, iso_only: bool = False) -> Iterator[NatTrans]:
    """All natural transformations f => g (optionally only invertible ones)."""
    cod = f.cod
    objs = list(f.dom.objects)
    comps: dict[str, str] = {}
    inverses = _iso_table(cod) if iso_only else None

    def rec(i: int) -> Iterator[NatTrans]:
        if i == len(objs):
            yield NatTrans(f, g, dict(comps))
            return
        x = objs[i]
        for cand in cod.hom(f.ob(x), g.ob(x)):
            if iso_only and cand not in inverses:
                continue
            comps[x] = cand
            ok = True
            # naturality against already-assigned components
            for m in f.dom.morphisms:
                a, b = f.dom.src[m], f.dom.tgt[m]
                if a in comps and b in comps:
                    if cod.comp(f.mor(m), comps[b]) != cod.comp(comps[a], g.mor(m)):
                        ok = False
                        break
            if ok:
                yield from rec(i + 1)
            del comps[x]

    yield from rec(0)


def _iso_table(c: FinCat) -> dict[str, str]:
    """Map each invertible morphism to its inverse."""
    out = {}
    for m in c.morphisms:
        for n in c.hom(c.tgt[m], c.src[m]):
            if c.comp(m, n) == c.identity[c.src[m]] and c.comp(n, m) == c.identity[c.src[n]]:
                out[m] = n
                break
    return out


class FunctorCat(FinCat):
    """A functor category that remembers which functor/transformation each id names."""

    functor_of: dict[str, FinFunctor]
    nat_of: dict[str, NatTrans]


def functor_category(c: FinCat, d: FinCat, cap: int = MAX_MORPHISMS) -> FunctorCat:
    """The category of all functors c -> d and all natural transformations."""
    functors = list(enumerate_functors(c, d))
    functors.sort(key=lambda f: f.table())
    objs = [tid("F", i) for i in range(len(functors))]
    by_id = {tid("F", i): f for i, f in enumerate(functors)}
    comp_keys = sorted(c.objects)
    mors = []
    nat_by_id = {}
    # per (i, j): component tuple -> morphism id, for cheap compose lookups
    index: dict[tuple[int, int], dict[tuple[str, ...], str]] = {}
    nats: dict[tuple[int, int], list[tuple[str, tuple[str, ...]]]] = {}
    total = 0
    for i, f in enumerate(functors):
        for j, g in enumerate(functors):
            bucket = []
            for k, t in enumerate(enumerate_nat_trans(f, g)):
                m = tid("N", i, j, k)
                comps = tuple(t.at(x) for x in comp_keys)
                mors.append((m, objs[i], objs[j]))
                nat_by_id[m] = t
                bucket.append((m, comps))
                total += 1
                if total > cap:
                    raise CapExceeded("functor category exceeds cap")
            nats[(i, j)] = bucket
            index[(i, j)] = {comps: m for m, comps in bucket}
    identity = {}
    for i, f in enumerate(functors):
        comps = tuple(d.identity[f.ob(x)] for x in comp_keys)
        identity[objs[i]] = index[(i, i)][comps]
    compose = {}
    for (i, j), bucket1 in nats.items():
        for (j2, k), bucket2 in nats.items():
            if j2 != j:
                continue
            lookup = index[(i, k)]
            for m1, comps1 in bucket1:
                for m2, comps2 in bucket2:
                    composed = tuple(d.comp(a, b) for a, b in zip(comps1, comps2))
                    compose[(m1, m2)] = lookup[composed]
    cat = FunctorCat(objs, mors, identity, compose)
    cat.functor_of = by_id
    cat.nat_of = nat_by_id
    return cat


# -- isomorphism and equivalence search ----------------------------------------


def _degree_profile(c: FinCat, x: str) -> tuple:
    outs = sorted(len(c.hom(x, y)) for y in c.objects)
    ins = sorted(len(c.hom(y, x)) for y in c.objects)
    return (len(c.hom(x, x)), tuple(outs), tuple(ins))


def find_iso(c: FinCat, d: FinCat, cap: int = 2_000_000) -> Optional[FinFunctor]:
    """Exhaustive search for an isomorphism of categories c -> d.

    A functor bijective on objects and morphisms is automatically an iso, so
    the search runs over bijective functors with degree-profile pruning.
    """
    if len(c.objects) != len(d.objects) or len(c.morphisms) != len(d.morphisms):
        return None
    if sorted(_degree_profile(c, x) for x in c.objects) != sorted(
        _degree_profile(d, y) for y in d.objects
    ):
        return None
    objs = list(c.objects)
    count = 0

    def rec_obj(i: int, assign: dict[str, str], used: set[str]) -> Optional[FinFunctor]:
        nonlocal count
        if i == len(objs):
            return _extend_iso_on_morphisms(c, d, assign)
        x = objs[i]
        px = _degree_profile(c, x)
        for y in d.objects:
            if y in used or _degree_profile(d, y) != px:
                continue
            # hom sizes against already-assigned objects must match
            ok = True
            for x2, y2 in assign.items():
                if len(c.hom(x, x2)) != len(d.hom(y, y2)) or len(c.hom(x2, x)) != len(d.hom(y2, y)):
                    ok = False
                    break
            if not ok:
                continue
            count += 1
            if count > cap:
                raise CapExceeded("iso search cap hit")
            assign[x] = y
            used.add(y)
            res = rec_obj(i + 1, assign, used)
            if res is not None:
                return res
            del assign[x]
            used.discard(y)
        return None

    return rec_obj(0, {}, set())


def _triples_by_morphism(c: FinCat) -> dict[str, list[tuple[str, str, str]]]:
    out: dict[str, list[tuple[str, str, str]]] = {m: [] for m in c.morphisms}
    for (f, g), h in c.compose.items():
        trip = (f, g, h)
        for m in {f, g, h}:
            out[m].append(trip)
    return out


def _extend_iso_on_morphisms(c: FinCat, d: FinCat, on_obj: dict[str, str]) -> Optional[FinFunctor]:
    nonid = sorted(c.non_identity_morphisms(), key=lambda m: (c.src[m], c.tgt[m], m))
    on_mor = {c.identity[a]: d.identity[on_obj[a]] for a in c.objects}
    used = set(on_mor.values())
    triples = _triples_by_morphism(c)

    def consistent(m: str) -> bool:
        for f, g, h in triples[m]:
            fm, gm, hm = on_mor.get(f), on_mor.get(g), on_mor.get(h)
            if fm is None or gm is None or hm is None:
                continue
            if d.compose.get((fm, gm)) != hm:
                return False
        return True

    def rec(i: int) -> Optional[dict[str, str]]:
        if i == len(nonid):
            return dict(on_mor)
        m = nonid[i]
        for img in d.hom(on_obj[c.src[m]], on_obj[c.tgt[m]]):
            if img in used or d.is_identity(img):
                continue
            on_mor[m] = img
            used.add(img)
            if consistent(m):
                res = rec(i + 1)
                if res is not None:
                    return res
            del on_mor[m]
            used.discard(img)
        return None

    table = rec(0)
    if table is None:
        return None
    return FinFunctor(c, d, on_obj, table)


def essentially_surjective(f: FinFunctor) -> tuple[bool, Optional[str]]:
    """Check every codomain object is isomorphic to an image object."""
    isos = _iso_table(f.cod)
    hit = set(f.on_obj.values())
    for b in f.cod.objects:
        if b in hit:
            continue
        found = False
        for a in hit:
            for m in f.cod.hom(a, b):
                if m in isos:
                    found = True
                    break
            if found:
                break
        if not found:
            return False, b
    return True, None


def fully_faithful(f: FinFunctor) -> tuple[bool, Optional[tuple[str, str]]]:
    for x in f.dom.objects:
        for y in f.dom.objects:
            imgs = [f.mor(m) for m in f.dom.hom(x, y)]
            if len(set(imgs)) != len(imgs) or len(imgs) != len(f.cod.hom(f.ob(x), f.ob(y))):
                return False, (x, y)
    return True, None


def is_equivalence(f: FinFunctor) -> bool:
    return fully_faithful(f)[0] and essentially_surjective(f)[0]


@dataclass(frozen=True)
class SplitEquivalence:
    forward: FinFunctor
    inverse: FinFunctor
    unit: NatTrans  # id_dom => forward . inverse
    counit: NatTrans  # inverse . forward => id_cod


def find_split_equivalence(f: FinFunctor) -> Optional[SplitEquivalence]:
    """Produce an explicit pseudo-inverse with invertible unit/counit, or None.

    Absence is certified by an essential-surjectivity or fully-faithfulness
    failure; presence builds the inverse by transporting along chosen isos,
    so no blind search over all functors is needed.
    """
    if not fully_faithful(f)[0] or not essentially_surjective(f)[0]:
        return None
    c, d = f.dom, f.cod
    isos = _iso_table(d)
    # choose, per codomain object, a domain object plus iso eps_b : f(a_b) -> b
    choice: dict[str, tuple[str, str]] = {}
    for b in d.objects:
        found = None
        for a in sorted(c.objects):
            if f.ob(a) == b:
                found = (a, d.identity[b])
                break
        if found is None:
            for a in sorted(c.objects):
                for m in sorted(d.hom(f.ob(a), b)):
                    if m in isos:
                        found = (a, m)
                        break
                if found:
                    break
        assert found is not None
        choice[b] = found

    def preimage(x: str, y: str, m: str) -> str:
        for cand in c.hom(x, y):
            if f.mor(cand) == m:
                return cand
        raise StructuralError("fully faithful preimage missing")

    g_obj = {b: choice[b][0] for b in d.objects}
    g_mor = {}
    for v in d.morphisms:
        b1, b2 = d.src[v], d.tgt[v]
        a1, e1 = choice[b1]
        a2, e2 = choice[b2]
        w = d.comp(d.comp(e1, v), isos[e2])
        g_mor[v] = preimage(a1, a2, w)
    g = FinFunctor(d, c, g_obj, g_mor)
    unit_comps = {}
    for a in c.objects:
        b = f.ob(a)
        ab, eb = choice[b]
        unit_comps[a] = preimage(a, ab, isos[eb])
    unit = NatTrans(identity_functor(c), f.then(g), unit_comps)
    counit = NatTrans(g.then(f), identity_functor(d), {b: choice[b][1] for b in d.objects})
    res = SplitEquivalence(f, g, unit, counit)
    assert not check_functor(g), "constructed inverse is not a functor"
    assert not check_nat_trans(unit) and not check_nat_trans(counit)
    return res


def find_natural_iso(f: FinFunctor, g: FinFunctor) -> Optional[NatTrans]:
    for t in enumerate_nat_trans(f, g, iso_only=True):
        return t
    return None


# -- universal property verification -------------------------------------------


def default_probe_cats() -> list[FinCat]:
    """Small shapes used to test universal properties by exhaustive cones."""
    return [empty_cat(), terminal_cat(), discrete_cat(["p", "q"]), walking_arrow(), chain_cat(2)]


def check_comma_universal(
    f: FinFunctor, g: FinFunctor, square: CommaSquare, probes: Optional[list[FinCat]] = None
) -> list[Violation]:
    """Verify the 1- and 2-dimensional comma property against all probe cones."""
    out: list[Violation] = []
    base = f.cod
    for shape in probes if probes is not None else default_probe_cats():
        cones = []
        for h0 in enumerate_functors(shape, f.dom):
            for h1 in enumerate_functors(shape, g.dom):
                for phi in enumerate_nat_trans(h0.then(f), h1.then(g)):
                    cones.append((h0, h1, phi))
        factored = []
        for h0, h1, phi in cones:
            us = [
                u
                for u in enumerate_functors(shape, square.cat)
                if u.then(square.proj0).table() == h0.table()
                and u.then(square.proj1).table() == h1.table()
                and all(square.filler.at(u.ob(x)) == phi.at(x) for x in shape.objects)
            ]
            if len(us) != 1:
                out.append(
                    Violation("law", f"comma 1-dim factorization count {len(us)} != 1 for a cone")
                )
                return out
            factored.append((h0, h1, phi, us[0]))
        # 2-dimensional part: cone morphisms factor uniquely
        for (h0, h1, phi, u), (h0b, h1b, phib, ub) in itertools.product(factored, repeat=2):
            for s0 in enumerate_nat_trans(h0, h0b):
                for s1 in enumerate_nat_trans(h1, h1b):
                    compatible = all(
                        base.comp(phi.at(x), g.mor(s1.at(x)))
                        == base.comp(f.mor(s0.at(x)), phib.at(x))
                        for x in shape.objects
                    )
                    if not compatible:
                        continue
                    taus = [
                        t
                        for t in enumerate_nat_trans(u, ub)
                        if all(
                            square.proj0.mor(t.at(x)) == s0.at(x)
                            and square.proj1.mor(t.at(x)) == s1.at(x)
                            for x in shape.objects
                        )
                    ]
                    if len(taus) != 1:
                        out.append(Violation("law", "comma 2-dim factorization not unique"))
                        return out
    return out


def check_pullback_universal(
    f: FinFunctor, g: FinFunctor, square: PullbackSquare, probes: Optional[list[FinCat]] = None
) -> list[Violation]:
    out: list[Violation] = []
    for shape in probes if probes is not None else default_probe_cats():
        for h0 in enumerate_functors(shape, f.dom):
            for h1 in enumerate_functors(shape, g.dom):
                if h0.then(f).table() != h1.then(g).table():
                    continue
                us = [
                    u
                    for u in enumerate_functors(shape, square.cat)
                    if u.then(square.proj0).table() == h0.table()
                    and u.then(square.proj1).table() == h1.table()
                ]
                if len(us) != 1:
                    out.append(
                        Violation("law", f"pullback factorization count {len(us)} != 1 for a cone")
                    )
                    return out
    return out

"""Finite categories, functors and natural transformations as data.

Arrows are indices into per-pair hom-sets; composition is a table
``comp[(X, Y, Z)][g, f] = g ∘ f`` for ``f ∈ hom(X, Y)``, ``g ∈ hom(Y, Z)``.
Concrete categories (full subcategories of FinSet, built by
:func:`subuniverse`) additionally remember the function table of each arrow.

A functor into the FinSet universe stores, per pair of objects, an int array
of shape ``(|hom(X, Y)|, |F X|)`` whose row ``h`` is the table of ``F h``.
Presheaves on ``c`` are functors on ``op_category(c)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterator, Mapping

import numpy as np

from .finset import (
    EnumerationOverflow,
    FinFn,
    FinSet,
    all_tables,
    check_budget,
    encode_tables,
    fn_index,
    get_budget,
)
from .report import Check, Report

Obj = Hashable


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FinCat:
    """A finite category given by hom sizes, composition tables and identities."""

    objects: tuple
    homs: Mapping[tuple, int]
    comp: Mapping[tuple, np.ndarray]
    ids: Mapping[Obj, int]
    name: str = field(default="", compare=False)
    # concrete data: underlying size of each object and function table of each arrow
    sizes: Mapping[Obj, int] | None = field(default=None, compare=False)
    arrows: Mapping[tuple, np.ndarray] | None = field(default=None, compare=False)

    def hom(self, x: Obj, y: Obj) -> FinSet:
        return FinSet(self.homs[(x, y)])

    def compose(self, x: Obj, y: Obj, z: Obj, g: int, f: int) -> int:
        return int(self.comp[(x, y, z)][g, f])

    def identity(self, x: Obj) -> int:
        return self.ids[x]

    @property
    def is_concrete(self) -> bool:
        return self.sizes is not None and self.arrows is not None

    def arrow_table(self, x: Obj, y: Obj, h: int) -> tuple[int, ...]:
        """Underlying function of arrow ``h`` (concrete categories only)."""
        assert self.arrows is not None
        return tuple(int(v) for v in self.arrows[(x, y)][h])

    def arrow_of_table(self, x: Obj, y: Obj, table) -> int | None:
        """The arrow whose underlying function is ``table``, if any."""
        assert self.arrows is not None
        rows = self.arrows[(x, y)]
        t = np.asarray(table, dtype=np.int64)
        if rows.shape[0] == 0:
            return None
        hit = np.nonzero((rows == t).all(axis=1))[0]
        return int(hit[0]) if len(hit) else None

    def object_of_size(self, n: int) -> Obj | None:
        if self.sizes is None:
            return None
        for o in self.objects:
            if self.sizes[o] == n:
                return o
        return None

    def pairs(self) -> Iterator[tuple]:
        return itertools.product(self.objects, repeat=2)

    def arrow_count(self) -> int:
        return sum(self.homs.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinCat):
            return NotImplemented
        if self.objects != other.objects or dict(self.homs) != dict(other.homs):
            return False
        if dict(self.ids) != dict(other.ids):
            return False
        return all(np.array_equal(self.comp[k], other.comp[k]) for k in self.comp)

    def __hash__(self) -> int:
        return hash((self.objects, tuple(sorted(self.homs.items(), key=repr))))

    def __repr__(self) -> str:
        return f"FinCat({self.name or self.objects!r})"


# ---------------------------------------------------------------- builders


def subuniverse(sizes, name: str | None = None) -> FinCat:
    """Full subcategory of FinSet on the listed sizes; hom = all functions."""
    sizes = tuple(int(s) for s in sizes)
    if len(set(sizes)) != len(sizes):
        raise ValueError("subuniverse sizes must be distinct")
    total = sum(n**m for m in sizes for n in sizes)
    check_budget(total, "subuniverse")
    arrows = {(m, n): _frozen(all_tables(m, n)) for m in sizes for n in sizes}
    homs = {k: v.shape[0] for k, v in arrows.items()}
    ids = {m: fn_index(range(m), m) for m in sizes}
    comp = {}
    for x in sizes:
        for y in sizes:
            fa = arrows[(x, y)]
            for z in sizes:
                ga = arrows[(y, z)]
                if x == 0:
                    comp[(x, y, z)] = _frozen(np.zeros((ga.shape[0], fa.shape[0]), dtype=np.int64))
                    continue
                composite = ga[:, fa] if fa.shape[0] and ga.shape[0] else np.zeros((ga.shape[0], fa.shape[0], x), dtype=np.int64)
                comp[(x, y, z)] = _frozen(encode_tables(composite, z))
    return FinCat(
        objects=sizes,
        homs=homs,
        comp=comp,
        ids=ids,
        name=name or f"subuniverse{list(sizes)}",
        sizes={m: m for m in sizes},
        arrows=arrows,
    )


def fin_skeleton(k: int) -> FinCat:
    """The category of finite cardinals 0..k and all functions between them."""
    if k > 4:
        raise EnumerationOverflow(sum(n**m for m in range(k + 1) for n in range(k + 1)), get_budget(), "fin_skeleton")
    return subuniverse(range(k + 1), name=f"fin_skeleton({k})")


def discrete_category(objs) -> FinCat:
    objs = tuple(objs)
    homs = {(x, y): int(x == y) for x in objs for y in objs}
    comp = {}
    for x, y, z in itertools.product(objs, repeat=3):
        comp[(x, y, z)] = _frozen(np.zeros((homs[(y, z)], homs[(x, y)]), dtype=np.int64))
    return FinCat(objs, homs, comp, {x: 0 for x in objs}, name=f"discrete{list(objs)}")


def poset_category(objs, leq) -> FinCat:
    """Thin category on ``objs``; ``leq`` is a set of pairs (reflexive-transitive closure taken)."""
    objs = tuple(objs)
    rel = {(x, x) for x in objs} | set(leq)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    homs = {(x, y): int((x, y) in rel) for x in objs for y in objs}
    comp = {}
    for x, y, z in itertools.product(objs, repeat=3):
        comp[(x, y, z)] = _frozen(np.zeros((homs[(y, z)], homs[(x, y)]), dtype=np.int64))
    return FinCat(objs, homs, comp, {x: 0 for x in objs}, name=f"poset{list(objs)}")


def monoid_category(mult_table, unit: int, obj: Obj = "*") -> FinCat:
    """One-object category from a monoid multiplication table ``m[g][f] = g·f``."""
    m = np.asarray(mult_table, dtype=np.int64)
    return FinCat((obj,), {(obj, obj): m.shape[0]}, {(obj, obj, obj): _frozen(m)}, {obj: unit}, name="monoid")


def op_category(c: FinCat) -> FinCat:
    """Reverse every arrow; ``comp_op[g, f] = comp[f, g]`` on the reversed triple."""
    homs = {(x, y): c.homs[(y, x)] for x, y in c.pairs()}
    comp = {(x, y, z): _frozen(c.comp[(z, y, x)].T) for x, y, z in itertools.product(c.objects, repeat=3)}
    name = c.name[3:-1] if c.name.startswith("op(") else f"op({c.name})"
    return FinCat(c.objects, homs, comp, dict(c.ids), name=name)


def from_tables(objects, homs: Mapping[tuple, int], comp: Mapping[tuple, Any], ids: Mapping[Obj, int], name: str = "") -> FinCat:
    return FinCat(
        tuple(objects),
        dict(homs),
        {k: _frozen(np.asarray(v, dtype=np.int64).reshape(homs[(k[1], k[2])], homs[(k[0], k[1])])) for k, v in comp.items()},
        dict(ids),
        name=name,
    )


# ---------------------------------------------------------------- checks


def check_category(c: FinCat) -> Report:
    """Identity and associativity laws, exhaustively, with the first violation."""
    rep = Report()
    unit = rep.new("category/identity", "id ∘ f = f = f ∘ id")
    assoc = rep.new("category/associativity", "h ∘ (g ∘ f) = (h ∘ g) ∘ f")
    for x, y in c.pairs():
        n = c.homs[(x, y)]
        if n == 0:
            continue
        left = c.comp[(x, y, y)][c.ids[y], :]
        right = c.comp[(x, x, y)][:, c.ids[x]]
        unit.count += 2 * n
        ar = np.arange(n)
        for side, arr in (("left", left), ("right", right)):
            bad = np.nonzero(arr != ar)[0]
            if len(bad):
                unit.fail(side=side, src=x, tgt=y, arrow=int(bad[0]), got=int(arr[bad[0]]))
    for x, y, z, w in itertools.product(c.objects, repeat=4):
        nf, ng, nh = c.homs[(x, y)], c.homs[(y, z)], c.homs[(z, w)]
        if not (nf and ng and nh):
            continue
        gf = c.comp[(x, y, z)]  # (ng, nf)
        hg = c.comp[(y, z, w)]  # (nh, ng)
        xzw = c.comp[(x, z, w)]  # (nh, n_xz)
        xyw = c.comp[(x, y, w)]  # (n_yw, nf)
        assoc.count += nf * ng * nh
        for h in range(nh):
            a = xzw[h][gf]  # (ng, nf)
            b = xyw[hg[h]]  # (ng, nf)
            if not np.array_equal(a, b):
                g, f = np.argwhere(a != b)[0]
                assoc.fail(objects=[x, y, z, w], h=h, g=int(g), f=int(f), left=int(a[g, f]), right=int(b[g, f]))
                break
    return rep


# ---------------------------------------------------------------- functors


@dataclass(frozen=True, eq=False)
class FunctorData:
    """A functor ``src -> tgt``; ``tgt is None`` means the FinSet universe.

    For FinSet-valued functors ``obj[X]`` is a :class:`FinSet` and
    ``arr[(X, Y)]`` has shape ``(|hom(X, Y)|, |F X|)``.  For functors between
    finite categories ``obj[X]`` is a target object and ``arr[(X, Y)]`` is a
    vector of target arrow indices.
    """

    src: FinCat
    obj: Mapping[Obj, Any]
    arr: Mapping[tuple, np.ndarray]
    tgt: FinCat | None = None
    name: str = field(default="", compare=False)

    def ob(self, x: Obj) -> Any:
        return self.obj[x]

    def size(self, x: Obj) -> int:
        return self.obj[x].size

    def fmap(self, x: Obj, y: Obj, h: int) -> FinFn:
        """``F h`` as a FinFn (FinSet-valued functors)."""
        return FinFn(self.obj[x], self.obj[y], tuple(int(v) for v in self.arr[(x, y)][h]))

    def table(self, x: Obj, y: Obj) -> np.ndarray:
        return self.arr[(x, y)]

    def __repr__(self) -> str:
        return f"FunctorData({self.name or '?'} on {self.src!r})"

    def same_as(self, other: "FunctorData") -> bool:
        if self.src != other.src:
            return False
        for x in self.src.objects:
            if self.obj[x] != other.obj[x]:
                return False
        return all(np.array_equal(self.arr[k], other.arr[k]) for k in self.arr)


def functor(src: FinCat, sizes: Mapping[Obj, int], tables: Mapping[tuple, Any], name: str = "") -> FunctorData:
    """FinSet-valued functor from object sizes and per-pair arrow tables."""
    obj = {x: FinSet(int(sizes[x])) for x in src.objects}
    arr = {}
    for x, y in src.pairs():
        a = np.asarray(tables[(x, y)], dtype=np.int64).reshape(src.homs[(x, y)], obj[x].size)
        arr[(x, y)] = _frozen(a)
    return FunctorData(src, obj, arr, None, name)


def constant_functor(src: FinCat, n: int, name: str | None = None) -> FunctorData:
    obj = {x: FinSet(n) for x in src.objects}
    arr = {(x, y): _frozen(np.tile(np.arange(n), (src.homs[(x, y)], 1))) for x, y in src.pairs()}
    return FunctorData(src, obj, arr, None, name or f"const{n}")


def inclusion(c: FinCat) -> FunctorData:
    """The inclusion of a concrete category into FinSet."""
    if not c.is_concrete:
        raise ValueError("inclusion needs a concrete category")
    obj = {x: FinSet(c.sizes[x]) for x in c.objects}
    return FunctorData(c, obj, {k: c.arrows[k] for k in c.pairs()}, None, "J")


def hom_functor(c: FinCat, x: Obj) -> FunctorData:
    """Covariant ``hom(x, -)``."""
    obj = {y: FinSet(c.homs[(x, y)]) for y in c.objects}
    arr = {(y, z): _frozen(c.comp[(x, y, z)]) for y, z in c.pairs()}
    return FunctorData(c, obj, arr, None, f"hom({x},-)")


def yoneda(c: FinCat, x: Obj) -> FunctorData:
    """The representable presheaf ``hom(-, x)`` as a functor on ``op(c)``."""
    oc = op_category(c)
    obj = {y: FinSet(c.homs[(y, x)]) for y in c.objects}
    # an op-arrow y -> z is a c-arrow h: z -> y, acting by precomposition
    arr = {}
    for y, z in c.pairs():
        pre = c.comp[(z, y, x)]  # [g ∈ hom(y,x), h ∈ hom(z,y)] -> g∘h
        arr[(y, z)] = _frozen(pre.T if pre.size else np.zeros((c.homs[(z, y)], c.homs[(y, x)]), dtype=np.int64))
    return FunctorData(oc, obj, arr, None, f"Y({x})")


def identity_functor(c: FinCat) -> FunctorData:
    arr = {k: _frozen(np.arange(c.homs[k])) for k in c.pairs()}
    return FunctorData(c, {x: x for x in c.objects}, arr, c, "id")


def compose_functors(g: FunctorData, f: FunctorData) -> FunctorData:
    """``g ∘ f`` where ``f`` lands in a finite category."""
    if f.tgt is None or f.tgt != g.src:
        raise ValueError("functors do not compose")
    c = f.src
    obj = {x: g.obj[f.obj[x]] for x in c.objects}
    arr = {}
    for x, y in c.pairs():
        fx, fy = f.obj[x], f.obj[y]
        arr[(x, y)] = _frozen(g.arr[(fx, fy)][f.arr[(x, y)]])
    return FunctorData(c, obj, arr, g.tgt, f"{g.name}∘{f.name}")


def check_functor(F: FunctorData) -> Report:
    """Preservation of identities and composition, with a witness triple."""
    rep = Report()
    ids = rep.new("functor/identity", "F id = id")
    comp = rep.new("functor/composition", "F(g ∘ f) = F g ∘ F f")
    c = F.src
    set_valued = F.tgt is None
    for x in c.objects:
        row = F.arr[(x, x)][c.ids[x]]
        ids.count += 1
        if set_valued:
            if not np.array_equal(row, np.arange(F.obj[x].size)):
                ids.fail(object=x, got=row)
        elif int(row) != F.tgt.ids[F.obj[x]]:
            ids.fail(object=x, got=int(row))
    for x, y, z in itertools.product(c.objects, repeat=3):
        nf, ng = c.homs[(x, y)], c.homs[(y, z)]
        if not (nf and ng):
            continue
        comp.count += nf * ng
        gf = c.comp[(x, y, z)]
        if set_valued and F.obj[x].size == 0:
            continue
        if set_valued:
            lhs = F.arr[(x, z)][gf]  # (ng, nf, |Fx|)
            rhs = F.arr[(y, z)][np.arange(ng)[:, None, None], F.arr[(x, y)][None, :, :]]
            if not np.array_equal(lhs, rhs):
                g, f = np.argwhere((lhs != rhs).reshape(ng, nf, -1).any(axis=2))[0]
                comp.fail(objects=[x, y, z], g=int(g), f=int(f))
        else:
            t = F.tgt
            lhs = F.arr[(x, z)][gf]
            rhs = t.comp[(F.obj[x], F.obj[y], F.obj[z])][F.arr[(y, z)][:, None], F.arr[(x, y)][None, :]]
            if not np.array_equal(lhs, rhs):
                g, f = np.argwhere(lhs != rhs)[0]
                comp.fail(objects=[x, y, z], g=int(g), f=int(f))
    return rep


# ---------------------------------------------------------------- natural transformations


@dataclass(frozen=True, eq=False)
class NatTransData:
    """A family of components ``comps[X] : F X -> G X``."""

    src: FunctorData
    tgt: FunctorData
    comps: Mapping[Obj, FinFn]

    def __getitem__(self, x: Obj) -> FinFn:
        return self.comps[x]

    def key(self) -> tuple:
        return tuple(self.comps[x].table for x in self.src.src.objects)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NatTransData):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def nat_from_tables(F: FunctorData, G: FunctorData, tables: Mapping[Obj, Any]) -> NatTransData:
    return NatTransData(F, G, {x: FinFn(F.obj[x], G.obj[x], tuple(int(v) for v in tables[x])) for x in F.src.objects})


def identity_nat(F: FunctorData) -> NatTransData:
    return NatTransData(F, F, {x: FinFn(F.obj[x], F.obj[x], tuple(range(F.obj[x].size))) for x in F.src.objects})


def check_nat(tau: NatTransData) -> Report:
    """Every naturality square ``G h ∘ τ_X = τ_Y ∘ F h`` commutes."""
    rep = Report()
    chk = rep.new("nat/naturality", "G h ∘ τ_X = τ_Y ∘ F h")
    F, G = tau.src, tau.tgt
    c = F.src
    for x, y in c.pairs():
        n = c.homs[(x, y)]
        if n == 0 or F.obj[x].size == 0:
            continue
        tx = np.asarray(tau[x].table, dtype=np.int64)
        ty = np.asarray(tau[y].table, dtype=np.int64)
        lhs = G.arr[(x, y)][:, tx]
        rhs = ty[F.arr[(x, y)]]
        chk.count += n * F.obj[x].size
        if not np.array_equal(lhs, rhs):
            h, e = np.argwhere(lhs != rhs)[0]
            chk.fail(src=x, tgt=y, arrow=int(h), element=int(e))
    return rep


def functor_category_homs(F: FunctorData, G: FunctorData) -> Iterator[NatTransData]:
    """All natural transformations ``F ⇒ G`` (complete, duplicate-free).

    Elements of F are covered by *generators*: an element not reachable from
    an earlier generator becomes one.  A natural transformation is determined
    by its values on generators; each generator's admissible values are those
    consistent with every pair of arrows sending it to the same element, and
    generators are then combined by backtracking with conflict detection.
    """
    c = F.src
    if G.src != c:
        raise ValueError("functors have different domains")
    objs = sorted(c.objects, key=lambda o: (-F.obj[o].size, c.objects.index(o)))
    offs: dict[Obj, int] = {}
    total = 0
    for o in c.objects:
        offs[o] = total
        total += F.obj[o].size
    covered = np.zeros(total, dtype=bool)
    gens: list[tuple[Obj, int]] = []
    for o in objs:
        # elements with the widest reach first, so few generators cover everything
        reach = np.zeros(F.obj[o].size, dtype=np.int64)
        for y in c.objects:
            if c.homs[(o, y)] and F.obj[o].size:
                srt = np.sort(F.arr[(o, y)], axis=0)
                reach += 1 + (np.diff(srt, axis=0) != 0).sum(axis=0)
        for xi in np.argsort(-reach, kind="stable").tolist():
            if covered[offs[o] + xi]:
                continue
            gens.append((o, xi))
            for y in c.objects:
                if c.homs[(o, y)]:
                    covered[offs[y] + F.arr[(o, y)][:, xi]] = True
    # per generator: produced element ids and implied value matrix (cands × produced)
    gen_elems: list[np.ndarray] = []
    gen_vals: list[np.ndarray] = []
    space = 1
    for o, xi in gens:
        ng = G.obj[o].size
        elems, vals = [], []
        for y in c.objects:
            n = c.homs[(o, y)]
            if n == 0:
                continue
            elems.append(offs[y] + F.arr[(o, y)][:, xi])
            vals.append(G.arr[(o, y)].T if ng else np.zeros((0, n), dtype=np.int64))  # (ng, n)
        e = np.concatenate(elems)
        v = np.concatenate(vals, axis=1) if ng else np.zeros((0, len(e)), dtype=np.int64)
        # consistency within the generator: equal elements must receive equal values
        order = np.argsort(e, kind="stable")
        e_sorted, v_sorted = e[order], v[:, order]
        uniq, first = np.unique(e_sorted, return_index=True)
        rep_vals = v_sorted[:, first]
        expand = np.searchsorted(uniq, e_sorted)
        ok = (v_sorted == rep_vals[:, expand]).all(axis=1) if len(e) else np.ones(ng, dtype=bool)
        gen_elems.append(uniq)
        gen_vals.append(rep_vals[ok])
        space *= max(int(ok.sum()), 1)
    check_budget(space, "functor_category_homs")
    val = np.full(total, -1, dtype=np.int64)

    def emit() -> NatTransData:
        comps = {}
        for o in c.objects:
            t = tuple(int(v) for v in val[offs[o]:offs[o] + F.obj[o].size])
            comps[o] = FinFn(F.obj[o], G.obj[o], t)
        return NatTransData(F, G, comps)

    def search(i: int) -> Iterator[NatTransData]:
        if i == len(gens):
            yield emit()
            return
        els = gen_elems[i]
        cur = val[els]
        assigned = cur >= 0
        for row in gen_vals[i]:
            if np.any(row[assigned] != cur[assigned]):
                continue
            val[els] = row
            yield from search(i + 1)
            val[els] = cur

    yield from search(0)

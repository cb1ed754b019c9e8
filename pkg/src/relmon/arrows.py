"""Arrows (without strength) over a finite category, and relative monads on Yoneda.

An arrow on ``𝕁`` is a family of finite sets ``R(X, Y)`` with
``pure : hom(X, Y) -> R(X, Y)`` and ``≪ : R(Y, Z) × R(X, Y) -> R(X, Z)``.
It corresponds to a relative monad on the Yoneda embedding
``𝐘 X = hom(−, X)``, with ``T X Y = R(Y, X)``; the transposition between the
two indexings lives only in :func:`arrow_to_relmon`, :func:`relmon_to_arrow`
and the morphism transports.

A :class:`PresheafRelMonad` is shallow in the Kleisli maps: a map
``k : 𝐘 X ⇒ T Y`` is a natural transformation given by its component tables,
and the Kleisli homs are enumerated by brute force with
:func:`functor_category_homs` (never via the Yoneda lemma).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .fincat import (
    FinCat,
    FunctorData,
    NatTransData,
    Obj,
    _frozen,
    check_category,
    check_functor,
    check_nat,
    functor_category_homs,
    op_category,
    poset_category,
    yoneda,
)
from .finset import FinFn, FinSet, all_tables, check_budget, encode_tables, fn_index
from .kan import Coend
from .kleisli_em import kleisli_L, kleisli_build
from .relmonad import MonadData, MonadMorphism, RelMonadData, restrict
from .report import FAIL, Check, Report

Comps = dict  # Obj -> np.ndarray component table


# ---------------------------------------------------------------- arrows


@dataclass(eq=False)
class ArrowData:
    """``R`` sizes per pair, ``pure[(X, Y)]`` per arrow, ``comp[(X, Y, Z)][s, r] = s ≪ r``."""

    base: FinCat
    R: Mapping[tuple, int]
    pure: Mapping[tuple, np.ndarray]
    comp: Mapping[tuple, np.ndarray]
    name: str = ""

    def after(self, x: Obj, y: Obj, z: Obj, s: int, r: int) -> int:
        """``s ≪ r`` for ``s ∈ R(y, z)``, ``r ∈ R(x, y)``."""
        return int(self.comp[(x, y, z)][s, r])

    def pure_id(self, x: Obj) -> int:
        return int(self.pure[(x, x)][self.base.ids[x]])


def category_arrow(base: FinCat, c: FinCat, L: FunctorData, name: str = "") -> ArrowData:
    """The arrow of an identity-on-objects functor ``L : base -> c``: ``R = hom_c``, ``pure = L``, ``≪ = ∘``."""
    R = {k: c.homs[k] for k in base.pairs()}
    pure = {k: _frozen(np.asarray(L.arr[k], dtype=np.int64).reshape(base.homs[k])) for k in base.pairs()}
    comp = {k: c.comp[k] for k in itertools.product(base.objects, repeat=3)}
    return ArrowData(base, R, pure, comp, name)


def relmonad_arrow(t: RelMonadData, name: str | None = None) -> ArrowData:
    """``R(X, Y) = Kl(T)(X, Y)``, ``pure = L``, ``≪`` = Kleisli composition."""
    kl = kleisli_build(t)
    return category_arrow(t.base, kl, kleisli_L(t, kl), name or f"kleisli-arrow({t.name})")


def kleisli_arrow(m: MonadData, base: FinCat, name: str | None = None) -> ArrowData:
    """The arrow of an ordinary monad's Kleisli category on a concrete base."""
    from .fincat import inclusion

    return relmonad_arrow(restrict(m, inclusion(base)), name or f"kleisli-arrow({m.name})")


def function_arrow(base: FinCat) -> ArrowData:
    """``R(X, Y) = Y^X``, ``pure`` = inclusion, ``≪`` = composition."""
    from .instances.vec import IDENTITY

    return kleisli_arrow(IDENTITY, base, "function")


def maybe_arrow(base: FinCat) -> ArrowData:
    """``R(X, Y) = (Y + 1)^X`` with Kleisli composition of the maybe monad."""
    from .instances.vec import MAYBE

    return kleisli_arrow(MAYBE, base, "maybe-kleisli")


def powerset_arrow(base: FinCat) -> ArrowData:
    """``R(X, Y) = (2^Y)^X`` with relational composition."""
    from .instances.vec import POWERSET

    return kleisli_arrow(POWERSET, base, "powerset-kleisli")


def state_arrow(s: int, base: FinCat) -> ArrowData:
    """``R(X, Y) = (Y × S)^{X × S}``, ``pure f = f × S``, ``≪`` = composition."""
    from .instances.state import times_functor

    J = times_functor(base, s)
    unit = {x: FinFn(J.obj[x], J.obj[x], tuple(range(J.obj[x].size))) for x in base.objects}
    t = RelMonadData(base, J, dict(J.obj), unit, lambda x, y, k: k, name=f"state[{s}]")
    return relmonad_arrow(t, f"state[{s}]")


def broken_arrow(a: ArrowData, x: Obj) -> ArrowData:
    """Swap the arguments of ``≪`` on the single triple ``(x, x, x)`` (a deliberate defect)."""
    comp = dict(a.comp)
    comp[(x, x, x)] = _frozen(a.comp[(x, x, x)].T)
    return ArrowData(a.base, a.R, a.pure, comp, f"{a.name}-swapped@{x}")


def check_arrow_laws(a: ArrowData) -> Report:
    """The four arrow laws exhaustively, plus functoriality of the derived profunctor action."""
    c = a.base
    rep = Report()
    pf = rep.new("arrow/pure-functorial", "pure (g ∘ f) = pure g ≪ pure f")
    ru = rep.new("arrow/right-unit", "s ≪ pure id = s")
    lu = rep.new("arrow/left-unit", "pure id ≪ r = r")
    asc = rep.new("arrow/associativity", "t ≪ (s ≪ r) = (t ≪ s) ≪ r")
    prof = rep.new("arrow/profunctor", "R(f, g) r = pure g ≪ r ≪ pure f is functorial in f and g")
    for x, y, z in itertools.product(c.objects, repeat=3):
        nf, ng = c.homs[(x, y)], c.homs[(y, z)]
        if not (nf and ng):
            continue
        lhs = a.pure[(x, z)][c.comp[(x, y, z)]]
        rhs = a.comp[(x, y, z)][a.pure[(y, z)][:, None], a.pure[(x, y)][None, :]]
        pf.count += nf * ng
        if not np.array_equal(lhs, rhs):
            g, f = np.argwhere(lhs != rhs)[0]
            pf.fail(objects=[x, y, z], g=int(g), f=int(f), left=int(lhs[g, f]), right=int(rhs[g, f]))
    for x, y in c.pairs():
        n = a.R[(x, y)]
        if n == 0:
            continue
        ar = np.arange(n)
        right = a.comp[(x, x, y)][:, a.pure_id(x)]
        left = a.comp[(x, y, y)][a.pure_id(y), :]
        ru.count += n
        lu.count += n
        if not np.array_equal(right, ar):
            s = int(np.nonzero(right != ar)[0][0])
            ru.fail(src=x, tgt=y, s=s, got=int(right[s]))
        if not np.array_equal(left, ar):
            r = int(np.nonzero(left != ar)[0][0])
            lu.fail(src=x, tgt=y, r=r, got=int(left[r]))
    for x, y, z, w in itertools.product(c.objects, repeat=4):
        nr, ns, nt = a.R[(x, y)], a.R[(y, z)], a.R[(z, w)]
        if not (nr and ns and nt) or asc.status == FAIL:
            continue
        sr = a.comp[(x, y, z)]  # (ns, nr)
        ts = a.comp[(y, z, w)]  # (nt, ns)
        xzw, xyw = a.comp[(x, z, w)], a.comp[(x, y, w)]
        asc.count += nr * ns * nt
        for t in range(nt):
            lhs = xzw[t][sr]
            rhs = xyw[ts[t]]
            if not np.array_equal(lhs, rhs):
                s, r = np.argwhere(lhs != rhs)[0]
                asc.fail(objects=[x, y, z, w], t=t, s=int(s), r=int(r), left=int(lhs[s, r]), right=int(rhs[s, r]))
                break
    # contravariant: (r ≪ pure f) ≪ pure f' = r ≪ pure (f ∘ f');  covariant: pure g' ≪ (pure g ≪ r) = pure (g' ∘ g) ≪ r
    for x0, x1, x2, y in itertools.product(c.objects, repeat=4):
        nr = a.R[(x2, y)]
        n1, n2 = c.homs[(x1, x2)], c.homs[(x0, x1)]
        if nr and n1 and n2:
            for f, f2 in itertools.product(range(n1), range(n2)):
                once = a.comp[(x1, x2, y)][:, a.pure[(x1, x2)][f]]
                twice = a.comp[(x0, x1, y)][once, a.pure[(x0, x1)][f2]]
                direct = a.comp[(x0, x2, y)][:, a.pure[(x0, x2)][c.compose(x0, x1, x2, f, f2)]]
                prof.count += nr
                if not np.array_equal(twice, direct):
                    prof.fail(side="contravariant", objects=[x0, x1, x2, y], f=f, f2=f2)
        nr = a.R[(y, x0)]
        n1, n2 = c.homs[(x0, x1)], c.homs[(x1, x2)]
        if nr and n1 and n2:
            for g, g2 in itertools.product(range(n1), range(n2)):
                once = a.comp[(y, x0, x1)][a.pure[(x0, x1)][g], :]
                twice = a.comp[(y, x1, x2)][a.pure[(x1, x2)][g2], once]
                direct = a.comp[(y, x0, x2)][a.pure[(x0, x2)][c.compose(x0, x1, x2, g2, g)], :]
                prof.count += nr
                if not np.array_equal(twice, direct):
                    prof.fail(side="covariant", objects=[y, x0, x1, x2], g=g, g2=g2)
    return rep


def freyd_category(a: ArrowData) -> FinCat:
    """Objects of ``𝕁``, ``hom(X, Y) = R(X, Y)``, ``id = pure id``, composition ``≪``."""
    c = a.base
    return FinCat(
        c.objects,
        dict(a.R),
        {k: a.comp[k] for k in itertools.product(c.objects, repeat=3)},
        {x: a.pure_id(x) for x in c.objects},
        name=f"Freyd({a.name})",
    )


# ---------------------------------------------------------------- arrow morphisms


@dataclass(eq=False)
class ArrowMorphism:
    """``tau[(X, Y)] : R(X, Y) -> R'(X, Y)`` as a table."""

    src: ArrowData
    tgt: ArrowData
    tau: Mapping[tuple, np.ndarray]
    name: str = ""


def identity_arrow_morphism(a: ArrowData) -> ArrowMorphism:
    return ArrowMorphism(a, a, {k: _frozen(np.arange(a.R[k])) for k in a.base.pairs()}, "id")


def kleisli_arrow_morphism(src: ArrowData, tgt: ArrowData, sigma: MonadMorphism) -> ArrowMorphism:
    """``τ k = σ ∘ k`` between the Kleisli arrows of two monads on the same concrete base."""
    base = src.base
    tau = {}
    for x, y in base.pairs():
        nx, ny = base.sizes[x], base.sizes[y]
        s = np.asarray(sigma.table(ny), dtype=np.int64)
        K = all_tables(nx, len(s))
        if K.shape[0] != src.R[(x, y)]:
            raise ValueError(f"hom ({x},{y}) of the source is not (T Y)^X")
        out = encode_tables(s[K], sigma.tgt.size(ny)) if nx else np.zeros(K.shape[0], dtype=np.int64)
        tau[(x, y)] = _frozen(out)
    return ArrowMorphism(src, tgt, tau, "σ ∘ −")


def maybe_to_powerset_arrow(base: FinCat) -> ArrowMorphism:
    """Induced by ``just x ↦ {x}``, ``nothing ↦ ∅``."""
    from .instances.vec import maybe_to_powerset

    return kleisli_arrow_morphism(maybe_arrow(base), powerset_arrow(base), maybe_to_powerset())


def broken_arrow_morphism(m: ArrowMorphism, pair: tuple, cell: int) -> ArrowMorphism:
    """Redirect one cell of ``τ`` to a different value (a deliberate defect)."""
    tau = dict(m.tau)
    row = np.array(tau[pair])
    n = m.tgt.R[pair]
    row[cell] = (row[cell] + 1) % n
    tau[pair] = _frozen(row)
    return ArrowMorphism(m.src, m.tgt, tau, f"{m.name}-broken")


def check_arrow_morphism(m: ArrowMorphism) -> Report:
    """``τ(pure f) = pure' f`` and ``τ(s ≪ r) = τ s ≪' τ r``."""
    a, b, c = m.src, m.tgt, m.src.base
    rep = Report()
    pp = rep.new("arrow-morphism/pure", "τ (pure f) = pure' f")
    cp = rep.new("arrow-morphism/composition", "τ (s ≪ r) = τ s ≪' τ r")
    for x, y in c.pairs():
        n = c.homs[(x, y)]
        if not n:
            continue
        lhs = m.tau[(x, y)][a.pure[(x, y)]]
        pp.count += n
        if not np.array_equal(lhs, b.pure[(x, y)]):
            f = int(np.nonzero(lhs != b.pure[(x, y)])[0][0])
            pp.fail(src=x, tgt=y, f=f, got=int(lhs[f]), expected=int(b.pure[(x, y)][f]))
    for x, y, z in itertools.product(c.objects, repeat=3):
        nr, ns = a.R[(x, y)], a.R[(y, z)]
        if not (nr and ns):
            continue
        lhs = m.tau[(x, z)][a.comp[(x, y, z)]]
        rhs = b.comp[(x, y, z)][m.tau[(y, z)][:, None], m.tau[(x, y)][None, :]]
        cp.count += nr * ns
        if not np.array_equal(lhs, rhs):
            s, r = np.argwhere(lhs != rhs)[0]
            cp.fail(objects=[x, y, z], s=int(s), r=int(r))
    return rep


# ---------------------------------------------------------------- relative monads on Yoneda


def _key(comps: Mapping[Obj, np.ndarray], objs: Sequence[Obj]) -> tuple:
    return tuple(tuple(int(v) for v in comps[o]) for o in objs)


def _nat_comps(tau: NatTransData, objs: Sequence[Obj]) -> Comps:
    return {o: _frozen(np.asarray(tau[o].table, dtype=np.int64)) for o in objs}


@dataclass(eq=False)
class PresheafRelMonad:
    """A relative monad on ``𝐘 : 𝕁 -> [𝕁^op, FinSet]``.

    ``T[X]`` is a presheaf (a functor on ``op(base)``); ``unit[X][Y]`` is the
    component ``hom(Y, X) -> T X Y`` of ``η_X``; ``star_op(X, Y, k)`` maps the
    components of ``k : 𝐘 X ⇒ T Y`` to those of ``k* : T X ⇒ T Y``.
    """

    base: FinCat
    T: Mapping[Obj, FunctorData]
    unit: Mapping[Obj, Comps]
    star_op: Callable[[Obj, Obj, Comps], Comps]
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def yon(self, x: Obj) -> FunctorData:
        key = ("yon", x)
        if key not in self._cache:
            self._cache[key] = yoneda(self.base, x)
        return self._cache[key]

    def star(self, x: Obj, y: Obj, k: Comps) -> Comps:
        return self.star_op(x, y, k)

    def kleisli_homs(self, x: Obj, y: Obj) -> list[Comps]:
        """Every natural ``𝐘 X ⇒ T Y``, by enumeration."""
        key = ("homs", x, y)
        if key not in self._cache:
            objs = self.base.objects
            self._cache[key] = [_nat_comps(n, objs) for n in functor_category_homs(self.yon(x), self.T[y])]
        return self._cache[key]

    def hom_index(self, x: Obj, y: Obj) -> dict:
        key = ("index", x, y)
        if key not in self._cache:
            objs = self.base.objects
            self._cache[key] = {_key(k, objs): i for i, k in enumerate(self.kleisli_homs(x, y))}
        return self._cache[key]


def trivial_presheaf_relmonad(base: FinCat) -> PresheafRelMonad:
    """``T = 𝐘``, ``η = id``, ``k* = k``."""
    T = {x: yoneda(base, x) for x in base.objects}
    unit = {x: {y: _frozen(np.arange(base.homs[(y, x)])) for y in base.objects} for x in base.objects}
    return PresheafRelMonad(base, T, unit, lambda x, y, k: dict(k), "yoneda")


def _pc(g: np.ndarray, f: np.ndarray) -> np.ndarray:
    return g[f] if len(f) else np.zeros(0, dtype=np.int64)


def check_presheaf_relmonad(t: PresheafRelMonad) -> Report:
    """Functoriality of each ``T X``; naturality of ``η`` and every ``k*``; the three laws."""
    c, objs = t.base, t.base.objects
    rep = Report()
    fun = rep.new("yoneda-relmonad/T-functorial", "T X is a presheaf")
    nat_eta = rep.new("yoneda-relmonad/unit-natural", "η_X : 𝐘 X ⇒ T X is natural")
    nat_star = rep.new("yoneda-relmonad/star-natural", "k* : T X ⇒ T Y is natural")
    lu = rep.new("yoneda-relmonad/left-unit", "k* ∘ η = k")
    ru = rep.new("yoneda-relmonad/right-unit", "η* = id")
    asc = rep.new("yoneda-relmonad/associativity", "(ℓ* ∘ k)* = ℓ* ∘ k*")
    for x in objs:
        r = check_functor(t.T[x])
        fun.count += sum(ch.count for ch in r.checks)
        if not r.ok:
            fun.fail(object=x, **(r.failures[0].witness or {}))
        nr = check_nat(NatTransData(t.yon(x), t.T[x], {y: FinFn(t.yon(x).obj[y], t.T[x].obj[y], tuple(int(v) for v in t.unit[x][y])) for y in objs}))
        nat_eta.count += nr.checks[0].count
        if not nr.ok:
            nat_eta.fail(object=x, **(nr.failures[0].witness or {}))
        es = t.star(x, x, t.unit[x])
        for y in objs:
            ru.count += len(es[y])
            if not np.array_equal(es[y], np.arange(t.T[x].obj[y].size)):
                ru.fail(object=x, component=y)
    stars = {}
    for x, y in c.pairs():
        for i, k in enumerate(t.kleisli_homs(x, y)):
            ks = t.star(x, y, k)
            stars[(x, y, i)] = ks
            nr = check_nat(NatTransData(t.T[x], t.T[y], {w: FinFn(t.T[x].obj[w], t.T[y].obj[w], tuple(int(v) for v in ks[w])) for w in objs}))
            nat_star.count += nr.checks[0].count
            if not nr.ok and nat_star.status != FAIL:
                nat_star.fail(src=x, tgt=y, k=i, **(nr.failures[0].witness or {}))
            for w in objs:
                got = _pc(ks[w], t.unit[x][w])
                lu.count += len(got)
                if not np.array_equal(got, k[w]) and lu.status != FAIL:
                    lu.fail(src=x, tgt=y, k=i, component=w)
    for x, y, z in itertools.product(objs, repeat=3):
        ks_list = t.kleisli_homs(x, y)
        for j, l in enumerate(t.kleisli_homs(y, z)):
            ls = stars[(y, z, j)]
            for i, k in enumerate(ks_list):
                comp = {w: _pc(ls[w], k[w]) for w in objs}
                lhs = t.star(x, z, comp)
                kstar = stars[(x, y, i)]
                asc.count += 1
                if any(not np.array_equal(lhs[w], _pc(ls[w], kstar[w])) for w in objs):
                    asc.fail(objects=[x, y, z], k=i, l=j)
                    break
            if asc.status == FAIL:
                break
    return rep


# ---------------------------------------------------------------- the correspondence


def arrow_to_relmon(a: ArrowData) -> PresheafRelMonad:
    """``T X Y = R(Y, X)``, ``T _ f r = r ≪ pure f``, ``η f = pure f``, ``k* r = k id ≪ r``."""
    c = a.base
    objs = c.objects
    oc = op_category(c)
    T = {}
    for x in objs:
        obj = {y: FinSet(a.R[(y, x)]) for y in objs}
        arr = {}
        for y, z in c.pairs():
            # op-arrow y -> z is a base arrow f : z -> y; r ∈ R(y, x) ↦ r ≪ pure f ∈ R(z, x)
            nh = c.homs[(z, y)]
            tab = a.comp[(z, y, x)]  # (R(y,x), R(z,y))
            rows = tab[:, a.pure[(z, y)]].T if nh and a.R[(y, x)] else np.zeros((nh, a.R[(y, x)]), dtype=np.int64)
            arr[(y, z)] = _frozen(rows)
        T[x] = FunctorData(oc, obj, arr, None, f"T({x})")
    unit = {x: {y: _frozen(a.pure[(y, x)]) for y in objs} for x in objs}

    def star(x, y, k):
        kid = int(k[x][c.ids[x]])  # k id ∈ R(x, y)
        return {z: _frozen(a.comp[(z, x, y)][kid, :]) for z in objs}

    return PresheafRelMonad(c, T, unit, star, f"relmon({a.name})")


class NotNaturalFamily(ValueError):
    def __init__(self, witness: dict):
        super().__init__(f"λf. T _ f s is not natural: {witness}")
        self.witness = witness


def relmon_to_arrow(t: PresheafRelMonad) -> ArrowData:
    """``R(X, Y) = T Y X``, ``pure f = η f``, ``s ≪ r = (λf. T _ f s)* r``."""
    c = t.base
    objs = c.objects
    R = {(x, y): t.T[y].obj[x].size for x, y in c.pairs()}
    pure = {(x, y): _frozen(t.unit[y][x]) for x, y in c.pairs()}
    comp = {}
    for x, y, z in itertools.product(objs, repeat=3):
        ns, nr = R[(y, z)], R[(x, y)]
        tab = np.zeros((ns, nr), dtype=np.int64)
        for s in range(ns):
            # k_s : 𝐘 y ⇒ T z, component at w: f ∈ hom(w, y) ↦ T z f s
            ks = {w: _frozen(t.T[z].arr[(y, w)][:, s]) for w in objs}
            nat = check_nat(NatTransData(t.yon(y), t.T[z], {w: FinFn(t.yon(y).obj[w], t.T[z].obj[w], tuple(int(v) for v in ks[w])) for w in objs}))
            if not nat.ok:
                raise NotNaturalFamily({"objects": [y, z], "s": s, **(nat.failures[0].witness or {})})
            tab[s] = t.star(y, z, ks)[x]
        comp[(x, y, z)] = _frozen(tab)
    return ArrowData(c, R, pure, comp, f"arrow({t.name})")


def arrows_equal(a: ArrowData, b: ArrowData, chk: Check) -> None:
    c = a.base
    for k in c.pairs():
        chk.count += 1
        if a.R[k] != b.R[k] or not np.array_equal(a.pure[k], b.pure[k]):
            chk.fail(pair=list(k), part="R/pure")
            return
    for k in itertools.product(c.objects, repeat=3):
        chk.count += 1
        if not np.array_equal(a.comp[k], b.comp[k]):
            chk.fail(triple=list(k), part="≪")
            return


def relmons_equal(t: PresheafRelMonad, u: PresheafRelMonad, chk: Check) -> None:
    c, objs = t.base, t.base.objects
    for x in objs:
        chk.count += 1
        if not t.T[x].same_as(u.T[x]):
            chk.fail(object=x, part="T")
            return
        if any(not np.array_equal(t.unit[x][y], u.unit[x][y]) for y in objs):
            chk.fail(object=x, part="η")
            return
    for x, y in c.pairs():
        for i, k in enumerate(t.kleisli_homs(x, y)):
            chk.count += 1
            a, b = t.star(x, y, k), u.star(x, y, k)
            if any(not np.array_equal(a[w], b[w]) for w in objs):
                chk.fail(src=x, tgt=y, k=i, part="star")
                return


def roundtrip_check(a: ArrowData | None = None, t: PresheafRelMonad | None = None) -> Report:
    """``relmon_to_arrow ∘ arrow_to_relmon = id`` and/or ``arrow_to_relmon ∘ relmon_to_arrow = id``."""
    rep = Report()
    if a is not None:
        chk = rep.new("arrow-roundtrip/arrow", "arrow -> relative monad -> arrow is the identity")
        arrows_equal(a, relmon_to_arrow(arrow_to_relmon(a)), chk)
    if t is not None:
        chk = rep.new("arrow-roundtrip/relmon", "relative monad -> arrow -> relative monad is the identity")
        relmons_equal(t, arrow_to_relmon(relmon_to_arrow(t)), chk)
    return rep


# ---------------------------------------------------------------- morphism transport


@dataclass(eq=False)
class PresheafRelMonadMorphism:
    """``sigma[X][Y] : T X Y -> T' X Y``."""

    src: PresheafRelMonad
    tgt: PresheafRelMonad
    sigma: Mapping[Obj, Comps]


def transport_morphism(m: ArrowMorphism) -> PresheafRelMonadMorphism:
    """``σ_{X,Y} = τ_{Y,X}``."""
    t, u = arrow_to_relmon(m.src), arrow_to_relmon(m.tgt)
    objs = m.src.base.objects
    return PresheafRelMonadMorphism(t, u, {x: {y: m.tau[(y, x)] for y in objs} for x in objs})


def transport_back(s: PresheafRelMonadMorphism, src: ArrowData, tgt: ArrowData) -> ArrowMorphism:
    """``τ_{X,Y} = σ_{Y,X}``."""
    objs = s.src.base.objects
    return ArrowMorphism(src, tgt, {(x, y): _frozen(s.sigma[y][x]) for x in objs for y in objs}, "transported")


def check_presheaf_morphism(s: PresheafRelMonadMorphism) -> Report:
    """Naturality of each ``σ_X``, ``σ ∘ η = η'`` and ``σ ∘ k* = (σ ∘ k)*' ∘ σ``."""
    t, u = s.src, s.tgt
    c, objs = t.base, t.base.objects
    rep = Report()
    nat = rep.new("yoneda-morphism/natural", "σ_X : T X ⇒ T' X is natural")
    un = rep.new("yoneda-morphism/unit", "σ ∘ η = η'")
    mu = rep.new("yoneda-morphism/star", "σ ∘ k* = (σ ∘ k)*' ∘ σ")
    for x in objs:
        nr = check_nat(NatTransData(t.T[x], u.T[x], {w: FinFn(t.T[x].obj[w], u.T[x].obj[w], tuple(int(v) for v in s.sigma[x][w])) for w in objs}))
        nat.count += nr.checks[0].count
        if not nr.ok:
            nat.fail(object=x, **(nr.failures[0].witness or {}))
        for w in objs:
            got = _pc(s.sigma[x][w], t.unit[x][w])
            un.count += len(got)
            if not np.array_equal(got, u.unit[x][w]):
                un.fail(object=x, component=w)
    for x, y in c.pairs():
        for i, k in enumerate(t.kleisli_homs(x, y)):
            ks = t.star(x, y, k)
            sk = {w: _pc(s.sigma[y][w], k[w]) for w in objs}
            sks = u.star(x, y, sk)
            mu.count += 1
            if any(not np.array_equal(_pc(s.sigma[y][w], ks[w]), _pc(sks[w], s.sigma[x][w])) for w in objs):
                mu.fail(src=x, tgt=y, k=i)
    return rep


def transport_roundtrip(m: ArrowMorphism) -> Report:
    """Arrow morphism -> relative-monad morphism -> arrow morphism is the identity, with laws on both sides."""
    rep = Report()
    rep.extend(check_arrow_morphism(m))
    s = transport_morphism(m)
    rep.extend(check_presheaf_morphism(s))
    back = transport_back(s, m.src, m.tgt)
    chk = rep.new("arrow-morphism/roundtrip", "τ ↦ σ ↦ τ is the identity")
    for k in m.src.base.pairs():
        chk.count += 1
        if not np.array_equal(back.tau[k], m.tau[k]):
            chk.fail(pair=list(k))
    s2 = transport_morphism(back)
    chk2 = rep.new("yoneda-morphism/roundtrip", "σ ↦ τ ↦ σ is the identity")
    for x in m.src.base.objects:
        for y in m.src.base.objects:
            chk2.count += 1
            if not np.array_equal(s2.sigma[x][y], s.sigma[x][y]):
                chk2.fail(objects=[x, y])
    return rep


# ---------------------------------------------------------------- Freyd is Kleisli


def presheaf_kleisli(t: PresheafRelMonad) -> FinCat:
    """Kleisli category: ``hom(X, Y)`` = enumerated ``𝐘 X ⇒ T Y``, ``ℓ ∘ k = ℓ* ∘ k``."""
    c, objs = t.base, t.base.objects
    homs = {(x, y): len(t.kleisli_homs(x, y)) for x, y in c.pairs()}
    check_budget(sum(homs.values()), "yoneda kleisli homs")
    comp = {}
    for x, y, z in itertools.product(objs, repeat=3):
        idx = t.hom_index(x, z)
        tab = np.zeros((homs[(y, z)], homs[(x, y)]), dtype=np.int64)
        for j, l in enumerate(t.kleisli_homs(y, z)):
            ls = t.star(y, z, l)
            for i, k in enumerate(t.kleisli_homs(x, y)):
                tab[j, i] = idx[_key({w: _pc(ls[w], k[w]) for w in objs}, objs)]
        comp[(x, y, z)] = _frozen(tab)
    ids = {x: t.hom_index(x, x)[_key(t.unit[x], objs)] for x in objs}
    return FinCat(objs, homs, comp, ids, name=f"Kl({t.name})")


def freyd_is_kleisli_check(a: ArrowData) -> Report:
    """``Freyd(a) ≅ Kl(arrow_to_relmon(a))`` via ``r ↦ λf. r ≪ pure f`` (identity on objects)."""
    c, objs = a.base, a.base.objects
    t = arrow_to_relmon(a)
    fr = freyd_category(a)
    kl = presheaf_kleisli(t)
    rep = Report()
    rep.extend(check_category(fr), prefix="freyd")
    rep.extend(check_category(kl), prefix="yoneda-kleisli")
    bij = rep.new("freyd-kleisli/bijective", "r ↦ λf. r ≪ pure f is a bijection on every hom")
    ids = rep.new("freyd-kleisli/identity", "pure id ↦ η")
    comp = rep.new("freyd-kleisli/composition", "s ≪ r ↦ Φ s ∘ Φ r")
    phi = {}
    for x, y in c.pairs():
        idx = t.hom_index(x, y)
        rows = []
        for r in range(a.R[(x, y)]):
            k = {w: _frozen(a.comp[(w, x, y)][r, a.pure[(w, x)]]) if c.homs[(w, x)] else np.zeros(0, dtype=np.int64) for w in objs}
            rows.append(idx.get(_key(k, objs), -1))
        phi[(x, y)] = np.asarray(rows, dtype=np.int64)
        bij.count += 1
        if (phi[(x, y)] < 0).any() or len(set(rows)) != len(rows) or len(rows) != kl.homs[(x, y)]:
            bij.fail(src=x, tgt=y, freyd=len(rows), kleisli=kl.homs[(x, y)], distinct=len(set(rows)))
    if bij.status == FAIL:
        return rep
    for x in objs:
        ids.count += 1
        if phi[(x, x)][fr.ids[x]] != kl.ids[x]:
            ids.fail(object=x)
    for x, y, z in itertools.product(objs, repeat=3):
        ns, nr = a.R[(y, z)], a.R[(x, y)]
        if not (ns and nr):
            continue
        lhs = phi[(x, z)][fr.comp[(x, y, z)]]
        rhs = kl.comp[(x, y, z)][phi[(y, z)][:, None], phi[(x, y)][None, :]]
        comp.count += ns * nr
        if not np.array_equal(lhs, rhs):
            s, r = np.argwhere(lhs != rhs)[0]
            comp.fail(objects=[x, y, z], s=int(s), r=int(r))
    return rep


# ---------------------------------------------------------------- Yoneda is well-behaved


def two_object_poset() -> FinCat:
    """``a ≤ b``: one non-identity arrow."""
    return poset_category(("a", "b"), {("a", "b")})


def enumerate_presheaves(c: FinCat, cap: int = 2) -> list[FunctorData]:
    """Every presheaf on ``c`` with all sets of size ``≤ cap`` (deterministic order)."""
    oc = op_category(c)
    objs = c.objects
    pairs = list(oc.pairs())
    out = []
    for sizes in itertools.product(range(cap + 1), repeat=len(objs)):
        sz = dict(zip(objs, sizes))
        choices = []
        for y, z in pairs:
            nh = oc.homs[(y, z)]
            choices.append(list(itertools.product(range(sz[z] ** sz[y]), repeat=nh)))
        total = 1
        for ch in choices:
            total *= len(ch)
        check_budget(total, "presheaf candidates")
        for combo in itertools.product(*choices):
            arr = {}
            for (y, z), idxs in zip(pairs, combo):
                from .finset import fn_from_index

                rows = [fn_from_index(i, sz[y], sz[z]) for i in idxs]
                arr[(y, z)] = _frozen(np.asarray(rows, dtype=np.int64).reshape(len(idxs), sz[y]))
            F = FunctorData(oc, {o: FinSet(sz[o]) for o in objs}, arr, None, f"G{len(out)}")
            if check_functor(F).ok:
                F = FunctorData(oc, F.obj, F.arr, None, f"G{len(out)}")
                out.append(F)
    return out


def _nats(F: FunctorData, G: FunctorData, objs) -> list[Comps]:
    return [_nat_comps(n, objs) for n in functor_category_homs(F, G)]


def _yoneda_points(c: FinCat, G: FunctorData, cache: dict) -> tuple[dict, dict]:
    """``Nat(𝐘 Z, G)`` per ``Z`` with index lookup."""
    key = id(G)
    if key not in cache:
        objs = c.objects
        lists = {z: _nats(yoneda(c, z), G, objs) for z in objs}
        index = {z: {_key(k, objs): i for i, k in enumerate(lists[z])} for z in objs}
        cache[key] = (lists, index, G)
    lists, index, _ = cache[key]
    return lists, index


def _hom_y_presheaf(c: FinCat, G: FunctorData, cache: dict) -> FunctorData:
    """``Z ↦ Nat(𝐘 Z, G)``, acting by precomposition with ``𝐘 h``."""
    objs = c.objects
    lists, index = _yoneda_points(c, G, cache)
    arr = {}
    for z, w in c.pairs():
        # op-arrow z -> w is h : w -> z; θ ↦ θ ∘ 𝐘 h, component at v: g ↦ θ_v(h ∘ g)
        nh = c.homs[(w, z)]
        rows = np.zeros((nh, len(lists[z])), dtype=np.int64)
        for h in range(nh):
            for i, th in enumerate(lists[z]):
                comps = {v: _pc(th[v], c.comp[(v, w, z)][h, :]) if c.homs[(v, w)] else np.zeros(0, dtype=np.int64) for v in objs}
                rows[h, i] = index[w][_key(comps, objs)]
        arr[(z, w)] = _frozen(rows)
    return FunctorData(op_category(c), {z: FinSet(len(lists[z])) for z in objs}, arr, None, f"Nat(𝐘-,{G.name})")


@dataclass(eq=False)
class PresheafValued:
    """A functor ``F : 𝕁 -> [𝕁^op, FinSet]``: presheaves ``P[Z]`` and ``act[(Z, Z')][h][W]`` tables of ``(F h)_W``."""

    base: FinCat
    P: Mapping[Obj, FunctorData]
    act: Mapping[tuple, list]
    name: str = ""

    def at(self, w: Obj) -> FunctorData:
        """The functor ``Z ↦ F Z W`` on ``𝕁``."""
        c = self.base
        obj = {z: self.P[z].obj[w] for z in c.objects}
        arr = {}
        for z, z2 in c.pairs():
            rows = [self.act[(z, z2)][h][w] for h in range(c.homs[(z, z2)])]
            arr[(z, z2)] = _frozen(np.asarray(rows, dtype=np.int64).reshape(len(rows), obj[z].size))
        return FunctorData(c, obj, arr, None, f"{self.name}(-)({w})")


def yoneda_valued(c: FinCat) -> PresheafValued:
    """``F = 𝐘``."""
    P = {z: yoneda(c, z) for z in c.objects}
    act = {}
    for z, z2 in c.pairs():
        act[(z, z2)] = [{w: _frozen(c.comp[(w, z, z2)][h, :]) for w in c.objects} for h in range(c.homs[(z, z2)])]
    return PresheafValued(c, P, act, "𝐘")


def plus_point(F: PresheafValued) -> PresheafValued:
    """``(F + 1) Z W = F Z W + 1`` with the extra point fixed by every action."""
    c = F.base
    P = {}
    for z in c.objects:
        G = F.P[z]
        obj = {w: FinSet(G.obj[w].size + 1) for w in c.objects}
        arr = {}
        for k, tab in G.arr.items():
            n = G.obj[k[0]].size
            extra = np.full((tab.shape[0], 1), G.obj[k[1]].size, dtype=np.int64)
            arr[k] = _frozen(np.concatenate([tab.reshape(tab.shape[0], n), extra], axis=1))
        P[z] = FunctorData(G.src, obj, arr, None, f"{G.name}+1")
    act = {}
    for k, hs in F.act.items():
        act[k] = [{w: _frozen(np.append(comp[w], F.P[k[1]].obj[w].size)) for w in c.objects} for comp in hs]
    return PresheafValued(c, P, act, f"{F.name}+1")


def relmon_valued(t: PresheafRelMonad) -> PresheafValued:
    """``F = T`` with the derived action ``T h = (η ∘ 𝐘 h)*``."""
    c, objs = t.base, t.base.objects
    act = {}
    for z, z2 in c.pairs():
        hs = []
        for h in range(c.homs[(z, z2)]):
            k = {w: _pc(t.unit[z2][w], c.comp[(w, z, z2)][h, :]) if c.homs[(w, z)] else np.zeros(0, dtype=np.int64) for w in objs}
            hs.append(t.star(z, z2, k))
        act[(z, z2)] = hs
    return PresheafValued(c, dict(t.T), act, t.name)


def yoneda_wellbehaved_check(c: FinCat, cap: int = 2, functors: Sequence[PresheafValued] | None = None) -> Report:
    """``J⁻¹ τ = τ id``, ``K⁻¹ α = λa. α(λf. G f a) id``, and ``L^F_{X,H}`` bijective, by enumeration."""
    objs = c.objects
    rep = Report()
    jc = rep.new("yoneda/J-inverse", "J⁻¹ τ = τ id is a two-sided inverse of J f = 𝐘 f")
    kc = rep.new("yoneda/K-inverse", "K⁻¹ α = λa. α (λf. G f a) id is a two-sided inverse of K τ = τ ∘ −")
    lc = rep.new("yoneda/L-bijective", "L^F_{X,H} : Lan_𝐘 (Nat(𝐘 X, F −)) H -> Nat(𝐘 X, Lan_𝐘 F H) is bijective")
    # J
    for x, y in c.pairs():
        nats = _nats(yoneda(c, x), yoneda(c, y), objs)
        index = {_key(n, objs): i for i, n in enumerate(nats)}
        jc.count += c.homs[(x, y)] + len(nats)
        for f in range(c.homs[(x, y)]):
            jf = {w: _frozen(c.comp[(w, x, y)][f, :]) for w in objs}
            i = index.get(_key(jf, objs))
            if i is None or int(nats[i][x][c.ids[x]]) != f:
                jc.fail(src=x, tgt=y, f=f)
        for i, n in enumerate(nats):
            f = int(n[x][c.ids[x]])
            jf = {w: _frozen(c.comp[(w, x, y)][f, :]) for w in objs}
            if _key(jf, objs) != _key(n, objs):
                jc.fail(src=x, tgt=y, tau=i)
    # K
    pres = enumerate_presheaves(c, cap)
    cache: dict = {}
    hy = {id(G): _hom_y_presheaf(c, G, cache) for G in pres}
    for G, H in itertools.product(pres, repeat=2):
        PG, PH = hy[id(G)], hy[id(H)]
        lists_g, _ = _yoneda_points(c, G, cache)
        _, index_h = _yoneda_points(c, H, cache)
        taus = _nats(G, H, objs)
        alphas = _nats(PG, PH, objs)
        a_index = {_key(a, objs): i for i, a in enumerate(alphas)}
        kc.count += len(taus) + len(alphas)
        K_of = []
        for tau in taus:
            ktau = {z: _frozen(np.asarray([index_h[z][_key({v: _pc(tau[v], th[v]) for v in objs}, objs)] for th in lists_g[z]], dtype=np.int64)) for z in objs}
            K_of.append(a_index.get(_key(ktau, objs), -1))
        if -1 in K_of or len(set(K_of)) != len(K_of) or len(K_of) != len(alphas):
            kc.fail(G=G.name, H=H.name, nats=len(taus), images=len(set(K_of)), targets=len(alphas))
            continue
        lists_h, _ = _yoneda_points(c, H, cache)
        _, index_g = _yoneda_points(c, G, cache)

        def k_inv(alpha):
            comps = {}
            for z in objs:
                vals = []
                for a in range(G.obj[z].size):
                    # θ_a : 𝐘 z ⇒ G, component at w: f ∈ hom(w, z) ↦ G f a
                    th = {w: _frozen(G.arr[(z, w)][:, a]) if c.homs[(w, z)] else np.zeros(0, dtype=np.int64) for w in objs}
                    img = lists_h[z][int(alpha[z][index_g[z][_key(th, objs)]])]
                    vals.append(int(img[z][c.ids[z]]))
                comps[z] = np.asarray(vals, dtype=np.int64)
            return comps

        t_index = {_key(t, objs): i for i, t in enumerate(taus)}
        for i, tau in enumerate(taus):
            if t_index.get(_key(k_inv(alphas[K_of[i]]), objs)) != i:
                kc.fail(G=G.name, H=H.name, tau=i, direction="K⁻¹ ∘ K")
                break
        for j, alpha in enumerate(alphas):
            back = t_index.get(_key(k_inv(alpha), objs))
            if back is None or K_of[back] != j:
                kc.fail(G=G.name, H=H.name, alpha=j, direction="K ∘ K⁻¹")
                break
    # L
    if functors is None:
        functors = [yoneda_valued(c), plus_point(yoneda_valued(c))]
    for F, x, H in itertools.product(functors, objs, pres):
        PH = hy[id(H)]
        # Lan_𝐘 F H, pointwise: W ↦ ∫^Z Nat(𝐘 Z, H) × F Z W
        lan_at = {w: Coend(PH, F.at(w)) for w in objs}
        lan_arr = {}
        for w, v in c.pairs():
            nh = c.homs[(v, w)]
            co_w, co_v = lan_at[w], lan_at[v]
            rows = np.zeros((nh, co_w.size), dtype=np.int64)
            for h in range(nh):
                for cls in range(co_w.size):
                    z, p, e = co_w.decode(int(co_w.reps[cls]))
                    rows[h, cls] = co_v.cls(z, p, int(F.P[z].arr[(w, v)][h, e]))
            lan_arr[(w, v)] = _frozen(rows)
        lanFH = FunctorData(op_category(c), {w: FinSet(lan_at[w].size) for w in objs}, lan_arr, None, "Lan F H")
        targets = _nats(yoneda(c, x), lanFH, objs)
        t_index = {_key(n, objs): i for i, n in enumerate(targets)}
        # source: ∫^Z Nat(𝐘 Z, H) × Nat(𝐘 X, F Z)
        nu = {z: _nats(yoneda(c, x), F.P[z], objs) for z in objs}
        nu_index = {z: {_key(n, objs): i for i, n in enumerate(nu[z])} for z in objs}
        g_arr = {}
        for z, z2 in c.pairs():
            rows = []
            for h in range(c.homs[(z, z2)]):
                rows.append([nu_index[z2][_key({w: _pc(F.act[(z, z2)][h][w], n[w]) for w in objs}, objs)] for n in nu[z]])
            g_arr[(z, z2)] = _frozen(np.asarray(rows, dtype=np.int64).reshape(c.homs[(z, z2)], len(nu[z])))
        GX = FunctorData(c, {z: FinSet(len(nu[z])) for z in objs}, g_arr, None, "Nat(𝐘 X, F -)")
        src = Coend(PH, GX)
        # L on every element, then check it is constant on classes and bijective on classes
        vals = np.full(src.n_elements, -1, dtype=np.int64)
        for e in range(src.n_elements):
            z, p, n_i = src.decode(e)
            n = nu[z][n_i]
            comps = {w: _frozen(np.asarray([lan_at[w].cls(z, p, int(v)) for v in n[w]], dtype=np.int64)) for w in objs}
            vals[e] = t_index.get(_key(comps, objs), -1)
        lc.count += src.n_elements
        if (vals < 0).any():
            lc.fail(functor=F.name, X=x, H=H.name, reason="image is not natural")
            continue
        per_class = vals[src.reps] if src.size else np.zeros(0, dtype=np.int64)
        if src.size and not np.array_equal(per_class[src.class_of], vals):
            lc.fail(functor=F.name, X=x, H=H.name, reason="not constant on coend classes")
            continue
        if len(set(per_class.tolist())) != src.size or src.size != len(targets):
            lc.fail(functor=F.name, X=x, H=H.name, classes=src.size, targets=len(targets), images=len(set(per_class.tolist())))
    return rep

"""Relative monads as data, their laws, morphisms, restriction and extension.

Two layers:

* :class:`RelMonadData` — the deep form used by the engine: finite carriers,
  unit tables and a Kleisli-extension operator ``star(x, y, k)``;
* :class:`ShallowRelMonad` — callables over arbitrary Python values, for
  instances with infinite carriers (λ-terms, vectors over ℤ).

:func:`reflect` and :func:`reify` convert between them on finite carriers.
Ordinary monads on FinSet are :class:`MonadData`; :func:`restrict` turns one
into a relative monad along ``J`` and :func:`extend` goes back via ``Lan_J``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Protocol, Sequence

import numpy as np

from .endo import SetEndo
from .fincat import FinCat, FunctorData, NatTransData, Obj, _frozen
from .finset import (
    FinFn,
    FinSet,
    all_tables,
    check_budget,
    EnumerationOverflow,
    encode_tables,
    fn_from_index,
    fn_index,
    get_budget,
)
from .kan import (
    NotNatural,
    OutOfUniverse,
    Refused,
    alpha_bar,
    alpha_bar_bar,
    alpha_bar_inverse,
    bijectivity_witness,
    lambda_bar,
    lambda_bar_inverse,
    lan_endo,
    lan_map,
    lan_nat,
    lan_object,
    one_object,
    rho,
    tensor,
)
from .report import FAIL, OUT_OF_UNIVERSE, PASS, SKIPPED, Check, Report

StarOp = Callable[[Obj, Obj, FinFn], FinFn]


@dataclass(eq=False)
class RelMonadData:
    """A relative monad ``(T, η, (−)*)`` on ``J : base -> FinSet``."""

    base: FinCat
    J: FunctorData
    T: Mapping[Obj, FinSet]
    unit: Mapping[Obj, FinFn]
    star_op: StarOp
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for x in self.base.objects:
            u = self.unit[x]
            if u.dom != self.J.obj[x] or u.cod != self.T[x]:
                raise ValueError(f"unit at {x} has the wrong shape")

    def __repr__(self) -> str:
        return f"RelMonadData({self.name})"

    # -- Kleisli maps --------------------------------------------------------------
    def hom_count(self, x: Obj, y: Obj) -> int:
        return self.T[y].size ** self.J.obj[x].size

    def k_fn(self, x: Obj, y: Obj, idx: int) -> FinFn:
        return FinFn(self.J.obj[x], self.T[y], fn_from_index(int(idx), self.J.obj[x].size, self.T[y].size))

    def star(self, x: Obj, y: Obj, k: FinFn) -> FinFn:
        key = ("star", x, y, k.table)
        hit = self._cache.get(key)
        if hit is None:
            if k.dom != self.J.obj[x] or k.cod != self.T[y]:
                raise ValueError(f"k is not a map J {x} -> T {y}")
            hit = self.star_op(x, y, k)
            if hit.dom != self.T[x] or hit.cod != self.T[y]:
                raise ValueError("star produced a map of the wrong shape")
            self._cache[key] = hit
        return hit

    def star_table(self, x: Obj, y: Obj) -> np.ndarray:
        """Rows ``k*`` for every ``k : J x -> T y`` in enumeration order."""
        key = ("table", x, y)
        hit = self._cache.get(key)
        if hit is None:
            n = self.hom_count(x, y)
            check_budget(n, "star_table")
            rows = [self.star_op(x, y, self.k_fn(x, y, i)).table for i in range(n)]
            hit = _frozen(np.asarray(rows, dtype=np.int64).reshape(n, self.T[x].size))
            self._cache[key] = hit
        return hit

    def functor_action(self, x: Obj, y: Obj, h: int) -> FinFn:
        """``T h = (η ∘ J h)*``."""
        eta = self.unit[y].table
        jh = self.J.arr[(x, y)][h]
        k = FinFn(self.J.obj[x], self.T[y], tuple(eta[v] for v in jh))
        return self.star(x, y, k)

    def T_functor(self) -> FunctorData:
        hit = self._cache.get("T_functor")
        if hit is None:
            arr = {}
            for x, y in self.base.pairs():
                rows = [self.functor_action(x, y, h).table for h in range(self.base.homs[(x, y)])]
                arr[(x, y)] = _frozen(np.asarray(rows, dtype=np.int64).reshape(self.base.homs[(x, y)], self.T[x].size))
            hit = FunctorData(self.base, dict(self.T), arr, None, f"T[{self.name}]")
            self._cache["T_functor"] = hit
        return hit

    def unit_nat(self) -> NatTransData:
        return NatTransData(self.J, self.T_functor(), dict(self.unit))


def trivial_relmonad(J: FunctorData) -> RelMonadData:
    """``T = J``, ``η = id``, ``k* = k``."""
    c = J.src
    unit = {x: FinFn(J.obj[x], J.obj[x], tuple(range(J.obj[x].size))) for x in c.objects}
    return RelMonadData(c, J, dict(J.obj), unit, lambda x, y, k: k, name="trivial")


# ---------------------------------------------------------------- law checking


def _sample_pairs(objs, r, rng, n):
    pool = list(itertools.product(objs, repeat=r))
    return [pool[i] for i in rng.integers(0, len(pool), size=n)]


def check_relmonad_laws(
    t: RelMonadData, mode: str = "exhaustive", seed: int = 0, samples: int = 1000
) -> Report:
    """Right unit ``k*∘η = k``, left unit ``η* = id``, associativity ``(ℓ*∘k)* = ℓ*∘k*``."""
    rep = Report()
    ru = rep.new("relmonad/right-unit", "k* ∘ η = k")
    lu = rep.new("relmonad/left-unit", "η* = id")
    assoc = rep.new("relmonad/associativity", "(ℓ* ∘ k)* = ℓ* ∘ k*")
    objs = t.base.objects
    for x in objs:
        lu.count += 1
        s = t.star(x, x, t.unit[x])
        if s.table != tuple(range(t.T[x].size)):
            lu.fail(object=x, got=s.table)
    if mode == "exhaustive":
        for x, y in itertools.product(objs, repeat=2):
            S = t.star_table(x, y)
            K = all_tables(t.J.obj[x].size, t.T[y].size)
            eta = np.asarray(t.unit[x].table, dtype=np.int64)
            got = S[:, eta] if len(eta) else np.zeros((S.shape[0], 0), dtype=np.int64)
            ru.count += S.shape[0]
            if not np.array_equal(got, K):
                i = int(np.nonzero((got != K).any(axis=1))[0][0])
                ru.fail(src=x, tgt=y, k=K[i], got=got[i])
        for x, y, z in itertools.product(objs, repeat=3):
            Sxy, Syz, Sxz = t.star_table(x, y), t.star_table(y, z), t.star_table(x, z)
            K = all_tables(t.J.obj[x].size, t.T[y].size)
            for l in range(Syz.shape[0]):
                assoc.count += K.shape[0]
                comp = Syz[l][K] if K.shape[1] else np.zeros((K.shape[0], 0), dtype=np.int64)
                lhs = Sxz[encode_tables(comp, t.T[z].size)]
                rhs = Syz[l][Sxy] if Sxy.shape[1] else np.zeros_like(lhs)
                if not np.array_equal(lhs, rhs):
                    i = int(np.nonzero((lhs != rhs).any(axis=1))[0][0])
                    assoc.fail(objects=[x, y, z], k=K[i], l=t.k_fn(y, z, l).table)
                    break
            if assoc.status == FAIL:
                break
        return rep
    rng = np.random.default_rng(seed)
    for x, y in _sample_pairs(objs, 2, rng, samples):
        k = t.k_fn(x, y, rng.integers(0, t.hom_count(x, y)))
        ru.count += 1
        got = tuple(t.star(x, y, k).table[v] for v in t.unit[x].table)
        if got != k.table:
            ru.fail(src=x, tgt=y, k=k.table, got=got, seed=seed)
    for x, y, z in _sample_pairs(objs, 3, rng, samples):
        k = t.k_fn(x, y, rng.integers(0, t.hom_count(x, y)))
        l = t.k_fn(y, z, rng.integers(0, t.hom_count(y, z)))
        assoc.count += 1
        ls = t.star(y, z, l)
        lhs = t.star(x, z, FinFn(k.dom, l.cod, tuple(ls.table[v] for v in k.table)))
        rhs = tuple(ls.table[v] for v in t.star(x, y, k).table)
        if lhs.table != rhs:
            assoc.fail(objects=[x, y, z], k=k.table, l=l.table, seed=seed)
    return rep


def check_functor_action(t: RelMonadData) -> Report:
    """``T id = id``, ``T(g∘f) = T g ∘ T f``, and naturality of ``η`` and ``(−)*``."""
    from .fincat import check_functor, check_nat

    rep = Report()
    T = t.T_functor()
    rep.extend(check_functor(T), prefix="T")
    rep.extend(check_nat(t.unit_nat()), prefix="unit")
    nat = rep.new("star/naturality", "T h' ∘ k* ∘ T h = ((T h' ∘ k) ∘ ... )* — (T h'∘k∘J h)* = T h'∘k*∘T h")
    c = t.base
    for (x, y, x2, y2) in itertools.product(c.objects, repeat=4):
        if t.hom_count(x, y) > 64:
            continue
        for h in range(c.homs[(x2, x)]):
            Th = t.functor_action(x2, x, h).table
            Jh = t.J.arr[(x2, x)][h]
            for h2 in range(c.homs[(y, y2)]):
                Th2 = t.functor_action(y, y2, h2).table
                for ki in range(t.hom_count(x, y)):
                    k = t.k_fn(x, y, ki)
                    ks = t.star(x, y, k).table
                    lhs = tuple(Th2[ks[v]] for v in Th)
                    kk = FinFn(t.J.obj[x2], t.T[y2], tuple(Th2[k.table[v]] for v in Jh))
                    rhs = t.star(x2, y2, kk).table
                    nat.count += 1
                    if lhs != rhs:
                        nat.fail(objects=[x, y, x2, y2], h=h, h2=h2, k=k.table)
    return rep


@dataclass(eq=False)
class RelMonadMorphism:
    """Components ``σ_X : T X -> T' X``."""

    src: RelMonadData
    tgt: RelMonadData
    comps: Mapping[Obj, FinFn]


def identity_morphism(t: RelMonadData) -> RelMonadMorphism:
    return RelMonadMorphism(t, t, {x: FinFn(t.T[x], t.T[x], tuple(range(t.T[x].size))) for x in t.base.objects})


def check_morphism(m: RelMonadMorphism, mode: str = "exhaustive", seed: int = 0, samples: int = 1000) -> Report:
    """``σ∘η = η'`` and ``σ_Y∘k* = (σ_Y∘k)*'∘σ_X``; naturality of σ checked independently."""
    t, u = m.src, m.tgt
    rep = Report()
    un = rep.new("morphism/unit", "σ ∘ η = η'")
    mu = rep.new("morphism/multiplication", "σ_Y ∘ k* = (σ_Y ∘ k)*' ∘ σ_X")
    nat = rep.new("morphism/naturality", "σ_Y ∘ T f = T' f ∘ σ_X")
    objs = t.base.objects
    for x in objs:
        un.count += 1
        got = tuple(m.comps[x].table[v] for v in t.unit[x].table)
        if got != u.unit[x].table:
            un.fail(object=x, got=got, want=u.unit[x].table)
    if mode == "exhaustive":
        pairs = list(itertools.product(objs, repeat=2))
        rng = None
    else:
        rng = np.random.default_rng(seed)
        pairs = _sample_pairs(objs, 2, rng, samples)
    for x, y in pairs:
        sx = m.comps[x].table
        sy = np.asarray(m.comps[y].table, dtype=np.int64)
        ks = range(t.hom_count(x, y)) if rng is None else [int(rng.integers(0, t.hom_count(x, y)))]
        for ki in ks:
            k = t.k_fn(x, y, ki)
            mu.count += 1
            lhs = tuple(int(sy[v]) for v in t.star(x, y, k).table)
            sk = FinFn(k.dom, u.T[y], tuple(int(sy[v]) for v in k.table))
            us = u.star(x, y, sk).table
            rhs = tuple(us[v] for v in sx)
            if lhs != rhs:
                mu.fail(src=x, tgt=y, k=k.table, left=lhs, right=rhs)
                break
    for x, y in itertools.product(objs, repeat=2):
        for h in range(t.base.homs[(x, y)]):
            nat.count += 1
            lhs = tuple(m.comps[y].table[v] for v in t.functor_action(x, y, h).table)
            Th = u.functor_action(x, y, h).table
            rhs = tuple(Th[v] for v in m.comps[x].table)
            if lhs != rhs:
                nat.fail(src=x, tgt=y, arrow=h)
    return rep


# ---------------------------------------------------------------- ordinary monads on FinSet


TABLE_CAP = 1 << 17  # largest T-table materialized by default


class MonadData:
    """A monad on FinSet: endofunctor, unit, and multiplication or Kleisli extension.

    Tables may be *partial* (entries ``-1``) for monads obtained by extension
    from a truncated index category; :func:`check_monad_laws` accounts for
    undefined entries separately from failures.
    """

    def __init__(
        self,
        endo: SetEndo,
        unit: Callable[[int], Sequence[int]],
        mult: Callable[[int], Sequence[int]] | None = None,
        star: Callable[[FinFn], Sequence[int]] | None = None,
        name: str = "",
        max_size: int | None = None,
    ):
        if mult is None and star is None:
            raise ValueError("a monad needs μ or a Kleisli extension")
        self.endo = endo
        self._unit = unit
        self._mult = mult
        self._star = star
        self.name = name or endo.name
        self.max_size = max_size
        self.table_cap = TABLE_CAP
        self._memo: dict = {}

    def __repr__(self):
        return f"MonadData({self.name})"

    def size(self, n: int) -> int:
        return self.endo.size(n)

    def obj(self, n: int) -> FinSet:
        return FinSet(self.endo.size(n))

    def fmap_table(self, f: Sequence[int], cod: int) -> tuple[int, ...]:
        self._guard(self.size(len(f)), f"T f table on size {len(f)}")
        return tuple(self.endo.fmap_table(tuple(f), cod))

    def fmap(self, f: FinFn) -> FinFn:
        return self.endo.fmap(f)

    def _memo_get(self, key, fn):
        if key not in self._memo:
            self._memo[key] = tuple(int(v) for v in fn())
        return self._memo[key]

    def unit_table(self, n: int) -> tuple[int, ...]:
        return self._memo_get(("unit", n), lambda: self._unit(n))

    def _guard(self, count: int, what: str) -> None:
        cap = self.table_cap
        if count > cap:
            raise EnumerationOverflow(count, cap, f"{self.name} {what}")

    def mult_table(self, n: int) -> tuple[int, ...]:
        if ("mult", n) not in self._memo:
            self._guard(self.size(n), f"T table at size {n}")
            self._guard(self.size(self.size(n)), f"μ table at size {n}")
        if self._mult is not None:
            return self._memo_get(("mult", n), lambda: self._mult(n))
        tn = self.size(n)
        return self._memo_get(("mult", n), lambda: self._star(FinFn(FinSet(tn), FinSet(tn), tuple(range(tn)))))

    def unit(self, n: int) -> FinFn:
        return FinFn(FinSet(n), self.obj(n), self.unit_table(n))

    def mult(self, n: int) -> FinFn:
        return FinFn(FinSet(self.size(self.size(n))), self.obj(n), self.mult_table(n))

    def star_table(self, k: FinFn, cod: int) -> tuple[int, ...]:
        """``k* : T A -> T B`` for ``k : A -> T B`` (``cod = |B|``)."""
        if self._star is not None:
            return tuple(int(v) for v in self._star(k))
        tk = self.fmap_table(k.table, k.cod.size)
        mu = self.mult_table(cod)
        return tuple(mu[v] if v >= 0 else -1 for v in tk)

    def star(self, k: FinFn, cod: int) -> FinFn:
        return FinFn(self.obj(k.dom.size), self.obj(cod), self.star_table(k, cod))


def _pc(g: Sequence[int], f: Sequence[int]) -> tuple[int, ...]:
    """Partial composite ``g ∘ f`` (``-1`` propagates)."""
    return tuple(g[v] if v >= 0 else -1 for v in f)


def _cmp_partial(chk: Check, label: dict, lhs: Sequence[int], rhs: Sequence[int]) -> int:
    """Compare where both sides are defined; returns the number of undefined points."""
    undefined = 0
    for i, (a, b) in enumerate(zip(lhs, rhs)):
        if a < 0 or b < 0:
            undefined += 1
            continue
        chk.count += 1
        if a != b and chk.status != FAIL:
            chk.fail(element=i, left=a, right=b, **label)
    return undefined


def check_monad_laws(m: MonadData, sizes: Iterable[int], naturality_cap: int = 64) -> Report:
    """Unit, associativity and naturality laws at each listed size.

    A law whose evaluation touches undefined entries is reported per size with
    status ``out-of-universe`` (and still fails if a defined point disagrees);
    one whose evaluation exceeds the enumeration budget is ``skipped``.
    """
    sizes = list(sizes)
    rep = Report()
    for n in sizes:
        tn = m.size(n)
        checks = {
            "left-unit": Check(f"monad/left-unit/n={n}", "μ ∘ η_T = id"),
            "right-unit": Check(f"monad/right-unit/n={n}", "μ ∘ T η = id"),
            "associativity": Check(f"monad/associativity/n={n}", "μ ∘ μ_T = μ ∘ T μ"),
        }

        def left_unit(c):
            return _cmp_partial(c, {"size": n}, _pc(m.mult_table(n), m.unit_table(tn)), tuple(range(tn)))

        def right_unit(c):
            try:
                t_eta = m.fmap_table(m.unit_table(n), tn)
            except OutOfUniverse:
                return tn
            return _cmp_partial(c, {"size": n}, _pc(m.mult_table(n), t_eta), tuple(range(tn)))

        def associativity(c):
            mu = m.mult_table(n)
            try:
                mu_t = m.mult_table(tn)
                if any(v < 0 for v in mu):
                    raise OutOfUniverse(n, "μ partial; T μ undefined")
                t_mu = m.fmap_table(mu, tn)
            except OutOfUniverse:
                return len(m.mult_table(tn)) if tn <= n else max(1, m.size(tn))
            return _cmp_partial(c, {"size": n}, _pc(mu, mu_t), _pc(mu, t_mu))

        for key, law in (("left-unit", left_unit), ("right-unit", right_unit), ("associativity", associativity)):
            chk = checks[key]
            try:
                undefined = law(chk)
            except EnumerationOverflow as e:
                chk.status = SKIPPED
                chk.reason = str(e)
                rep.add(chk)
                continue
            if undefined and chk.status != FAIL:
                chk.status = OUT_OF_UNIVERSE
                chk.witness = {"undefined_points": undefined, "agreeing_points": chk.count}
                chk.reason = "some table entries are undefined inside the truncation"
            rep.add(chk)
    # naturality of η and μ over functions between the listed sizes
    nat = rep.new("monad/naturality", "T f ∘ η = η ∘ f,  T f ∘ μ = μ ∘ T T f")
    for a, b in itertools.product(sizes, repeat=2):
        if b**a > naturality_cap:
            continue
        for f in itertools.product(range(b), repeat=a):
            try:
                tf = m.fmap_table(f, b)
                ttf = m.fmap_table(tf, m.size(b))
                _cmp_partial(nat, {"f": list(f), "law": "unit"}, _pc(tf, m.unit_table(a)), _pc(m.unit_table(b), f))
                _cmp_partial(nat, {"f": list(f), "law": "mult"}, _pc(tf, m.mult_table(a)), _pc(m.mult_table(b), ttf))
            except (OutOfUniverse, EnumerationOverflow):
                continue
    return rep


@dataclass(eq=False)
class MonadMorphism:
    src: MonadData
    tgt: MonadData
    comp: Callable[[int], Sequence[int]]

    def table(self, n: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.comp(n))


def check_monad_morphism(s: MonadMorphism, sizes: Iterable[int]) -> Report:
    """``σ∘η = η'``, ``σ∘μ = μ'∘T'σ∘σ_T`` and naturality, at the listed sizes."""
    rep = Report()
    un = rep.new("monad-morphism/unit", "σ ∘ η = η'")
    mu = rep.new("monad-morphism/multiplication", "σ ∘ μ = μ' ∘ T'σ ∘ σ_T")
    nat = rep.new("monad-morphism/naturality", "σ ∘ T f = T' f ∘ σ")
    m, u = s.src, s.tgt
    sizes = list(sizes)
    undefined = 0
    for n in sizes:
        sn = s.table(n)
        undefined += _cmp_partial(un, {"size": n}, _pc(sn, m.unit_table(n)), u.unit_table(n))
        st = s.table(m.size(n))
        lhs = _pc(sn, m.mult_table(n))
        rhs = _pc(u.mult_table(n), _pc(u.fmap_table(sn, u.size(n)), st))
        undefined += _cmp_partial(mu, {"size": n}, lhs, rhs)
    for a, b in itertools.product(sizes, repeat=2):
        if b**a > 64:
            continue
        for f in itertools.product(range(b), repeat=a):
            _cmp_partial(nat, {"f": list(f)}, _pc(s.table(b), m.fmap_table(f, b)), _pc(u.fmap_table(f, b), s.table(a)))
    if undefined:
        mu.status = OUT_OF_UNIVERSE if mu.status != FAIL else FAIL
        mu.reason = f"{undefined} undefined points"
    return rep


# ---------------------------------------------------------------- restriction


def restrict(m: MonadData, J: FunctorData, name: str | None = None) -> RelMonadData:
    """``T♭ X = T(J X)``, ``η♭ = η_{J X}``, ``k^{*♭} = k*``."""
    c = J.src
    if m.max_size is not None:
        for x in c.objects:
            if J.obj[x].size > m.max_size:
                raise ValueError(f"J {x} has size {J.obj[x].size}, outside the monad's universe")
    T = {x: m.obj(J.obj[x].size) for x in c.objects}
    unit = {x: m.unit(J.obj[x].size) for x in c.objects}

    def star(x, y, k):
        return m.star(k, J.obj[y].size)

    return RelMonadData(c, J, T, unit, star, name=name or f"{m.name}♭")


def restrict_morphism(s: MonadMorphism, J: FunctorData, src: RelMonadData, tgt: RelMonadData) -> RelMonadMorphism:
    comps = {x: FinFn(src.T[x], tgt.T[x], s.table(J.obj[x].size)) for x in J.src.objects}
    return RelMonadMorphism(src, tgt, comps)


# ---------------------------------------------------------------- μ ↔ (−)*


def mu_from_star(t: RelMonadData, x: Obj) -> FinFn:
    """``μ_X = [(−)*] : Lan T (T X) -> T X``."""
    T = t.T_functor()
    lan = lan_object(t.J, T, t.T[x].size)
    vals = np.zeros(lan.n_elements, dtype=np.int64)
    for z in lan.objects:
        fz = lan.fsize[z]
        if fz == 0:
            continue
        S = t.star_table(z, x)  # row p is (k_p)*
        vals[lan.offsets[z]:lan.offsets[z] + lan.psize[z] * fz] = S.reshape(-1)
    return lan.factor_values(vals, t.T[x].size)


def mu_nat(t: RelMonadData, mu: Mapping[Obj, FinFn] | None = None) -> NatTransData:
    """μ as a natural transformation ``T·T ⇒ T``."""
    T = t.T_functor()
    comps = dict(mu) if mu is not None else {x: mu_from_star(t, x) for x in t.base.objects}
    return NatTransData(tensor(t.J, T, T), T, comps)


def star_from_mu(t: RelMonadData, mu: Mapping[Obj, FinFn]) -> StarOp:
    """``k* = μ_Y ∘ ι k``."""
    T = t.T_functor()

    def star(x, y, k):
        lan = lan_object(t.J, T, t.T[y].size)
        iota = lan.iota(x, k)
        return FinFn(t.T[x], t.T[y], tuple(mu[y].table[v] for v in iota.table))

    return star


def mu_roundtrip_check(t: RelMonadData) -> Report:
    """``star_from_mu(mu_from_star(t)) = t.star`` on every k, and ``μ`` recovered exactly."""
    rep = Report()
    s2m = rep.new("mu-star/star-roundtrip", "μ_Y ∘ ι k = k*")
    m2s = rep.new("mu-star/mu-roundtrip", "[(μ ∘ ι −)] = μ")
    mu = {x: mu_from_star(t, x) for x in t.base.objects}
    star2 = star_from_mu(t, mu)
    for x, y in t.base.pairs():
        S = t.star_table(x, y)
        for i in range(S.shape[0]):
            s2m.count += 1
            got = star2(x, y, t.k_fn(x, y, i)).table
            if got != tuple(S[i].tolist()):
                s2m.fail(src=x, tgt=y, k=t.k_fn(x, y, i).table)
                break
    t2 = RelMonadData(t.base, t.J, t.T, t.unit, star2, name=t.name + "'")
    for x in t.base.objects:
        m2s.count += mu[x].dom.size
        if mu_from_star(t2, x).table != mu[x].table:
            m2s.fail(object=x)
    return rep


def skew_monoid_laws(t: RelMonadData, mu: Mapping[Obj, FinFn] | None = None) -> Report:
    """The three skew-monoid diagrams for ``(T, η, μ)``, per object."""
    from .kan import _c, _cmp, _idfn

    J = t.J
    T = t.T_functor()
    mu = dict(mu) if mu is not None else {x: mu_from_star(t, x) for x in t.base.objects}
    eta = t.unit_nat()
    mn = mu_nat(t, mu)
    rep = Report()
    r1 = rep.new("skew-monoid/right-unit", "μ ∘ (T·η) ∘ ρ_T = id")
    r2 = rep.new("skew-monoid/left-unit", "μ ∘ (η·T) = λ_T")
    r3 = rep.new("skew-monoid/associativity", "μ ∘ (T·μ) ∘ α = μ ∘ (μ·T)")
    skipped: dict[str, list] = {"right-unit": [], "left-unit": [], "associativity": []}
    for x in t.base.objects:
        tx = t.T[x].size
        try:
            lan_jx = lan_object(J, T, J.obj[x].size)
            lan_tx = lan_object(J, T, tx)
            lhs = _c(mu[x], lan_map(lan_jx, lan_tx, t.unit[x]), rho(J, T, x))
            _cmp(r1, f"x={x}", lhs, _idfn(tx))
        except EnumerationOverflow:
            skipped["right-unit"].append(x)
            continue
        try:
            lhs = _c(mu[x], lan_nat(lan_object(J, J, tx), lan_tx, eta))
            _cmp(r2, f"x={x}", lhs, lambda_bar(J, tx))
        except EnumerationOverflow:
            skipped["left-unit"].append(x)
        try:
            lan_ttx = lan_object(J, T, lan_tx.size)
            lhs = _c(mu[x], lan_map(lan_ttx, lan_tx, mu[x]), alpha_bar(J, T, T, tx))
            rhs = _c(mu[x], lan_nat(lan_object(J, tensor(J, T, T), tx), lan_tx, mn))
            _cmp(r3, f"x={x}", lhs, rhs)
        except EnumerationOverflow:
            skipped["associativity"].append(x)
    for chk, key in ((r1, "right-unit"), (r2, "left-unit"), (r3, "associativity")):
        _note_skipped(chk, skipped[key], len(t.base.objects))
    return rep


def _note_skipped(chk: Check, objs: list, total: int) -> None:
    """Record objects whose evaluation exceeded the enumeration budget."""
    if not objs:
        return
    chk.reason = f"budget exceeded at objects {objs}"
    if len(objs) == total and chk.status != FAIL:
        chk.status = SKIPPED


def mu_morphism_check(m: RelMonadMorphism) -> Report:
    """Morphisms in monoid form: ``μ'∘(Lan σ)_{T'X}∘Lan T(σ_X) = σ∘μ``; and the transport back."""
    from .kan import _c, _cmp

    t, u = m.src, m.tgt
    J = t.J
    T, U = t.T_functor(), u.T_functor()
    rep = Report()
    law = rep.new("mu-morphism/multiplication", "μ' ∘ (Lan σ) ∘ Lan T(σ) = σ ∘ μ")
    sig = NatTransData(T, U, dict(m.comps))
    for x in t.base.objects:
        mu_t = mu_from_star(t, x)
        mu_u = mu_from_star(u, x)
        a = lan_map(lan_object(J, T, t.T[x].size), lan_object(J, T, u.T[x].size), m.comps[x])
        b = lan_nat(lan_object(J, T, u.T[x].size), lan_object(J, U, u.T[x].size), sig)
        _cmp(law, f"x={x}", _c(mu_u, b, a), _c(m.comps[x], mu_t))
    return rep


# ---------------------------------------------------------------- μ♭


def mu_flat(m: MonadData, J: FunctorData, x: Obj) -> FinFn:
    """``μ♭ = (μ∘J) ∘ (T∘λ̄∘T∘J) ∘ (ᾱ̿∘T∘J)`` at ``x``."""
    from .kan import _c

    TJ = m.endo.after(J)
    tjx = TJ.obj[x].size
    a = alpha_bar_bar(J, m.endo, J, tjx)
    lb = lambda_bar(J, tjx)
    t_lb = FinFn(m.obj(lan_object(J, J, tjx).size), m.obj(tjx), m.fmap_table(lb.table, tjx))
    mu = m.mult(J.obj[x].size)
    return _c(mu, t_lb, a)


def mu_flat_check(m: MonadData, J: FunctorData) -> Report:
    """μ♭ by the composite formula equals ``mu_from_star(restrict(m))``."""
    from .kan import _cmp

    rep = Report()
    chk = rep.new("mu-flat/equals-restriction", "μ♭ = [(−)*♭]")
    t = restrict(m, J)
    for x in J.src.objects:
        _cmp(chk, f"x={x}", mu_flat(m, J, x), mu_from_star(t, x))
    return rep


# ---------------------------------------------------------------- extension


class ExtendedMonad(MonadData):
    """``T♯ = Lan_J T`` with ``η♯ = Lan η ∘ λ̄⁻¹`` and ``μ♯ = Lan μ ∘ ᾱ⁻¹``.

    Tables of ``μ♯`` are partial (``-1``) on classes where no representative
    admits the inverse construction inside the truncation.
    """

    def __init__(self, t: RelMonadData):
        self.t = t
        self.T = t.T_functor()
        self.eta = t.unit_nat()
        self.mu = mu_nat(t)
        self.stats: dict[int, dict] = {}
        endo = lan_endo(t.J, self.T)
        super().__init__(endo, self._unit_tab, self._mult_tab, name=f"{t.name}♯")

    def lan(self, n: int):
        return lan_object(self.t.J, self.T, n)

    def _unit_tab(self, n):
        J = self.t.J
        inv = lambda_bar_inverse(J, n)
        le = lan_nat(lan_object(J, J, n), self.lan(n), self.eta)
        return [le.table[v] for v in inv.table]

    def _mult_tab(self, n):
        J = self.t.J
        arr, stats = alpha_bar_inverse(J, self.T, self.T, n, partial=True)
        self.stats[n] = stats
        lm = lan_nat(lan_object(J, tensor(J, self.T, self.T), n), self.lan(n), self.mu)
        return [lm.table[v] if v >= 0 else -1 for v in arr.tolist()]

    def fmap_table(self, f, cod):
        if any(v < 0 for v in f):
            raise OutOfUniverse(cod, "functor action on a partial map")
        return super().fmap_table(f, cod)


def extend(t: RelMonadData) -> ExtendedMonad:
    """The monad ``T♯`` on FinSet induced by a relative monad on a well-behaved ``J``."""
    from .kan import ff_check

    ff = ff_check(t.J)
    if ff.status != PASS:
        raise Refused("ff", "J⁻¹ is needed for ρ⁻¹")
    if one_object(t.J) is None:
        raise Refused("dense", "λ̄⁻¹ needs an object with singleton image")
    return ExtendedMonad(t)


def extend_morphism(m: RelMonadMorphism, src: ExtendedMonad, tgt: ExtendedMonad) -> MonadMorphism:
    """``σ♯ = Lan σ``."""
    sig = NatTransData(src.T, tgt.T, dict(m.comps))

    def comp(n):
        return lan_nat(src.lan(n), tgt.lan(n), sig).table

    return MonadMorphism(src, tgt, comp)


def counit(m: MonadData, J: FunctorData) -> MonadMorphism:
    """``ε : (M♭)♯ -> M``, ``[(Z, g, x)] ↦ M(g)(x)`` i.e. ``(M∘λ̄)∘ᾱ̿``."""
    flat = restrict(m, J)
    sharp = ExtendedMonad(flat)

    def comp(n):
        lan = sharp.lan(n)
        out = []
        for c in range(lan.size):
            z, p, x = lan.decode(int(lan.reps[c]))
            g = fn_from_index(p, J.obj[z].size, n)
            out.append(m.fmap_table(g, n)[x])
        return out

    return MonadMorphism(sharp, m, comp)


def counit_formula_check(m: MonadData, J: FunctorData, sizes: Iterable[int]) -> Report:
    """The counit computed on representatives equals ``(M∘λ̄)∘ᾱ̿`` computed through the universal property."""
    from .kan import _c, _cmp

    rep = Report()
    chk = rep.new("counit/formula", "ε = (M ∘ λ̄) ∘ ᾱ̿")
    eps = counit(m, J)
    for n in sizes:
        a = alpha_bar_bar(J, m.endo, J, n)
        lb = lambda_bar(J, n)
        m_lb = FinFn(m.obj(lb.dom.size), m.obj(n), m.fmap_table(lb.table, n))
        f = _c(m_lb, a)
        _cmp(chk, f"n={n}", f, FinFn(f.dom, f.cod, eps.table(n)))
    return rep


def coreflection_check(
    t: RelMonadData | None, m: MonadData | None, J: FunctorData | None = None, sizes: Iterable[int] = (0, 1, 2)
) -> Report:
    """Unit ``ρ_T`` (bijective relative-monad morphism) and counit/triangles for ``m``."""
    rep = Report()
    sizes = list(sizes)
    if t is not None:
        sharp = extend(t)
        back = restrict(sharp, t.J, name=f"{t.name}♯♭")
        unit = RelMonadMorphism(t, back, {x: rho(t.J, t.T_functor(), x) for x in t.base.objects})
        rep.extend(check_morphism(unit), prefix="unit")
        bij = rep.new("unit/bijective", "ρ_T is a componentwise bijection")
        for x in t.base.objects:
            bij.count += 1
            w = bijectivity_witness(unit.comps[x])
            if w:
                bij.fail(object=x, **w)
        # triangle: ε_{T♯} ∘ (ρ_T)♯ = id_{T♯}
        tri = rep.new("triangle/sharp", "ε_{T♯} ∘ (ρ_T)♯ = id")
        back_sharp = ExtendedMonad(back)
        rho_sharp = extend_morphism(unit, sharp, back_sharp)
        eps = _counit_into(sharp, t.J, back_sharp)
        for n in sizes:
            got = _pc(eps.table(n), rho_sharp.table(n))
            _cmp_partial(tri, {"size": n}, got, tuple(range(sharp.size(n))))
    if m is not None:
        if J is None:
            raise ValueError("J is required for the counit")
        eps = counit(m, J)
        rep.extend(check_monad_morphism(eps, sizes), prefix="counit")
        rep.extend(counit_formula_check(m, J, sizes))
        # triangle: (ε_M)♭ ∘ ρ_{M♭} = id_{M♭}
        tri = rep.new("triangle/flat", "(ε_M)♭ ∘ ρ_{M♭} = id")
        flat = restrict(m, J)
        for x in J.src.objects:
            r = rho(J, flat.T_functor(), x)
            e = eps.table(J.obj[x].size)
            _cmp_partial(tri, {"object": x}, _pc(e, r.table), tuple(range(flat.T[x].size)))
    return rep


def _counit_into(m: MonadData, J: FunctorData, sharp_of_flat: ExtendedMonad) -> MonadMorphism:
    """Counit ``(m♭)♯ -> m`` where ``(m♭)♯`` is the given extension."""

    def comp(n):
        lan = sharp_of_flat.lan(n)
        out = []
        for c in range(lan.size):
            z, p, x = lan.decode(int(lan.reps[c]))
            g = fn_from_index(p, J.obj[z].size, n)
            out.append(m.fmap_table(g, n)[x])
        return out

    return MonadMorphism(sharp_of_flat, m, comp)


def counit_bijective(m: MonadData, J: FunctorData, n: int) -> bool:
    eps = counit(m, J)
    t = eps.table(n)
    return len(t) == m.size(n) and len(set(t)) == len(t)


# ---------------------------------------------------------------- shallow layer


class ShallowRelMonad(Protocol):
    """Callables over arbitrary values; ``J`` is given by ``jsize`` on objects."""

    def jsize(self, x: Any) -> int: ...

    def unit(self, x: Any, i: int) -> Any: ...

    def star(self, x: Any, y: Any, k: Sequence[Any]) -> Callable[[Any], Any]: ...


@dataclass
class ShallowInstance:
    """A shallow relative monad assembled from functions."""

    jsize: Callable[[Any], int]
    unit: Callable[[Any, int], Any]
    star: Callable[[Any, Any, Sequence[Any]], Callable[[Any], Any]]
    name: str = ""


@dataclass
class Generator:
    """Bounded enumerations: objects, values of ``T x`` and Kleisli maps ``J x -> T y``."""

    objects: Sequence[Any]
    values: Callable[[Any], Iterable[Any]]
    kleisli: Callable[[Any, Any], Iterable[Sequence[Any]]]


def shallow_laws(t: ShallowRelMonad, gen: Generator) -> Report:
    """The three relative-monad laws over the generated values and maps."""
    rep = Report()
    ru = rep.new("shallow/right-unit", "k* ∘ η = k")
    lu = rep.new("shallow/left-unit", "η* = id")
    assoc = rep.new("shallow/associativity", "(ℓ* ∘ k)* = ℓ* ∘ k*")
    objs = list(gen.objects)
    values = {x: list(gen.values(x)) for x in objs}
    ks = {(x, y): [tuple(k) for k in gen.kleisli(x, y)] for x in objs for y in objs}
    for x in objs:
        units = [t.unit(x, i) for i in range(t.jsize(x))]
        s = t.star(x, x, units)
        for v in values[x]:
            lu.count += 1
            if s(v) != v:
                lu.fail(object=x, value=str(v))
                break
    for (x, y), kl in ks.items():
        for k in kl:
            s = t.star(x, y, k)
            for i in range(t.jsize(x)):
                ru.count += 1
                if s(t.unit(x, i)) != k[i]:
                    ru.fail(src=x, tgt=y, k=[str(e) for e in k], index=i)
    for x, y, z in itertools.product(objs, repeat=3):
        vs = values[x]
        after_k = [tuple(t.star(x, y, k)(v) for v in vs) for k in ks[(x, y)]]
        composite_cache: dict[tuple, tuple] = {}
        for l in ks[(y, z)]:
            ls = t.star(y, z, l)
            l_memo: dict = {}

            def apply_l(u):
                r = l_memo.get(u)
                if r is None:
                    r = l_memo[u] = ls(u)
                return r

            for k, kv in zip(ks[(x, y)], after_k):
                comp = tuple(apply_l(e) for e in k)
                lhs = composite_cache.get(comp)
                if lhs is None:
                    lk = t.star(x, z, comp)
                    lhs = composite_cache[comp] = tuple(lk(v) for v in vs)
                assoc.count += len(vs)
                rhs = tuple(apply_l(u) for u in kv)
                if lhs != rhs:
                    i = next(i for i, (a, b) in enumerate(zip(lhs, rhs)) if a != b)
                    assoc.fail(objects=[x, y, z], k=[str(e) for e in k], l=[str(e) for e in l], value=str(vs[i]))
                    break
            if assoc.status == FAIL:
                break
        if assoc.status == FAIL:
            break
    return rep


def reflect(t: RelMonadData) -> ShallowInstance:
    """View a deep relative monad through the shallow interface (values are indices)."""

    def star(x, y, k):
        s = t.star(x, y, FinFn(t.J.obj[x], t.T[y], tuple(k)))
        return lambda v: s.table[v]

    return ShallowInstance(lambda x: t.J.obj[x].size, lambda x, i: t.unit[x].table[i], star, name=t.name)


def reify(s: ShallowRelMonad, J: FunctorData, carriers: Mapping[Obj, Sequence[Hashable]], name: str = "") -> RelMonadData:
    """Tabulate a shallow relative monad whose carriers are the listed finite value sets."""
    c = J.src
    index = {x: {v: i for i, v in enumerate(carriers[x])} for x in c.objects}
    T = {x: FinSet(len(carriers[x])) for x in c.objects}
    unit = {x: FinFn(J.obj[x], T[x], tuple(index[x][s.unit(x, i)] for i in range(J.obj[x].size))) for x in c.objects}

    def star(x, y, k):
        vals = [carriers[y][i] for i in k.table]
        f = s.star(x, y, vals)
        return FinFn(T[x], T[y], tuple(index[y][f(v)] for v in carriers[x]))

    return RelMonadData(c, J, T, unit, star, name=name or getattr(s, "name", "reified"))

"""Kleisli and Eilenberg–Moore constructions for relative monads.

* :func:`kleisli_build` — the Kleisli category as a :class:`FinCat`;
* :class:`EMAlgebra` — a carrier with a structure ``χ`` tabulated per object
  ``Z`` as an array whose row ``f`` (an index of ``J Z -> X``) is ``χ f``;
* :class:`EMAltAlgebra` — a carrier with ``x : Lan T X -> X``;
* :class:`Splitting` — a relative adjunction ``(D, L, R, φ)`` whose composite
  recovers the relative monad, with Kleisli and EM as built-in examples;
* comparison functors between Kleisli/EM of ``T``, ``T♭`` and ``T♯``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fincat import FinCat, FunctorData, Obj, _frozen, check_category, check_functor, functor_category_homs
from .finset import (
    EnumerationOverflow,
    FinFn,
    FinSet,
    all_tables,
    check_budget,
    encode_tables,
    fn_from_index,
    fn_index,
)
from .kan import (
    alpha_bar,
    lambda_bar,
    lan_map,
    lan_nat,
    lan_object,
    nerve,
    rho,
)
from .relmonad import ExtendedMonad, MonadData, RelMonadData, mu_nat, restrict
from .report import FAIL, PASS, SKIPPED, Check, Report

# ---------------------------------------------------------------- Kleisli


def _kleisli_comp(t: RelMonadData, x: Obj, y: Obj, z: Obj) -> np.ndarray:
    """``comp[l, k] = index of ℓ* ∘ k``."""
    S = t.star_table(y, z)  # (n_l, |T y|)
    K = all_tables(t.J.obj[x].size, t.T[y].size)  # (n_k, |J x|)
    n_l, n_k = S.shape[0], K.shape[0]
    if K.shape[1] == 0 or n_l == 0 or n_k == 0:
        return np.zeros((n_l, n_k), dtype=np.int64)
    comp = S[:, K]  # (n_l, n_k, |J x|)
    return encode_tables(comp.reshape(n_l * n_k, -1), t.T[z].size).reshape(n_l, n_k)


def kleisli_build(t: RelMonadData) -> FinCat:
    """Objects of ``𝕁``; ``hom(X, Y) = C(J X, T Y)``; ``id = η``; ``ℓ ∘ k = ℓ* ∘ k``."""
    objs = t.base.objects
    homs = {(x, y): t.hom_count(x, y) for x, y in t.base.pairs()}
    check_budget(sum(homs.values()), "kleisli homs")
    comp = {(x, y, z): _frozen(_kleisli_comp(t, x, y, z)) for x, y, z in itertools.product(objs, repeat=3)}
    ids = {x: fn_index(t.unit[x].table, t.T[x].size) for x in objs}
    return FinCat(tuple(objs), homs, comp, ids, name=f"Kl({t.name})")


def kleisli_L(t: RelMonadData, kl: FinCat) -> FunctorData:
    """``L : 𝕁 -> Kl``, ``L f = η ∘ J f``."""
    arr = {}
    for x, y in t.base.pairs():
        eta = np.asarray(t.unit[y].table, dtype=np.int64)
        jh = t.J.arr[(x, y)]
        rows = eta[jh] if jh.size else np.zeros((jh.shape[0], 0), dtype=np.int64)
        arr[(x, y)] = _frozen(encode_tables(rows, t.T[y].size) if rows.shape[0] else np.zeros(0))
    return FunctorData(t.base, {x: x for x in t.base.objects}, arr, kl, "L")


def kleisli_R(t: RelMonadData, kl: FinCat) -> FunctorData:
    """``R : Kl -> C``, ``R X = T X``, ``R k = k*``."""
    arr = {(x, y): t.star_table(x, y) for x, y in kl.pairs()}
    return FunctorData(kl, dict(t.T), arr, None, "R")


def kleisli_adjunction_check(t: RelMonadData, kl: FinCat | None = None) -> Report:
    """Category laws of ``Kl(T)``, functoriality of ``L`` and ``R``, and ``R ∘ L = T``."""
    kl = kl if kl is not None else kleisli_build(t)
    rep = Report()
    rep.extend(check_category(kl), prefix="kleisli")
    L, R = kleisli_L(t, kl), kleisli_R(t, kl)
    rep.extend(check_functor(L), prefix="kleisli/L")
    rep.extend(check_functor(R), prefix="kleisli/R")
    rl = rep.new("kleisli/RL=T", "R(L X) = T X and R(L f) = T f")
    T = t.T_functor()
    for x, y in t.base.pairs():
        rl.count += t.base.homs[(x, y)]
        got = R.arr[(x, y)][L.arr[(x, y)]] if t.base.homs[(x, y)] else T.arr[(x, y)]
        if not np.array_equal(got, T.arr[(x, y)]):
            h = int(np.nonzero((got != T.arr[(x, y)]).any(axis=1))[0][0])
            rl.fail(src=x, tgt=y, arrow=h)
    return rep


# ---------------------------------------------------------------- EM algebras


@dataclass(eq=False)
class EMAlgebra:
    """Carrier ``X`` (a size) and ``chi[Z][f] = χ f`` as a table ``T Z -> X``."""

    t: RelMonadData
    carrier: int
    chi: Mapping[Obj, np.ndarray]
    name: str = ""

    def structure(self, z: Obj, f: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) for v in self.chi[z][fn_index(f, self.carrier)])

    def key(self) -> tuple:
        return (self.carrier,) + tuple(self.chi[z].tobytes() for z in self.t.base.objects)


def free_algebra(t: RelMonadData, y: Obj) -> EMAlgebra:
    """``L y = (T y, λk. k*)``."""
    return EMAlgebra(t, t.T[y].size, {z: t.star_table(z, y) for z in t.base.objects}, f"free({y})")


def em_check(a: EMAlgebra) -> Report:
    """``χ f ∘ η = f`` and ``χ(χ f ∘ k) = χ f ∘ k*``."""
    t = a.t
    rep = Report()
    un = rep.new("em/unit", "χ f ∘ η = f")
    mu = rep.new("em/multiplication", "χ(χ f ∘ k) = χ f ∘ k*")
    n = a.carrier
    for w in t.base.objects:
        F = all_tables(t.J.obj[w].size, n)
        C = a.chi[w]
        eta = np.asarray(t.unit[w].table, dtype=np.int64)
        got = C[:, eta] if len(eta) else np.zeros((C.shape[0], 0), dtype=np.int64)
        un.count += F.shape[0]
        if not np.array_equal(got, F):
            i = int(np.nonzero((got != F).any(axis=1))[0][0])
            un.fail(object=w, f=F[i], got=got[i])
    for z, w in t.base.pairs():
        K = all_tables(t.J.obj[z].size, t.T[w].size)
        S = t.star_table(z, w)
        Cw, Cz = a.chi[w], a.chi[z]
        for fi in range(Cw.shape[0]):
            row = Cw[fi]
            mu.count += K.shape[0]
            inner = row[K] if K.shape[1] else np.zeros((K.shape[0], 0), dtype=np.int64)
            lhs = Cz[encode_tables(inner, n)]
            rhs = row[S] if S.shape[1] else np.zeros_like(lhs)
            if not np.array_equal(lhs, rhs):
                ki = int(np.nonzero((lhs != rhs).any(axis=1))[0][0])
                mu.fail(objects=[z, w], f=fn_from_index(fi, t.J.obj[w].size, n), k=K[ki])
                break
        if mu.status == FAIL:
            break
    return rep


def em_restrict(a: EMAlgebra, t: RelMonadData) -> EMAlgebra:
    """The same structure over a relative monad on a full subcategory of ``a.t``'s base."""
    missing = [z for z in t.base.objects if z not in a.chi]
    if missing:
        raise ValueError(f"objects {missing} are not in the algebra's base")
    return EMAlgebra(t, a.carrier, {z: a.chi[z] for z in t.base.objects}, a.name)


def em_morphism_check(a: EMAlgebra, b: EMAlgebra, h: Sequence[int]) -> Check:
    """``h ∘ χ f = χ'(h ∘ f)`` for every ``Z`` and ``f``."""
    chk = Check("em/morphism", "h ∘ χ f = χ'(h ∘ f)")
    h = np.asarray(h, dtype=np.int64)
    for z in a.t.base.objects:
        F = all_tables(a.t.J.obj[z].size, a.carrier)
        lhs = h[a.chi[z]] if a.chi[z].size else a.chi[z]
        hf = h[F] if F.shape[1] else F
        rhs = b.chi[z][encode_tables(hf, b.carrier)]
        chk.count += F.shape[0]
        if not np.array_equal(lhs, rhs):
            i = int(np.nonzero((lhs != rhs).any(axis=1))[0][0])
            chk.fail(object=z, f=F[i])
            break
    return chk


def em_homs(a: EMAlgebra, b: EMAlgebra) -> list[tuple[int, ...]]:
    """All algebra maps ``a -> b`` by enumeration of ``X -> X'``."""
    check_budget(b.carrier**a.carrier, "algebra maps")
    return [tuple(int(v) for v in h) for h in all_tables(a.carrier, b.carrier) if em_morphism_check(a, b, h).ok]


def _hom_presheaf(t: RelMonadData, n: int) -> FunctorData:
    """``Z ↦ C(T Z, n)`` on ``𝕁^op``, acting by precomposition with ``T h``."""
    T = t.T_functor()
    K = nerve(t.J, n)
    obj = {z: FinSet(n ** t.T[z].size) for z in t.base.objects}
    check_budget(sum(s.size for s in obj.values()), "hom presheaf")
    arr = {}
    for w, z in t.base.pairs():
        nh = t.base.homs[(z, w)]
        rows = np.zeros((nh, obj[w].size), dtype=np.int64)
        G = all_tables(t.T[w].size, n)
        for h in range(nh):
            th = T.arr[(z, w)][h]
            pre = G[:, th] if len(th) else np.zeros((G.shape[0], 0), dtype=np.int64)
            rows[h] = encode_tables(pre, n)
        arr[(w, z)] = _frozen(rows)
    return FunctorData(K.src, obj, arr, None, f"C(T-,{n})")


def enumerate_natural_structures(t: RelMonadData, n: int) -> list[EMAlgebra]:
    """All families ``χ`` natural in ``Z`` (candidates for EM structures on a carrier of size ``n``)."""
    K = nerve(t.J, n)
    P = _hom_presheaf(t, n)
    out = []
    for tau in functor_category_homs(K, P):
        chi = {}
        for z in t.base.objects:
            idx = np.asarray(tau[z].table, dtype=np.int64)
            chi[z] = _frozen(all_tables(t.T[z].size, n)[idx] if len(idx) else np.zeros((0, t.T[z].size)))
        out.append(EMAlgebra(t, n, chi))
    return out


def enumerate_em_structures(t: RelMonadData, n: int) -> list[EMAlgebra]:
    """All law-passing EM structures on a carrier of size ``n``."""
    return [a for a in enumerate_natural_structures(t, n) if em_check(a).ok]


# ---------------------------------------------------------------- EM-alt


@dataclass(eq=False)
class EMAltAlgebra:
    """Carrier ``X`` with ``x : Lan T X -> X``."""

    t: RelMonadData
    carrier: int
    x: FinFn


def em_alt_check(b: EMAltAlgebra) -> Report:
    """``x ∘ (Lan η)_X = λ̄_X`` and ``x ∘ (Lan μ)_X = x ∘ Lan T(x) ∘ ᾱ_{T,T}``."""
    from .kan import _c, _cmp

    t, n = b.t, b.carrier
    J, T = t.J, t.T_functor()
    rep = Report()
    un = rep.new("em-alt/unit", "x ∘ (Lan η)_X = λ̄_X")
    mu = rep.new("em-alt/multiplication", "x ∘ (Lan μ)_X = x ∘ Lan T(x) ∘ ᾱ_{T,T}")
    lan_t = lan_object(J, T, n)
    _cmp(un, f"n={n}", _c(b.x, lan_nat(lan_object(J, J, n), lan_t, t.unit_nat())), lambda_bar(J, n))
    lhs = _c(b.x, lan_nat(lan_object(J, _tt(t), n), lan_t, mu_nat(t)))
    rhs = _c(b.x, lan_map(lan_object(J, T, lan_t.size), lan_t, b.x), alpha_bar(J, T, T, n))
    _cmp(mu, f"n={n}", lhs, rhs)
    return rep


def _tt(t: RelMonadData) -> FunctorData:
    from .kan import tensor

    T = t.T_functor()
    return tensor(t.J, T, T)


def em_to_alt(a: EMAlgebra) -> EMAltAlgebra:
    """``x = [χ]``: the class of ``(Z, g, e)`` goes to ``(χ g)(e)``."""
    t = a.t
    lan = lan_object(t.J, t.T_functor(), a.carrier)
    vals = np.zeros(lan.n_elements, dtype=np.int64)
    for z in lan.objects:
        fz = lan.fsize[z]
        if fz == 0 or lan.psize[z] == 0:
            continue
        vals[lan.offsets[z]:lan.offsets[z] + lan.psize[z] * fz] = a.chi[z].reshape(-1)
    return EMAltAlgebra(t, a.carrier, lan.factor_values(vals, a.carrier))


def alt_to_em(b: EMAltAlgebra) -> EMAlgebra:
    """``χ g = x ∘ ι g``."""
    t = b.t
    lan = lan_object(t.J, t.T_functor(), b.carrier)
    x = np.asarray(b.x.table, dtype=np.int64)
    chi = {}
    for z in t.base.objects:
        fz, pz = lan.fsize[z], lan.psize[z]
        block = lan.class_of[lan.offsets[z]:lan.offsets[z] + pz * fz].reshape(pz, fz)
        chi[z] = _frozen(x[block] if block.size else np.zeros((pz, fz), dtype=np.int64))
    return EMAlgebra(t, b.carrier, chi)


def em_alt_morphism_ok(b: EMAltAlgebra, c: EMAltAlgebra, h: Sequence[int]) -> bool:
    """``h ∘ x = x' ∘ Lan T h``."""
    lan_b = lan_object(b.t.J, b.t.T_functor(), b.carrier)
    lan_c = lan_object(b.t.J, b.t.T_functor(), c.carrier)
    lh = lan_map(lan_b, lan_c, FinFn(FinSet(b.carrier), FinSet(c.carrier), tuple(h)))
    return tuple(h[v] for v in b.x.table) == tuple(c.x.table[v] for v in lh.table)


def em_alt_roundtrip(t: RelMonadData, algebras: Iterable[EMAlgebra], alts: Iterable[EMAltAlgebra] = ()) -> Report:
    """``χ -> x -> χ`` and ``x -> χ -> x`` are identities; laws and algebra maps correspond."""
    rep = Report()
    rt1 = rep.new("em-alt/roundtrip-em", "alt_to_em(em_to_alt(χ)) = χ")
    rt2 = rep.new("em-alt/roundtrip-alt", "em_to_alt(alt_to_em(x)) = x")
    laws = rep.new("em-alt/laws-correspond", "χ passes EM laws ⇔ [χ] passes EM-alt laws")
    maps = rep.new("em-alt/morphisms-correspond", "h is an EM map ⇔ h is an EM-alt map")
    algebras = list(algebras)
    alts = list(alts)
    converted = []
    for i, a in enumerate(algebras):
        b = em_to_alt(a)
        converted.append(b)
        rt1.count += 1
        if alt_to_em(b).key() != a.key():
            rt1.fail(algebra=i)
        laws.count += 1
        if em_check(a).ok != em_alt_check(b).ok:
            laws.fail(algebra=i)
    for i, b in enumerate(alts):
        rt2.count += 1
        if em_to_alt(alt_to_em(b)).x.table != b.x.table:
            rt2.fail(algebra=i)
        laws.count += 1
        if em_check(alt_to_em(b)).ok != em_alt_check(b).ok:
            laws.fail(alt=i)
    for (i, a), (j, a2) in itertools.product(enumerate(algebras), repeat=2):
        if a2.carrier**a.carrier > 4096:
            continue
        for h in all_tables(a.carrier, a2.carrier):
            h = tuple(int(v) for v in h)
            maps.count += 1
            if em_morphism_check(a, a2, h).ok != em_alt_morphism_ok(converted[i], converted[j], h):
                maps.fail(src=i, tgt=j, h=h)
    return rep


# ---------------------------------------------------------------- EM category and splittings


def em_category(algebras: Sequence[EMAlgebra], name: str = "EM") -> tuple[FinCat, list[list]]:
    """The full subcategory of EM on the listed algebras; returns it and the hom tables."""
    objs = tuple(range(len(algebras)))
    tables: dict[tuple, list] = {}
    for i, j in itertools.product(objs, repeat=2):
        tables[(i, j)] = em_homs(algebras[i], algebras[j])
    homs = {k: len(v) for k, v in tables.items()}
    comp = {}
    for i, j, k in itertools.product(objs, repeat=3):
        index = {h: n for n, h in enumerate(tables[(i, k)])}
        arr = np.zeros((homs[(j, k)], homs[(i, j)]), dtype=np.int64)
        for g, gt in enumerate(tables[(j, k)]):
            for f, ft in enumerate(tables[(i, j)]):
                arr[g, f] = index[tuple(gt[v] for v in ft)]
        comp[(i, j, k)] = _frozen(arr)
    ids = {i: tables[(i, i)].index(tuple(range(algebras[i].carrier))) for i in objs}
    arrows = {k: _frozen(np.asarray(v, dtype=np.int64).reshape(len(v), algebras[k[0]].carrier)) for k, v in tables.items()}
    sizes = {i: algebras[i].carrier for i in objs}
    return FinCat(objs, homs, comp, ids, name=name, sizes=sizes, arrows=arrows), [algebras[i] for i in objs]


@dataclass(eq=False)
class Splitting:
    """A relative adjunction ``L ⊣_J R`` with ``L : 𝕁 -> D``, ``R : D -> C``.

    ``phi[(X, A)][d]`` is the index of ``φ d : J X -> R A`` for ``d ∈ D(L X, A)``.
    """

    t: RelMonadData
    D: FinCat
    L: FunctorData
    R: FunctorData
    phi: Mapping[tuple, np.ndarray]
    name: str = ""
    algebras: list | None = None

    def phi_inv(self, x: Obj, a: Obj) -> dict[int, int]:
        return {int(v): d for d, v in enumerate(self.phi[(x, a)])}


def kleisli_splitting(t: RelMonadData) -> Splitting:
    kl = kleisli_build(t)
    phi = {(x, y): _frozen(np.arange(kl.homs[(x, y)])) for x, y in kl.pairs()}
    return Splitting(t, kl, kleisli_L(t, kl), kleisli_R(t, kl), phi, "kleisli")


def em_splitting(t: RelMonadData, extra: Sequence[EMAlgebra] = ()) -> Splitting:
    """EM restricted to the free algebras on ``𝕁`` plus ``extra``; ``L X`` is free, ``R`` forgets."""
    objs = t.base.objects
    algebras = [free_algebra(t, x) for x in objs] + list(extra)
    D, algs = em_category(algebras, "EM")
    free_of = {x: i for i, x in enumerate(objs)}
    L_arr = {}
    T = t.T_functor()
    for x, y in t.base.pairs():
        L_arr[(x, y)] = _frozen(
            np.asarray([D.arrow_of_table(free_of[x], free_of[y], T.arr[(x, y)][h]) for h in range(t.base.homs[(x, y)])], dtype=np.int64)
        )
    L = FunctorData(t.base, dict(free_of), L_arr, D, "L_EM")
    R = FunctorData(D, {i: FinSet(algs[i].carrier) for i in D.objects}, dict(D.arrows), None, "U")
    phi = {}
    for x in objs:
        eta = np.asarray(t.unit[x].table, dtype=np.int64)
        for a in D.objects:
            rows = D.arrows[(free_of[x], a)]
            pre = rows[:, eta] if len(eta) else np.zeros((rows.shape[0], 0), dtype=np.int64)
            phi[(x, a)] = _frozen(encode_tables(pre, algs[a].carrier) if rows.shape[0] else np.zeros(0))
    return Splitting(t, D, L, R, phi, "em", algs)


def check_splitting(s: Splitting) -> Report:
    """``R L = T``, ``φ`` bijective, ``φ id = η``, ``R(φ⁻¹ k) = k*``, and naturality of ``φ`` in ``A``."""
    t, D = s.t, s.D
    rep = Report()
    rep.extend(check_category(D), prefix="splitting/D")
    rep.extend(check_functor(s.L), prefix="splitting/L")
    rep.extend(check_functor(s.R), prefix="splitting/R")
    rl = rep.new("splitting/RL=T", "R(L X) = T X")
    bij = rep.new("splitting/phi-bijective", "φ : D(L X, A) ≅ C(J X, R A)")
    pid = rep.new("splitting/phi-id", "φ(id_{L X}) = η_X")
    star = rep.new("splitting/phi-star", "R(φ⁻¹ k) = k*")
    nat = rep.new("splitting/phi-natural", "φ(d ∘ e) = R d ∘ φ e")
    for x in t.base.objects:
        rl.count += 1
        if s.R.obj[s.L.obj[x]].size != t.T[x].size:
            rl.fail(object=x)
        for a in D.objects:
            ph = s.phi[(x, a)]
            bij.count += 1
            want = s.R.obj[a].size ** t.J.obj[x].size
            if len(ph) != want or len(set(ph.tolist())) != want:
                bij.fail(object=x, target=a, size=len(ph), expected=want)
        lx = s.L.obj[x]
        pid.count += 1
        if int(s.phi[(x, lx)][D.ids[lx]]) != fn_index(t.unit[x].table, t.T[x].size):
            pid.fail(object=x)
    if bij.status == FAIL or rl.status == FAIL:
        return rep
    for x, y in t.base.pairs():
        inv = s.phi_inv(x, s.L.obj[y])
        S = t.star_table(x, y)
        for k in range(S.shape[0]):
            star.count += 1
            d = inv[k]
            got = s.R.arr[(s.L.obj[x], s.L.obj[y])][d]
            if not np.array_equal(got, S[k]):
                star.fail(src=x, tgt=y, k=t.k_fn(x, y, k).table)
                break
    for x in t.base.objects:
        lx = s.L.obj[x]
        for a, b in D.pairs():
            for e in range(D.homs[(lx, a)]):
                fe = fn_from_index(int(s.phi[(x, a)][e]), t.J.obj[x].size, s.R.obj[a].size)
                for d in range(D.homs[(a, b)]):
                    nat.count += 1
                    rd = s.R.arr[(a, b)][d]
                    lhs = int(s.phi[(x, b)][D.compose(lx, a, b, d, e)])
                    rhs = fn_index([int(rd[v]) for v in fe], s.R.obj[b].size)
                    if lhs != rhs:
                        nat.fail(object=x, arrows=[a, b], d=d, e=e)
    return rep


def splitting_morphisms(t: RelMonadData, s: Splitting) -> dict:
    """The unique morphisms ``Kl -> s`` and ``s -> EM``, with uniqueness by candidate counting.

    ``from_kleisli``: ``V X = L X``, ``V k = φ⁻¹ k``.  ``to_em``: ``V A = (R A, λk. R(φ⁻¹ k))``,
    ``V d = R d``.  Uniqueness counts, per arrow (resp. per object), the candidates
    satisfying the splitting-morphism equations; the morphism is unique iff all
    counts are 1.
    """
    rep = Report()
    kl = kleisli_build(t)
    # -- from Kleisli
    arr = {}
    cand_total = 1
    uniq = rep.new("splitting/from-kleisli/unique", "exactly one V with V L = L', R' V = R, φ' V = φ")
    eqs = rep.new("splitting/from-kleisli/equations", "V L = L', R' V = R, φ'(V k) = k")
    for x, y in kl.pairs():
        lx, ly = s.L.obj[x], s.L.obj[y]
        inv = s.phi_inv(x, ly)
        arr[(x, y)] = _frozen(np.asarray([inv[k] for k in range(kl.homs[(x, y)])], dtype=np.int64))
        S = t.star_table(x, y)
        R = s.R.arr[(lx, ly)]
        for k in range(kl.homs[(x, y)]):
            # candidates d with R d = k* and φ d = k
            cands = [d for d in range(s.D.homs[(lx, ly)]) if np.array_equal(R[d], S[k]) and int(s.phi[(x, ly)][d]) == k]
            uniq.count += 1
            cand_total *= len(cands)
            if len(cands) != 1:
                uniq.fail(src=x, tgt=y, k=k, candidates=len(cands))
    V = FunctorData(kl, {x: s.L.obj[x] for x in kl.objects}, arr, s.D, "V_Kl")
    rep.extend(check_functor(V), prefix="splitting/from-kleisli")
    L_kl = kleisli_L(t, kl)
    for x, y in t.base.pairs():
        eqs.count += t.base.homs[(x, y)]
        if not np.array_equal(V.arr[(x, y)][L_kl.arr[(x, y)]] if len(L_kl.arr[(x, y)]) else s.L.arr[(x, y)], s.L.arr[(x, y)]):
            eqs.fail(equation="V L = L'", src=x, tgt=y)
    # -- to EM
    em_uniq = rep.new("splitting/to-em/unique", "exactly one EM structure on R A making every R d an algebra map from free objects")
    em_laws = rep.new("splitting/to-em/algebras", "V A = (R A, λk. R(φ⁻¹ k)) passes EM laws")
    em_maps = rep.new("splitting/to-em/maps", "V d = R d is an algebra map")
    images: dict[Obj, EMAlgebra] = {}
    for a in s.D.objects:
        chi = {}
        n = s.R.obj[a].size
        for z in t.base.objects:
            inv = s.phi_inv(z, a)
            rows = [s.R.arr[(s.L.obj[z], a)][inv[f]] for f in range(n ** t.J.obj[z].size)]
            chi[z] = _frozen(np.asarray(rows, dtype=np.int64).reshape(len(rows), t.T[z].size))
        images[a] = EMAlgebra(t, n, chi, f"V({a})")
        em_laws.count += 1
        if not em_check(images[a]).ok:
            em_laws.fail(object=a)
    for a, b in s.D.pairs():
        for d in range(s.D.homs[(a, b)]):
            em_maps.count += 1
            if not em_morphism_check(images[a], images[b], s.R.arr[(a, b)][d]).ok:
                em_maps.fail(arrows=[a, b], d=d)
    try:
        for a in s.D.objects:
            n = s.R.obj[a].size
            count = 0
            for cand in enumerate_em_structures(t, n):
                ok = True
                for z in t.base.objects:
                    fz = free_algebra(t, z)
                    for d in range(s.D.homs[(s.L.obj[z], a)]):
                        if not em_morphism_check(fz, cand, s.R.arr[(s.L.obj[z], a)][d]).ok:
                            ok = False
                            break
                    if not ok:
                        break
                count += ok
            em_uniq.count += 1
            if count != 1:
                em_uniq.fail(object=a, candidates=count)
    except EnumerationOverflow as e:
        em_uniq.status = SKIPPED
        em_uniq.reason = f"uniqueness: skipped (budget) — {e}"
    return {"from_kleisli": V, "to_em": images, "report": rep, "kleisli": kl}


# ---------------------------------------------------------------- comparison functors


def monad_algebras(m: MonadData, n: int) -> list[tuple[int, ...]]:
    """All ``a : T n -> n`` with ``a ∘ η = id`` and ``a ∘ μ = a ∘ T a`` (partial μ: defined points only)."""
    tn = m.size(n)
    check_budget(n**tn, "monad algebras")
    eta = m.unit_table(n)
    mu = m.mult_table(n)
    out = []
    for a in itertools.product(range(n), repeat=tn):
        if any(a[eta[i]] != i for i in range(n)):
            continue
        ta = m.fmap_table(a, n)
        if all(mu[i] < 0 or a[mu[i]] == a[ta[i]] for i in range(len(mu))):
            out.append(a)
    return out


def comparison_flat(m: MonadData, J: FunctorData, algebra_sizes: Iterable[int] = (1, 2)) -> dict:
    """``D : Kl(T♭) -> Kl(T)`` (``D X = J X``, ``D k = k``) and ``E : EM(T) -> EM(T♭)`` (``χ f = a ∘ T f``)."""
    from .fincat import inclusion, subuniverse

    flat = restrict(m, J)
    sizes = sorted({J.obj[x].size for x in J.src.objects})
    U = subuniverse(sizes)
    full = restrict(m, inclusion(U))
    kl_flat, kl_full = kleisli_build(flat), kleisli_build(full)
    obj = {x: J.obj[x].size for x in J.src.objects}
    arr = {(x, y): _frozen(np.arange(kl_flat.homs[(x, y)])) for x, y in kl_flat.pairs()}
    D = FunctorData(kl_flat, obj, arr, kl_full, "D♭")
    rep = Report()
    rep.extend(check_functor(D), prefix="comparison-flat/D")
    e_laws = rep.new("comparison-flat/E", "E(A, a) = (A, λf. a ∘ T f) passes relative EM laws")
    e_maps = rep.new("comparison-flat/E-maps", "monad-algebra maps are relative EM maps")
    algs = []
    for n in algebra_sizes:
        for a in monad_algebras(m, n):
            chi = {}
            for z in J.src.objects:
                F = all_tables(J.obj[z].size, n)
                chi[z] = _frozen(np.asarray([[a[v] for v in m.fmap_table(tuple(f), n)] for f in F], dtype=np.int64).reshape(len(F), flat.T[z].size))
            alg = EMAlgebra(flat, n, chi)
            algs.append((n, a, alg))
            e_laws.count += 1
            if not em_check(alg).ok:
                e_laws.fail(carrier=n, structure=a)
    for (n1, a1, x1), (n2, a2, x2) in itertools.product(algs, repeat=2):
        for h in itertools.product(range(n2), repeat=n1):
            is_map = all(h[a1[i]] == a2[v] for i, v in enumerate(m.fmap_table(h, n2)))
            if is_map:
                e_maps.count += 1
                if not em_morphism_check(x1, x2, h).ok:
                    e_maps.fail(h=h)
    return {"D": D, "report": rep, "algebras": algs}


def comparison_sharp(t: RelMonadData, algebra_sizes: Iterable[int] = (1, 2)) -> dict:
    """``D : Kl(T) -> Kl(T♯)`` via ``ρ`` (fully faithful) and ``E : EM(T♯) ≅ EM(T)``."""
    from .relmonad import extend

    sharp = extend(t)
    J, T = t.J, t.T_functor()
    rep = Report()
    kl = kleisli_build(t)
    func = rep.new("comparison-sharp/D-functor", "D id = η♯, D(ℓ* ∘ k) = (D ℓ)♯* ∘ D k")
    ff = rep.new("comparison-sharp/D-fully-faithful", "D is bijective on every hom")
    rhos = {y: rho(J, T, y).table for y in t.base.objects}
    for x, y in kl.pairs():
        n_tgt = sharp.size(J.obj[y].size) ** J.obj[x].size
        images = set()
        for k in range(kl.homs[(x, y)]):
            images.add(fn_index([rhos[y][v] for v in t.k_fn(x, y, k).table], sharp.size(J.obj[y].size)))
        ff.count += 1
        if len(images) != kl.homs[(x, y)] or len(images) != n_tgt:
            ff.fail(src=x, tgt=y, image=len(images), hom=kl.homs[(x, y)], target_hom=n_tgt)
    for x in t.base.objects:
        func.count += 1
        d_id = tuple(rhos[x][v] for v in t.unit[x].table)
        if d_id != sharp.unit_table(J.obj[x].size):
            func.fail(identity=x)
    for x, y, z in itertools.product(t.base.objects, repeat=3):
        if kl.homs[(x, y)] * kl.homs[(y, z)] > 4096:
            continue
        ny, nz = J.obj[y].size, J.obj[z].size
        for k in range(kl.homs[(x, y)]):
            kt = t.k_fn(x, y, k).table
            dk = FinFn(J.obj[x], sharp.obj(ny), tuple(rhos[y][v] for v in kt))
            for l in range(kl.homs[(y, z)]):
                lt = t.k_fn(y, z, l)
                lhs = tuple(rhos[z][v] for v in (t.star(y, z, lt).table[w] for w in kt))
                dl = FinFn(J.obj[y], sharp.obj(nz), tuple(rhos[z][v] for v in lt.table))
                dls = sharp.star_table(dl, nz)
                rhs = tuple(dls[v] for v in dk.table)
                func.count += 1
                if lhs != rhs:
                    func.fail(objects=[x, y, z], k=kt, l=lt.table)
    # E : EM(T♯) -> EM(T)
    e_rt = rep.new("comparison-sharp/E-roundtrip", "E⁻¹ ∘ E = id and E ∘ E⁻¹ = id")
    e_laws = rep.new("comparison-sharp/E-laws", "T♯-algebra laws ⇔ EM laws of E(x)")
    for n in algebra_sizes:
        lan = lan_object(J, T, n)
        sharp_algs = monad_algebras(sharp, n)
        for a in sharp_algs:
            alt = EMAltAlgebra(t, n, FinFn(lan.carrier, FinSet(n), a))
            em = alt_to_em(alt)
            e_rt.count += 1
            if em_to_alt(em).x.table != tuple(a):
                e_rt.fail(carrier=n, structure=a)
            e_laws.count += 1
            if not em_check(em).ok:
                e_laws.fail(carrier=n, structure=a)
        for em in enumerate_em_structures(t, n):
            e_rt.count += 1
            back = em_to_alt(em).x.table
            if back not in set(sharp_algs):
                e_rt.fail(carrier=n, reason="EM(T) algebra not hit by E")
            elif alt_to_em(EMAltAlgebra(t, n, FinFn(lan.carrier, FinSet(n), back))).key() != em.key():
                e_rt.fail(carrier=n, reason="E ∘ E⁻¹ ≠ id")
    return {"D": None, "report": rep, "sharp": sharp}

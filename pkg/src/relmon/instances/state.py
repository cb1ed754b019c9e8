"""State and continuation as relative monads with ``T = J``.

* state: ``J X = X × S`` on a subuniverse of FinSet, ``η = id``, ``k* = k``;
  its Kleisli category is isomorphic to that of the state monad
  ``X ↦ (X × S)^S`` by currying;
* continuation: ``J X = R^X`` on the *opposite* of a subuniverse; its Kleisli
  category is the opposite of the continuation monad's Kleisli category.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from ..endo import Compose, Power, Times
from ..fincat import FinCat, FunctorData, _frozen, check_functor, op_category, subuniverse, inclusion
from ..finset import EnumerationOverflow, FinFn, FinSet, all_tables, encode_tables, fn_from_index, fn_index
from ..kleisli_em import em_check, em_restrict, enumerate_natural_structures, kleisli_build
from ..relmonad import MonadData, RelMonadData, restrict
from ..report import FAIL, Report


def times_functor(c: FinCat, s: int) -> FunctorData:
    """``J X = X × S`` on a concrete category: ``(x, j) ↦ x·|S| + j``."""
    J = inclusion(c)
    return Times(s).after(J)


def state_relmonad(s: int, sizes: Sequence[int] = (0, 1, 2)) -> RelMonadData:
    """``T = J = (−) × S``, ``η = id``, ``k* = k``."""
    c = subuniverse(sizes)
    J = times_functor(c, s)
    unit = {x: FinFn(J.obj[x], J.obj[x], tuple(range(J.obj[x].size))) for x in c.objects}
    t = RelMonadData(c, J, dict(J.obj), unit, lambda x, y, k: k, name=f"state[{s}]")
    return t


def state_monad(s: int) -> MonadData:
    """``T X = (X × S)^S``: ``η x = λσ.(x, σ)``; ``μ f = λσ. let (g, σ') = f σ in g σ'``."""
    endo = Compose(Power(s), Times(s))

    def unit(n):
        return [fn_index([x * s + j for j in range(s)], n * s) for x in range(n)]

    def mult(n):
        inner = (n * s) ** s  # |T n|
        out = []
        for f in range(endo.size(inner)):
            ft = fn_from_index(f, s, inner * s)  # σ ↦ (g, σ')
            res = []
            for j in range(s):
                g, j2 = divmod(ft[j], s)
                res.append(fn_from_index(g, s, n * s)[j2])
            out.append(fn_index(res, n * s))
        return out

    return MonadData(endo, unit, mult, name=f"state-monad[{s}]")


def state_kleisli_iso(s: int, sizes: Sequence[int] = (0, 1, 2)) -> dict:
    """Curry ``k : X×S -> Y×S`` to ``X -> (Y×S)^S`` and back; check both are inverse functors."""
    t = state_relmonad(s, sizes)
    m = state_monad(s)
    u = restrict(m, inclusion(t.base), name=f"state-monad[{s}]♭")
    kl_t, kl_m = kleisli_build(t), kleisli_build(u)
    rep = Report()
    fwd, bwd = {}, {}
    for x, y in t.base.pairs():
        nx, ny = t.base.sizes[x], t.base.sizes[y]
        F, B = [], [0] * kl_m.homs[(x, y)]
        for k in range(kl_t.homs[(x, y)]):
            kt = fn_from_index(k, nx * s, ny * s)
            curried = [fn_index([kt[a * s + j] for j in range(s)], ny * s) for a in range(nx)]
            c = fn_index(curried, (ny * s) ** s)
            F.append(c)
        for c, k in enumerate(F):
            B[k] = c
        fwd[(x, y)] = _frozen(np.asarray(F, dtype=np.int64))
        # uncurry directly, independently of the forward table
        inv = []
        for c in range(kl_m.homs[(x, y)]):
            ct = fn_from_index(c, nx, (ny * s) ** s)
            unc = [fn_from_index(ct[a], s, ny * s)[j] for a in range(nx) for j in range(s)]
            inv.append(fn_index(unc, ny * s))
        bwd[(x, y)] = _frozen(np.asarray(inv, dtype=np.int64))
    Fwd = FunctorData(kl_t, {x: x for x in kl_t.objects}, fwd, kl_m, "curry")
    Bwd = FunctorData(kl_m, {x: x for x in kl_m.objects}, bwd, kl_t, "uncurry")
    rep.extend(check_functor(Fwd), prefix="state-iso/curry")
    rep.extend(check_functor(Bwd), prefix="state-iso/uncurry")
    inv = rep.new("state-iso/inverse", "uncurry ∘ curry = id and curry ∘ uncurry = id on every hom")
    cnt = rep.new("state-iso/hom-counts", "|Kl(T)(X,Y)| = |Kl(state)(X,Y)|")
    unit = rep.new("state-iso/unit", "curry(id) = state-monad unit")
    for x, y in t.base.pairs():
        cnt.count += 1
        if kl_t.homs[(x, y)] != kl_m.homs[(x, y)]:
            cnt.fail(src=x, tgt=y, relative=kl_t.homs[(x, y)], monad=kl_m.homs[(x, y)])
            continue
        inv.count += kl_t.homs[(x, y)] * 2
        n = kl_t.homs[(x, y)]
        if not (np.array_equal(bwd[(x, y)][fwd[(x, y)]], np.arange(n)) and np.array_equal(fwd[(x, y)][bwd[(x, y)]], np.arange(n))):
            inv.fail(src=x, tgt=y)
    for x in t.base.objects:
        unit.count += 1
        if int(fwd[(x, x)][kl_t.ids[x]]) != kl_m.ids[x]:
            unit.fail(object=x)
    return {"curry": Fwd, "uncurry": Bwd, "report": rep, "relative": kl_t, "monad": kl_m}


# ---------------------------------------------------------------- continuation


def exp_functor_op(c: FinCat, r: int) -> FunctorData:
    """``J X = R^X`` on ``op(c)``: an op-arrow ``X -> Y`` is ``f : Y -> X`` acting by ``g ↦ g ∘ f``."""
    oc = op_category(c)
    obj = {x: FinSet(r ** c.sizes[x]) for x in c.objects}
    arr = {}
    for x, y in oc.pairs():
        nx, ny = c.sizes[x], c.sizes[y]
        G = all_tables(nx, r)
        rows = []
        for h in range(oc.homs[(x, y)]):
            f = c.arrows[(y, x)][h]  # f : Y -> X
            pre = G[:, f] if len(f) else np.zeros((G.shape[0], 0), dtype=np.int64)
            rows.append(encode_tables(pre, r))
        arr[(x, y)] = _frozen(np.asarray(rows, dtype=np.int64).reshape(oc.homs[(x, y)], obj[x].size))
    return FunctorData(oc, obj, arr, None, f"{r}^(-)")


def cont_relmonad(r: int, sizes: Sequence[int] = (0, 1)) -> RelMonadData:
    """``T = J = R^(−)`` on ``op(subuniverse)``; ``η = id``, ``k* = k``."""
    c = subuniverse(sizes)
    J = exp_functor_op(c, r)
    unit = {x: FinFn(J.obj[x], J.obj[x], tuple(range(J.obj[x].size))) for x in J.src.objects}
    return RelMonadData(J.src, J, dict(J.obj), unit, lambda x, y, k: k, name=f"cont[{r}]")


def cont_monad(r: int) -> MonadData:
    """``C X = R^(R^X)``: ``η x = λg. g x``, ``μ F = λg. F(λc. c g)``."""
    def size(n):
        if r > 1 and n > 64:
            # R^(R^n) would not even fit an index, let alone a table
            raise EnumerationOverflow(1 << 65, 1 << 64, f"cont-monad[{r}] size at {n}")
        return r ** (r**n)

    class _C:
        name = f"cont-monad[{r}]"

        def size(self, n):
            return size(n)

        def fmap_table(self, f, cod):
            n = len(f)
            out = []
            for c in range(size(n)):
                ct = fn_from_index(c, r**n, r)
                # (C f)(c) = λg. c(g ∘ f)
                res = [ct[fn_index([fn_from_index(g, cod, r)[v] for v in f], r)] for g in range(r**cod)]
                out.append(fn_index(res, r))
            return out

        def obj(self, n):
            return FinSet(size(n))

    def unit(n):
        return [fn_index([fn_from_index(g, n, r)[x] for g in range(r**n)], r) for x in range(n)]

    def mult(n):
        out = []
        inner = size(n)
        # λc. c g, as an index into R^(C n), for each g
        evs = [fn_index([fn_from_index(c, r**n, r)[g] for c in range(inner)], r) for g in range(r**n)]
        for F in range(size(inner)):
            Ft = fn_from_index(F, r**inner, r)
            out.append(fn_index([Ft[e] for e in evs], r))
        return out

    return MonadData(_C(), unit, mult, name=f"cont-monad[{r}]")


def cont_kleisli_iso(r: int, sizes: Sequence[int] = (0, 1)) -> dict:
    """``Kl(T)(X, Y) = (R^X -> R^Y)`` versus ``Kl(C)(Y, X) = (Y -> R^(R^X))``, by swapping arguments.

    The assignment is contravariant: it is a functor ``Kl(T) -> Kl(C)^op``,
    checked via identities and reversed composition.
    """
    t = cont_relmonad(r, sizes)
    c = subuniverse(sizes)
    u = restrict(cont_monad(r), inclusion(c), name=f"cont-monad[{r}]♭")
    kl_t, kl_c = kleisli_build(t), kleisli_build(u)
    rep = Report()
    cnt = rep.new("cont-iso/hom-counts", "|Kl(T)(X,Y)| = |Kl(C)(Y,X)|")
    bij = rep.new("cont-iso/bijective", "swap is a bijection on every hom")
    ids = rep.new("cont-iso/identity", "swap(id) = id")
    comp = rep.new("cont-iso/composition", "swap(ℓ ∘ k) = swap(k) ∘ swap(ℓ)")
    table = {}
    for x, y in t.base.pairs():
        nx, ny = c.sizes[x], c.sizes[y]
        cnt.count += 1
        if kl_t.homs[(x, y)] != kl_c.homs[(y, x)]:
            cnt.fail(src=x, tgt=y, relative=kl_t.homs[(x, y)], monad=kl_c.homs[(y, x)])
            continue
        rows = []
        for k in range(kl_t.homs[(x, y)]):
            kt = fn_from_index(k, r**nx, r**ny)  # R^X -> R^Y
            # swap: y ↦ (g ↦ k(g)(y))
            sw = [fn_index([fn_from_index(kt[g], ny, r)[b] for g in range(r**nx)], r) for b in range(ny)]
            rows.append(fn_index(sw, r ** (r**nx)))
        table[(x, y)] = rows
        bij.count += 1
        if len(set(rows)) != len(rows):
            bij.fail(src=x, tgt=y)
    for x in t.base.objects:
        ids.count += 1
        if table[(x, x)][kl_t.ids[x]] != kl_c.ids[x]:
            ids.fail(object=x)
    for x, y, z in itertools.product(t.base.objects, repeat=3):
        for k in range(kl_t.homs[(x, y)]):
            for l in range(kl_t.homs[(y, z)]):
                comp.count += 1
                lhs = table[(x, z)][kl_t.compose(x, y, z, l, k)]
                rhs = kl_c.compose(z, y, x, table[(x, y)][k], table[(y, z)][l])
                if lhs != rhs:
                    comp.fail(objects=[x, y, z], k=k, l=l)
    return {"report": rep, "relative": kl_t, "monad": kl_c}


def state_em_census(
    s: int, n: int, count_sizes: Sequence[int] = (0, 1, 2, 3, 4), law_sizes: Sequence[int] = (0, 1, 2)
) -> dict:
    """Natural structures on a carrier of size ``n`` over base ``count_sizes``, and how many pass the laws.

    Naturality is enumerated over the larger base (which pins down the
    structure); the EM laws, whose Kleisli arrows grow as ``|T w|^|J z|``, are
    checked on the restriction to ``law_sizes``.
    """
    big = state_relmonad(s, count_sizes)
    small = state_relmonad(s, law_sizes)
    nat = enumerate_natural_structures(big, n)
    lawful = [a for a in nat if em_check(em_restrict(a, small)).ok]
    return {"natural": len(nat), "lawful": len(lawful), "algebras": lawful}


def state_em_bijection(s: int, n: int, count_sizes: Sequence[int] = (0, 1, 2, 3, 4), law_sizes: Sequence[int] = (0, 1, 2)) -> dict:
    """Natural structures ``χ`` on carrier ``X`` versus maps ``x : X^S × S -> X``.

    ``χ ↦ x`` reads ``x(g, σ) = χ_1(g)(σ)`` at the one-element object;
    ``x ↦ χ`` sets ``χ_Z(f)(z, σ) = x(f(z, −), σ)``.  The transported laws
    on ``x`` are ``x(g, σ) = g σ`` (unit) and, for every ``k : Z×S -> W×S``,
    ``x((χ f ∘ k)(z, −), σ) = χ f (k(z, σ))`` (multiplication); they are
    checked on ``x`` directly and compared with the EM laws of ``χ``.
    The carrier ``X^S × S`` is compared with the Lan-computed ``Lan T X``.
    """
    from ..kan import lan_object

    census = state_em_census(s, n, count_sizes, law_sizes)
    big = state_relmonad(s, count_sizes)
    nat = enumerate_natural_structures(big, n)
    rep = Report()
    carrier = rep.new("state-em/carrier", "|Lan T X| = |X^S × S|")
    bij = rep.new("state-em/bijection", "χ ↦ x is a bijection onto all maps X^S × S -> X")
    laws = rep.new("state-em/laws", "χ passes the EM laws iff x passes the transported laws")
    one = next(z for z in big.base.objects if big.base.sizes[z] == 1)
    lan = lan_object(big.J, big.T_functor(), n)
    dom = n**s * s  # (g, σ) ↦ g·|S| + σ
    carrier.count = 1
    if lan.size != dom:
        carrier.fail(lan=lan.size, expected=dom)
    xs = []
    for a in nat:
        # χ_1(g) : 1×S -> X; g ∈ X^S indexes T-free maps 1×S -> X the same way
        x = tuple(int(a.chi[one][g][sg]) for g in range(n**s) for sg in range(s))
        xs.append(x)
        bij.count += 1
        for z in big.base.objects:
            nz = big.base.sizes[z]
            for fi, f in enumerate(all_tables(nz * s, n)):
                want = [x[fn_index(f[zz * s:(zz + 1) * s], n) * s + sg] for zz in range(nz) for sg in range(s)]
                if list(a.chi[z][fi]) != want:
                    bij.fail(object=z, f=f, got=a.chi[z][fi], expected=want)
                    break
    if len(set(xs)) != len(xs) or len(xs) != n**dom:
        bij.fail(distinct=len(set(xs)), structures=len(xs), maps=n**dom)
    lawful_keys = {a.key() for a in census["algebras"]}
    small = state_relmonad(s, law_sizes)
    for a, x in zip(nat, xs):
        laws.count += 1
        if _state_x_laws(x, s, n, small) != (a.key() in lawful_keys):
            laws.fail(x=list(x))
    return {"report": rep, "natural": len(nat), "lawful": census["lawful"], "maps": n**dom}


def _state_x_laws(x: Sequence[int], s: int, n: int, t: RelMonadData) -> bool:
    """The EM laws transported to ``x : X^S × S -> X``."""
    for g in range(n**s):
        gt = fn_from_index(g, s, n)
        if any(x[g * s + sg] != gt[sg] for sg in range(s)):
            return False

    def chi(f, nz):
        return [x[fn_index(f[zz * s:(zz + 1) * s], n) * s + sg] for zz in range(nz) for sg in range(s)]

    for z, w in t.base.pairs():
        nz, nw = t.base.sizes[z], t.base.sizes[w]
        for f in all_tables(nw * s, n).tolist():
            cf = chi(f, nw)
            for k in all_tables(nz * s, nw * s).tolist():
                if chi([cf[v] for v in k], nz) != [cf[v] for v in k]:
                    return False
    return True

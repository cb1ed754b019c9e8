"""Vectors over a semiring as a relative monad on finite cardinals.

``Vec m = R^m`` (functions ``m -> R``, indexed like every other function
table); a Kleisli map ``k : m -> Vec n`` is an ``m × n`` matrix ``A i j``
(``i ∈ m``, ``j ∈ n``); the unit is the identity matrix and
``A* x j = Σ_i A i j × x i``.  Over Bool this is the powerset relative
monad with subsets encoded by characteristic functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from ..endo import Powerset, Plus, Identity, subset_index, subset_of_index
from ..fincat import FunctorData, fin_skeleton, inclusion
from ..finset import FinFn, FinSet, all_tables, encode_tables, fn_from_index, fn_index
from ..relmonad import (
    MonadData,
    MonadMorphism,
    RelMonadData,
    RelMonadMorphism,
    ShallowInstance,
)
from ..report import FAIL, Check, Report
from .semiring import BOOL, NAT, Semiring, SemiringMorphism


@dataclass(frozen=True)
class Matrix:
    """``rows × cols`` entries ``A i j`` in ``ring``; ``entries[i][j]``."""

    ring: Semiring
    rows: int
    cols: int
    entries: tuple[tuple[Any, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not have shape {self.rows}×{self.cols}")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def to_json(self) -> dict:
        return {"semiring": self.ring.name, "entries": [list(r) for r in self.entries]}


def identity_matrix(r: Semiring, m: int) -> Matrix:
    return Matrix(r, m, m, tuple(tuple(r.one if i == j else r.zero for j in range(m)) for i in range(m)))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Triple-loop product ``(A·B) i k = Σ_j A i j × B j k`` (the independent oracle)."""
    if a.cols != b.rows:
        raise ValueError("shape mismatch")
    r = a.ring
    out = []
    for i in range(a.rows):
        row = []
        for k in range(b.cols):
            acc = r.zero
            for j in range(a.cols):
                acc = r.add(acc, r.mul(a.entries[i][j], b.entries[j][k]))
            row.append(acc)
        out.append(tuple(row))
    return Matrix(r, a.rows, b.cols, tuple(out))


def act(a: Matrix, x: Sequence[Any]) -> tuple:
    """``A* x j = Σ_i A i j × x i``."""
    r = a.ring
    return tuple(r.sum(r.mul(a.entries[i][j], x[i]) for i in range(a.rows)) for j in range(a.cols))


# -- encodings between vectors / matrices and table indices ----------------------------


def vec_index(r: Semiring, x: Sequence[int]) -> int:
    return fn_index(list(x), r.size)


def vec_of_index(r: Semiring, idx: int, m: int) -> tuple[int, ...]:
    return fn_from_index(int(idx), m, r.size)


def matrix_of_kleisli(r: Semiring, k: FinFn, n: int) -> Matrix:
    """Row ``i`` of the matrix is the vector ``k(i)``."""
    return Matrix(r, k.dom.size, n, tuple(vec_of_index(r, v, n) for v in k.table))


def kleisli_of_matrix(a: Matrix) -> FinFn:
    r = a.ring
    return FinFn(FinSet(a.rows), FinSet(r.size**a.cols), tuple(vec_index(r, row) for row in a.entries))


# -- deep and shallow instances ----------------------------------------------------------------


def _star_tables(r: Semiring, m: int, n: int, k_table: Sequence[int]) -> tuple[int, ...]:
    """``k*`` on every vector of ``R^m`` at once."""
    size = r.size
    A = np.asarray([vec_of_index(r, v, n) for v in k_table], dtype=np.int64).reshape(m, n)
    X = all_tables(m, size)  # (size^m, m)
    add, mul = r.add_table(), r.mul_table()
    out = np.full((X.shape[0], n), r.zero, dtype=np.int64)
    for i in range(m):
        prod = mul[A[i][None, :], X[:, i][:, None]]  # A i j × x i
        out = add[out, prod]
    return tuple(encode_tables(out, size).tolist()) if n else (0,) * X.shape[0]


def vec_relmonad(r: Semiring, k: int = 2) -> RelMonadData:
    """Deep Vec over a finite semiring on ``fin_skeleton(k)``."""
    if not r.finite:
        raise ValueError("the deep form needs a finite semiring; use vec_shallow")
    base = fin_skeleton(k)
    J = inclusion(base)
    T = {m: FinSet(r.size**J.obj[m].size) for m in base.objects}
    unit = {}
    for m in base.objects:
        size = J.obj[m].size
        unit[m] = FinFn(J.obj[m], T[m], tuple(vec_index(r, [r.one if i == j else r.zero for j in range(size)]) for i in range(size)))

    def star(x, y, kfn):
        return FinFn(T[x], T[y], _star_tables(r, J.obj[x].size, J.obj[y].size, kfn.table))

    return RelMonadData(base, J, T, unit, star, name=f"vec[{r.name}]")


def vec_shallow(r: Semiring) -> ShallowInstance:
    """Vec over any semiring as callables: objects are dimensions, values are tuples."""

    def unit(m, i):
        return tuple(r.one if j == i else r.zero for j in range(m))

    def star(m, n, k):
        a = Matrix(r, m, n, tuple(tuple(v) for v in k))
        return lambda x: act(a, x)

    return ShallowInstance(lambda m: m, unit, star, name=f"vec[{r.name}]")


def vec_generator(r: Semiring, dims: Sequence[int], seed: int = 0, samples: int | None = None):
    """Exhaustive values/maps over a finite ``r``, or seeded samples over any ``r``."""
    from ..relmonad import Generator

    if r.finite and samples is None:
        vals = lambda m: [tuple(v) for v in itertools.product(r.elements(), repeat=m)]
        kl = lambda m, n: (tuple(row) for row in itertools.product(vals(n), repeat=m))
        return Generator(list(dims), vals, kl)
    rng = np.random.default_rng(seed)
    samples = samples or 10
    draw = (lambda: int(rng.integers(0, r.size))) if r.finite else (lambda: r.sample(rng))
    cache_v = {m: [tuple(draw() for _ in range(m)) for _ in range(samples)] for m in dims}
    cache_k = {(m, n): [tuple(tuple(draw() for _ in range(n)) for _ in range(m)) for _ in range(samples)] for m in dims for n in dims}
    return Generator(list(dims), lambda m: cache_v[m], lambda m, n: cache_k[(m, n)])


def kleisli_matmul_check(t: RelMonadData, r: Semiring, seed: int = 0, samples: int | None = None) -> Check:
    """Kleisli composition ``ℓ* ∘ k`` equals the triple-loop product ``A·B``."""
    chk = Check("vec/kleisli-matmul", "ℓ* ∘ k = A · B")
    rng = np.random.default_rng(seed)
    for x, y, z in itertools.product(t.base.objects, repeat=3):
        ny, nz = t.J.obj[y].size, t.J.obj[z].size
        ks = range(t.hom_count(x, y)) if samples is None else rng.integers(0, t.hom_count(x, y), size=samples)
        for ki in ks:
            k = t.k_fn(x, y, ki)
            ls = range(t.hom_count(y, z)) if samples is None else rng.integers(0, t.hom_count(y, z), size=4)
            for li in ls:
                l = t.k_fn(y, z, li)
                comp = tuple(t.star(y, z, l).table[v] for v in k.table)
                oracle = kleisli_of_matrix(matmul(matrix_of_kleisli(r, k, ny), matrix_of_kleisli(r, l, nz)))
                chk.count += 1
                if comp != oracle.table:
                    chk.fail(objects=[x, y, z], k=k.table, l=l.table, got=comp, oracle=oracle.table)
                    return chk
    return chk


def vec_morphism(src: RelMonadData, tgt: RelMonadData, h: SemiringMorphism) -> RelMonadMorphism:
    """Componentwise ``σ x = h ∘ x`` induced by a map of semirings."""
    comps = {}
    for m in src.base.objects:
        d = src.J.obj[m].size
        comps[m] = FinFn(
            src.T[m],
            tgt.T[m],
            tuple(vec_index(h.tgt, [h.fn(v) for v in vec_of_index(h.src, i, d)]) for i in range(src.T[m].size)),
        )
    return RelMonadMorphism(src, tgt, comps)


# ---------------------------------------------------------------- powerset / multiset


def powerset_relmonad(k: int = 2) -> RelMonadData:
    """``P♭ = Vec(Bool)`` on ``fin_skeleton(k)``."""
    t = vec_relmonad(BOOL, k)
    t.name = "powerset♭"
    return t


def multiset_shallow() -> ShallowInstance:
    """Multisets as ℕ-vectors with exact integers."""
    s = vec_shallow(NAT)
    s.name = "multiset"
    return s


def powerset_multiset(k: int = 2):
    """``(powerset deep, multiset shallow)``."""
    return powerset_relmonad(k), multiset_shallow()


def _ps_unit(n):
    return [subset_index({i}, n) for i in range(n)]


def _ps_mult(n):
    tn = 2**n
    chars = all_tables(tn, 2)
    subsets = all_tables(n, 2)
    # union of the chosen subsets
    out = (chars[:, :, None] * subsets[None, :, :]).max(axis=1) if tn else np.zeros((1, n), dtype=np.int64)
    return encode_tables(out, 2).tolist() if n else [0] * chars.shape[0]


POWERSET = MonadData(Powerset(), _ps_unit, _ps_mult, name="powerset")
MAYBE = MonadData(Plus(1), lambda n: list(range(n)), lambda n: list(range(n)) + [n, n], name="maybe")
IDENTITY = MonadData(Identity(), lambda n: list(range(n)), lambda n: list(range(n)), name="identity")


def maybe_to_powerset() -> MonadMorphism:
    """``just x ↦ {x}``, ``nothing ↦ ∅``."""

    def comp(n):
        return [subset_index({i}, n) for i in range(n)] + [subset_index(set(), n)]

    return MonadMorphism(MAYBE, POWERSET, comp)


# ---------------------------------------------------------------- modules ↔ EM algebras


@dataclass(frozen=True)
class Module:
    """A left ``R``-semimodule ``(M, 0⃗, ⊕, ·)`` on ``0..size-1``; ``act[r][m] = r · m``."""

    ring: Semiring
    size: int
    zero: int
    plus: tuple[tuple[int, ...], ...]
    act: tuple[tuple[int, ...], ...]


def check_module(mod: Module) -> Report:
    r = mod.ring
    rep = Report()
    comm = rep.new("module/commutative-monoid", "(M, 0⃗, ⊕) commutative monoid")
    dist = rep.new("module/action", "(r×s)·m = r·(s·m), 1·m = m, 0·m = 0⃗, r·0⃗ = 0⃗, distributivity")
    P, A = mod.plus, mod.act
    els = range(mod.size)
    for a, b, c in itertools.product(els, repeat=3):
        comm.count += 1
        if P[P[a][b]][c] != P[a][P[b][c]] or P[a][b] != P[b][a] or P[mod.zero][a] != a:
            comm.fail(a=a, b=b, c=c)
    for x, y in itertools.product(r.elements(), repeat=2):
        for m, n in itertools.product(els, repeat=2):
            dist.count += 1
            ok = (
                A[r.mul(x, y)][m] == A[x][A[y][m]]
                and A[r.one][m] == m
                and A[r.zero][m] == mod.zero
                and A[x][mod.zero] == mod.zero
                and A[x][P[m][n]] == P[A[x][m]][A[x][n]]
                and A[r.add(x, y)][m] == P[A[x][m]][A[y][m]]
            )
            if not ok:
                dist.fail(r=x, s=y, m=m, n=n)
    return rep


def join_semilattice(n: int) -> Module:
    """The chain ``0 < 1 < … < n-1`` with ``⊕ = max`` as a Bool-module."""
    plus = tuple(tuple(max(a, b) for b in range(n)) for a in range(n))
    act = (tuple(0 for _ in range(n)), tuple(range(n)))
    return Module(BOOL, n, 0, plus, act)


def vec_em_bridge(mod: Module, t: RelMonadData):
    """``χ_n f g = ⊕_i g i · f i``: an EM algebra of Vec over the module's carrier."""
    from ..kleisli_em import EMAlgebra
    from ..relmonad import Refused

    if not check_module(mod).ok:
        raise Refused("module", str(check_module(mod).failures[0].witness))
    r = mod.ring
    chi = {}
    for z in t.base.objects:
        d = t.J.obj[z].size
        F = all_tables(d, mod.size)
        G = all_tables(d, r.size)
        rows = np.empty((F.shape[0], G.shape[0]), dtype=np.int64)
        for fi, f in enumerate(F):
            for gi, g in enumerate(G):
                acc = mod.zero
                for i in range(d):
                    acc = mod.plus[acc][mod.act[g[i]][f[i]]]
                rows[fi, gi] = acc
        chi[z] = rows
    return EMAlgebra(t, mod.size, chi, f"module[{mod.size}]")


def module_of_algebra(a, ring: Semiring = BOOL) -> Module:
    """Recover ``0⃗ = χ_0 ! ()``, ``m ⊕ m' = χ_2 [m, m'] (1,1)``, ``r · m = χ_1 [m] (r)``."""
    t = a.t
    objs = {t.J.obj[z].size: z for z in t.base.objects}
    if not {0, 1, 2} <= set(objs):
        raise ValueError("recovery needs objects of size 0, 1, 2")
    size_r = t.T[objs[1]].size
    zero = int(a.chi[objs[0]][0][0])
    one = ring.one
    plus = tuple(
        tuple(int(a.chi[objs[2]][fn_index([m, m2], a.carrier)][fn_index([one, one], size_r)]) for m2 in range(a.carrier))
        for m in range(a.carrier)
    )
    act_ = tuple(tuple(int(a.chi[objs[1]][m][s]) for m in range(a.carrier)) for s in range(size_r))
    return Module(ring, a.carrier, zero, plus, act_)


def module_roundtrip(mod: Module, t: RelMonadData) -> Report:
    """module → algebra → module is the identity; the algebra passes EM laws; and algebra → module → algebra too."""
    from ..kleisli_em import em_check

    rep = Report()
    a = vec_em_bridge(mod, t)
    rep.extend(em_check(a), prefix=f"module[{mod.size}]")
    rt = rep.new(f"module[{mod.size}]/roundtrip", "recover(bridge(M)) = M and bridge(recover(χ)) = χ")
    back = module_of_algebra(a, mod.ring)
    rt.count += 1
    if (back.zero, back.plus, back.act) != (mod.zero, mod.plus, mod.act):
        rt.fail(zero=back.zero, plus=back.plus, act=back.act)
    again = vec_em_bridge(back, t)
    rt.count += 1
    if again.key() != a.key():
        rt.fail(direction="algebra→module→algebra")
    return rep


def bool_modules(max_size: int = 4) -> list[Module]:
    """All Bool-semimodules (= join-semilattices with bottom) as distinct tables on carriers ``1..max_size`` with bottom ``0``."""
    out = []
    for n in range(1, max_size + 1):
        seen = set()
        for plus_flat in _commutative_idempotent_monoids(n):
            key = plus_flat
            if key in seen:
                continue
            seen.add(key)
            act = (tuple(0 for _ in range(n)), tuple(range(n)))
            out.append(Module(BOOL, n, 0, plus_flat, act))
    return out


def _commutative_idempotent_monoids(n: int):
    """Join-semilattice tables on ``0..n-1`` with bottom ``0``, via partial orders with joins."""
    # enumerate partial orders with 0 as bottom, keep those with all binary joins
    pairs = [(a, b) for a in range(1, n) for b in range(1, n) if a != b]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        leq = {(a, a) for a in range(n)} | {(0, a) for a in range(n)}
        leq |= {p for p, bit in zip(pairs, bits) if bit}
        if any((a, b) in leq and (b, a) in leq and a != b for a in range(n) for b in range(n)):
            continue
        if any((a, b) in leq and (b, c) in leq and (a, c) not in leq for a in range(n) for b in range(n) for c in range(n)):
            continue
        table = []
        ok = True
        for a in range(n):
            row = []
            for b in range(n):
                ubs = [c for c in range(n) if (a, c) in leq and (b, c) in leq]
                least = [c for c in ubs if all((c, d) in leq for d in ubs)]
                if len(least) != 1:
                    ok = False
                    break
                row.append(least[0])
            if not ok:
                break
            table.append(tuple(row))
        if ok:
            yield tuple(table)

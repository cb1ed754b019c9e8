"""Endofunctors of FinSet given by formulas (the ambient category ℂ).

These are *shallow* functors: they act on any finite set, not just the
objects of a truncated index category.  Element encodings follow
:mod:`relmon.finset` conventions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fincat import FinCat, FunctorData, _frozen
from .finset import (
    FinFn,
    FinSet,
    all_tables,
    check_budget,
    encode_tables,
    fn_index,
    postcompose_table,
)


class SetEndo:
    """Base class: ``size(n)`` gives ``|F n|``, ``fmap_table`` acts on tables."""

    name = "F"

    def size(self, n: int) -> int:
        raise NotImplementedError

    def fmap_table(self, f: tuple[int, ...], cod: int) -> tuple[int, ...]:
        raise NotImplementedError

    def obj(self, n: int) -> FinSet:
        return FinSet(self.size(n))

    def fmap(self, f: FinFn) -> FinFn:
        return FinFn(self.obj(f.dom.size), self.obj(f.cod.size), self.fmap_table(f.table, f.cod.size))

    def after(self, F: FunctorData) -> FunctorData:
        """The composite ``self ∘ F`` as a functor on ``F.src``."""
        return endo_after(self, F)

    def __repr__(self) -> str:
        return self.name


@lru_cache(maxsize=4096)
def _post(f: tuple[int, ...], cod: int, dom: int) -> tuple[int, ...]:
    return tuple(postcompose_table(f, cod, dom).tolist())


class Identity(SetEndo):
    name = "Id"

    def size(self, n):
        return n

    def fmap_table(self, f, cod):
        return tuple(f)


@dataclass(frozen=True, repr=False)
class Const(SetEndo):
    k: int

    @property
    def name(self):
        return f"Const{self.k}"

    def size(self, n):
        return self.k

    def fmap_table(self, f, cod):
        return tuple(range(self.k))


@dataclass(frozen=True, repr=False)
class Times(SetEndo):
    """``X ↦ X × S`` with pairs ``(x, s)`` at ``x*|S| + s``."""

    s: int

    @property
    def name(self):
        return f"(-)×{self.s}"

    def size(self, n):
        return n * self.s

    def fmap_table(self, f, cod):
        return tuple(v * self.s + j for v in f for j in range(self.s))


@dataclass(frozen=True, repr=False)
class Plus(SetEndo):
    """``X ↦ X + E`` with ``inl`` first."""

    e: int

    @property
    def name(self):
        return f"(-)+{self.e}"

    def size(self, n):
        return n + self.e

    def fmap_table(self, f, cod):
        return tuple(f) + tuple(cod + j for j in range(self.e))


@dataclass(frozen=True, repr=False)
class Power(SetEndo):
    """``X ↦ X^S`` (functions ``S -> X`` in enumeration order)."""

    s: int

    @property
    def name(self):
        return f"(-)^{self.s}"

    def size(self, n):
        return n**self.s

    def fmap_table(self, f, cod):
        return _post(tuple(f), cod, self.s)


@dataclass(frozen=True, repr=False)
class Poly(SetEndo):
    """``X ↦ Σ_i c_i × X^{e_i}``; summand ``i`` copy ``c`` holds ``X^{e_i}``."""

    terms: tuple[tuple[int, int], ...]

    @property
    def name(self):
        return " + ".join(f"{c}·X^{e}" for c, e in self.terms) or "0"

    def size(self, n):
        return sum(c * n**e for c, e in self.terms)

    def fmap_table(self, f, cod):
        dom = len(f)
        out: list[int] = []
        off = 0
        for c, e in self.terms:
            block = _post(tuple(f), cod, e)
            width = cod**e
            for copy in range(c):
                out.extend(off + copy * width + v for v in block)
            off += c * width
        return tuple(out)


class Powerset(SetEndo):
    """Subsets encoded as characteristic functions ``X -> 2``."""

    name = "P"

    def size(self, n):
        return 2**n

    def fmap_table(self, f, cod):
        n = len(f)
        chars = all_tables(n, 2)
        out = np.zeros((chars.shape[0], cod), dtype=np.int64)
        for i, v in enumerate(f):
            out[:, v] |= chars[:, i]
        return tuple(encode_tables(out, 2).tolist())


def subset_index(elems, n: int) -> int:
    """Index of a subset of ``{0..n-1}`` in the powerset encoding."""
    s = set(elems)
    return fn_index([1 if i in s else 0 for i in range(n)], 2)


def subset_of_index(idx: int, n: int) -> frozenset[int]:
    from .finset import fn_from_index

    return frozenset(i for i, b in enumerate(fn_from_index(idx, n, 2)) if b)


@dataclass(frozen=True, repr=False)
class Compose(SetEndo):
    outer: SetEndo
    inner: SetEndo

    @property
    def name(self):
        return f"{self.outer.name}∘{self.inner.name}"

    def size(self, n):
        return self.outer.size(self.inner.size(n))

    def fmap_table(self, f, cod):
        inner = self.inner.fmap_table(f, cod)
        return self.outer.fmap_table(inner, self.inner.size(cod))


def endo_after(endo: SetEndo, F: FunctorData) -> FunctorData:
    """``endo ∘ F`` for a FinSet-valued functor ``F``."""
    c: FinCat = F.src
    obj = {x: FinSet(endo.size(F.obj[x].size)) for x in c.objects}
    total = sum(obj[x].size * c.homs[(x, y)] for x, y in c.pairs())
    check_budget(total, "endo_after")
    arr = {}
    for x, y in c.pairs():
        rows = [endo.fmap_table(tuple(r), F.obj[y].size) for r in F.arr[(x, y)].tolist()]
        arr[(x, y)] = _frozen(np.asarray(rows, dtype=np.int64).reshape(c.homs[(x, y)], obj[x].size))
    return FunctorData(c, obj, arr, None, f"{endo.name}∘{F.name}")

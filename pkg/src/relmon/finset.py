"""Canonical finite sets and tabulated functions.

Elements of a :class:`FinSet` of size ``n`` are the naturals ``0..n-1``.
A :class:`FinFn` is a total function stored as a table of codomain indices.

Indexing conventions (everything downstream depends on them):

* ``product(a, b)`` pairs ``(i, j)`` at index ``i * |b| + j``;
* ``coproduct(a, b)`` puts ``inl`` first, so ``inr j`` sits at ``|a| + j``;
* functions ``a -> b`` are ordered lexicographically by table, which is the
  numeric order of :func:`fn_index` (first argument is the most significant
  digit in base ``|b|``).
"""

from __future__ import annotations

import contextlib
import itertools
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

DEFAULT_BUDGET = 10**6


class CompositionError(ValueError):
    """Raised when two functions do not meet at a common object."""

    def __init__(self, g: "FinFn", f: "FinFn"):
        self.g_dom = g.dom.size
        self.f_cod = f.cod.size
        super().__init__(
            f"cannot compose: f ends in a set of size {f.cod.size}, "
            f"g starts in a set of size {g.dom.size}"
        )


class EnumerationOverflow(RuntimeError):
    """Raised when an enumeration would exceed the configured budget."""

    def __init__(self, count: int, budget: int, what: str = "enumeration"):
        self.count = count
        self.budget = budget
        shown = count if count.bit_length() <= 64 else f"~2^{count.bit_length() - 1}"
        super().__init__(f"{what} needs {shown} candidates, budget is {budget}")


_budget_override: list[int] = []


def get_budget() -> int:
    """The active enumeration budget (override > RELMON_BUDGET env > default)."""
    if _budget_override:
        return _budget_override[-1]
    env = os.environ.get("RELMON_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


@contextlib.contextmanager
def budget(n: int):
    """Temporarily set the enumeration budget."""
    _budget_override.append(int(n))
    try:
        yield
    finally:
        _budget_override.pop()


def check_budget(count: int, what: str = "enumeration") -> None:
    b = get_budget()
    if count > b:
        raise EnumerationOverflow(count, b, what)


@dataclass(frozen=True)
class FinSet:
    """The set {0, ..., size-1}; labels are for display only."""

    size: int
    labels: tuple[str, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("FinSet size must be non-negative")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ValueError("labels must have one entry per element")
            if len(set(self.labels)) != self.size:
                raise ValueError("labels must be pairwise distinct")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.size))

    def __len__(self) -> int:
        return self.size

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)


@dataclass(frozen=True)
class FinFn:
    """A total function ``dom -> cod`` given by its table."""

    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        t = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", t)
        if len(t) != self.dom.size:
            raise ValueError(f"table has {len(t)} entries, domain has {self.dom.size}")
        for v in t:
            if not 0 <= v < self.cod.size:
                raise ValueError(f"table entry {v} outside codomain of size {self.cod.size}")

    def __call__(self, i: int) -> int:
        return self.table[i]

    @property
    def index(self) -> int:
        """Position of this function in ``enumerate_fns(dom, cod)``."""
        return fn_index(self.table, self.cod.size)

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijective(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()


def fs(n: int) -> FinSet:
    return FinSet(n)


def fn(dom: int | FinSet, cod: int | FinSet, table: Sequence[int]) -> FinFn:
    """Shorthand constructor taking sizes or sets."""
    d = dom if isinstance(dom, FinSet) else FinSet(dom)
    c = cod if isinstance(cod, FinSet) else FinSet(cod)
    return FinFn(d, c, tuple(table))


def identity(a: FinSet | int) -> FinFn:
    a = a if isinstance(a, FinSet) else FinSet(a)
    return FinFn(a, a, tuple(range(a.size)))


def compose(g: FinFn, f: FinFn) -> FinFn:
    """``g ∘ f``; raises :class:`CompositionError` if ``f.cod != g.dom``."""
    if f.cod != g.dom:
        raise CompositionError(g, f)
    gt = g.table
    return FinFn(f.dom, g.cod, tuple(gt[i] for i in f.table))


def compose_all(*fs_: FinFn) -> FinFn:
    """``compose_all(h, g, f) = h ∘ g ∘ f``."""
    out = fs_[-1]
    for g in reversed(fs_[:-1]):
        out = compose(g, out)
    return out


def constant(dom: FinSet | int, cod: FinSet | int, value: int) -> FinFn:
    d = dom if isinstance(dom, FinSet) else FinSet(dom)
    c = cod if isinstance(cod, FinSet) else FinSet(cod)
    return FinFn(d, c, (value,) * d.size)


def fn_count(a: int, b: int) -> int:
    return b**a


def fn_index(table: Sequence[int], cod: int) -> int:
    """Lexicographic index of a table among all functions into ``cod``."""
    idx = 0
    for v in table:
        idx = idx * cod + int(v)
    return idx


def fn_from_index(idx: int, dom: int, cod: int) -> tuple[int, ...]:
    """Inverse of :func:`fn_index`."""
    out = [0] * dom
    for i in range(dom - 1, -1, -1):
        out[i] = idx % cod if cod else 0
        idx = idx // cod if cod else 0
    return tuple(out)


def enumerate_fns(a: FinSet | int, b: FinSet | int) -> Iterator[FinFn]:
    """All functions ``a -> b`` in lexicographic table order."""
    a = a if isinstance(a, FinSet) else FinSet(a)
    b = b if isinstance(b, FinSet) else FinSet(b)
    check_budget(b.size**a.size, "enumerate_fns")
    for t in itertools.product(range(b.size), repeat=a.size):
        yield FinFn(a, b, t)


def all_tables(dom: int, cod: int) -> np.ndarray:
    """Every function ``dom -> cod`` as rows of an int array, in index order."""
    n = cod**dom
    check_budget(n, "all_tables")
    if dom == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    out = np.empty((n, dom), dtype=np.int64)
    for i in range(dom - 1, -1, -1):
        out[:, i] = idx % cod
        idx //= cod
    return out


def encode_tables(tables: np.ndarray, cod: int) -> np.ndarray:
    """Vectorised :func:`fn_index` over the last axis."""
    tables = np.asarray(tables, dtype=np.int64)
    out = np.zeros(tables.shape[:-1], dtype=np.int64)
    for i in range(tables.shape[-1]):
        out = out * cod + tables[..., i]
    return out


def precompose_table(h: Sequence[int], dom: int, cod: int) -> np.ndarray:
    """Table of ``g ↦ g ∘ h`` from ``cod^dom`` to ``cod^len(h)`` (by index)."""
    tabs = all_tables(dom, cod)
    return encode_tables(tabs[:, list(h)] if len(h) else tabs[:, :0], cod)


def postcompose_table(f: Sequence[int], cod_f: int, dom: int) -> np.ndarray:
    """Table of ``g ↦ f ∘ g`` from ``len(f)^dom`` to ``cod_f^dom`` (by index)."""
    tabs = all_tables(dom, len(f))
    farr = np.asarray(f, dtype=np.int64)
    return encode_tables(farr[tabs] if dom else tabs, cod_f)


def product(a: FinSet, b: FinSet) -> tuple[FinSet, FinFn, FinFn]:
    """Row-major product with its projections."""
    check_budget(a.size * b.size, "product")
    p = FinSet(a.size * b.size)
    p1 = FinFn(p, a, tuple(i for i in range(a.size) for _ in range(b.size)))
    p2 = FinFn(p, b, tuple(j for _ in range(a.size) for j in range(b.size)))
    return p, p1, p2


def pair(f: FinFn, g: FinFn) -> FinFn:
    """``⟨f, g⟩ : X -> A × B``."""
    if f.dom != g.dom:
        raise CompositionError(g, f)
    p = FinSet(f.cod.size * g.cod.size)
    return FinFn(f.dom, p, tuple(f(i) * g.cod.size + g(i) for i in range(f.dom.size)))


def product_map(f: FinFn, g: FinFn) -> FinFn:
    """``f × g : A × B -> A' × B'``."""
    dom = FinSet(f.dom.size * g.dom.size)
    cod = FinSet(f.cod.size * g.cod.size)
    return FinFn(
        dom,
        cod,
        tuple(f(i) * g.cod.size + g(j) for i in range(f.dom.size) for j in range(g.dom.size)),
    )


def coproduct(a: FinSet, b: FinSet) -> tuple[FinSet, FinFn, FinFn]:
    """Coproduct with ``inl`` occupying the first ``|a|`` indices."""
    c = FinSet(a.size + b.size)
    inl = FinFn(a, c, tuple(range(a.size)))
    inr = FinFn(b, c, tuple(a.size + j for j in range(b.size)))
    return c, inl, inr


def coproduct_map(f: FinFn, g: FinFn) -> FinFn:
    """``f + g : A + B -> A' + B'``."""
    dom = FinSet(f.dom.size + g.dom.size)
    cod = FinSet(f.cod.size + g.cod.size)
    return FinFn(dom, cod, f.table + tuple(f.cod.size + v for v in g.table))


def copair(f: FinFn, g: FinFn) -> FinFn:
    """``[f, g] : A + B -> X``."""
    if f.cod != g.cod:
        raise CompositionError(g, f)
    return FinFn(FinSet(f.dom.size + g.dom.size), f.cod, f.table + g.table)


def exponential(a: FinSet, b: FinSet) -> tuple[FinSet, FinFn]:
    """``b^a`` (functions ``a -> b`` in enumeration order) with evaluation.

    ``eval`` is defined on ``product(b^a, a)``: the pair ``(f, x)`` at index
    ``f * |a| + x`` maps to ``f(x)``.
    """
    n = b.size**a.size
    check_budget(n * max(a.size, 1), "exponential")
    e = FinSet(n)
    tabs = all_tables(a.size, b.size)
    ev = FinFn(FinSet(n * a.size), b, tuple(tabs.reshape(-1).tolist()))
    return e, ev


def curry(h: FinFn, c: FinSet, a: FinSet) -> FinFn:
    """For ``h : c × a -> b`` return ``c -> b^a`` (matching :func:`exponential`)."""
    if h.dom.size != c.size * a.size:
        raise ValueError("curry: domain is not c × a")
    b = h.cod.size
    e = FinSet(b**a.size)
    return FinFn(
        c, e, tuple(fn_index(h.table[i * a.size:(i + 1) * a.size], b) for i in range(c.size))
    )


def uncurry(k: FinFn, a: FinSet, b: FinSet) -> FinFn:
    """For ``k : c -> b^a`` return ``c × a -> b``."""
    out = []
    for i in range(k.dom.size):
        out.extend(fn_from_index(k(i), a.size, b.size))
    return FinFn(FinSet(k.dom.size * a.size), b, tuple(out))


def image(f: FinFn) -> list[int]:
    """Sorted image of ``f``."""
    return sorted(set(f.table))


def inverse(f: FinFn) -> FinFn:
    """Inverse of a bijection."""
    if not f.is_bijective():
        raise ValueError("function is not a bijection")
    inv = [0] * f.cod.size
    for i, v in enumerate(f.table):
        inv[v] = i
    return FinFn(f.cod, f.dom, tuple(inv))

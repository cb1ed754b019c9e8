"""Semirings: finite tabulated ones (exhaustively checkable) and ℤ (sampled).

Elements of a finite semiring are ``0..size-1`` with ``zero``/``one`` given as
indices; ``labels`` name them for printing and JSON.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from ..report import FAIL, PASS, Report


@dataclass(frozen=True)
class Semiring:
    """``(R, 0, +, 1, ×)``.  ``size=None`` means an infinite carrier (Python ints)."""

    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    size: int | None = None
    labels: tuple[str, ...] | None = field(default=None, compare=False)
    sample: Callable[[np.random.Generator], Any] | None = field(default=None, compare=False)
    flags: tuple[str, ...] = ()

    @property
    def finite(self) -> bool:
        return self.size is not None

    def elements(self) -> range:
        if self.size is None:
            raise ValueError(f"{self.name} has an infinite carrier")
        return range(self.size)

    def sum(self, xs) -> Any:
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def label(self, v) -> str:
        return self.labels[v] if self.labels else str(v)

    def add_table(self) -> np.ndarray:
        return np.array([[self.add(a, b) for b in self.elements()] for a in self.elements()], dtype=np.int64)

    def mul_table(self) -> np.ndarray:
        return np.array([[self.mul(a, b) for b in self.elements()] for a in self.elements()], dtype=np.int64)


def finite_semiring(name, zero, one, add_table, mul_table, labels=None, flags=()) -> Semiring:
    add_t = tuple(tuple(r) for r in add_table)
    mul_t = tuple(tuple(r) for r in mul_table)
    return Semiring(
        name, zero, one, lambda a, b: add_t[a][b], lambda a, b: mul_t[a][b], len(add_t), labels, flags=flags
    )


BOOL = Semiring("bool", 0, 1, lambda a, b: a | b, lambda a, b: a & b, 2, ("⊥", "⊤"))

INT = Semiring(
    "int", 0, 1, lambda a, b: a + b, lambda a, b: a * b, None, sample=lambda rng: int(rng.integers(-5, 6))
)

NAT = Semiring(
    "nat", 0, 1, lambda a, b: a + b, lambda a, b: a * b, None, sample=lambda rng: int(rng.integers(0, 6))
)

Z4 = Semiring("z4", 0, 1, lambda a, b: (a + b) % 4, lambda a, b: (a * b) % 4, 4)

TROPICAL_TOP = 8  # element index of ∞; 0..7 are finite weights


def _trop_add(a, b):
    return min(a, b)


def _trop_mul(a, b):
    return TROPICAL_TOP if a == TROPICAL_TOP or b == TROPICAL_TOP else min(a + b, 7)


TROPICAL = Semiring(
    "tropical",
    TROPICAL_TOP,
    0,
    _trop_add,
    _trop_mul,
    9,
    tuple(str(i) for i in range(8)) + ("∞",),
    flags=("saturating at 7",),
)


def ncap(cap: int = 3) -> Semiring:
    """ℕ with addition and multiplication saturating at ``cap`` (flagged; excluded from law suites)."""
    return Semiring(
        f"ncap{cap}",
        0,
        1,
        lambda a, b: min(a + b, cap),
        lambda a, b: min(a * b, cap),
        cap + 1,
        flags=("saturating", "excluded from law suites"),
    )


def named(name: str) -> Semiring:
    table = {"bool": BOOL, "int": INT, "nat": NAT, "z4": Z4, "tropical": TROPICAL}
    if name.startswith("ncap"):
        return ncap(int(name[4:] or 3))
    try:
        return table[name]
    except KeyError:
        raise ValueError(f"unknown semiring {name!r}; known: {sorted(table)} and ncapN") from None


def _triples(r: Semiring, seed: int, samples: int):
    if r.finite:
        yield from itertools.product(r.elements(), repeat=3)
        return
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        yield r.sample(rng), r.sample(rng), r.sample(rng)


def check_semiring(r: Semiring, seed: int = 0, samples: int = 1000) -> Report:
    """Commutative monoid ``(0,+)``, monoid ``(1,×)``, both distributive laws, 0 annihilating."""
    rep = Report()
    checks = {
        k: rep.new(f"semiring/{k}", law)
        for k, law in (
            ("add-assoc", "(a+b)+c = a+(b+c)"),
            ("add-comm", "a+b = b+a"),
            ("add-unit", "0+a = a"),
            ("mul-assoc", "(a×b)×c = a×(b×c)"),
            ("mul-unit", "1×a = a = a×1"),
            ("distrib-left", "a×(b+c) = a×b + a×c"),
            ("distrib-right", "(a+b)×c = a×c + b×c"),
            ("annihilate", "0×a = 0 = a×0"),
        )
    }
    add, mul, z, o = r.add, r.mul, r.zero, r.one
    for a, b, c in _triples(r, seed, samples):
        w = {"a": a, "b": b, "c": c}
        tests = {
            "add-assoc": add(add(a, b), c) == add(a, add(b, c)),
            "add-comm": add(a, b) == add(b, a),
            "add-unit": add(z, a) == a and add(a, z) == a,
            "mul-assoc": mul(mul(a, b), c) == mul(a, mul(b, c)),
            "mul-unit": mul(o, a) == a and mul(a, o) == a,
            "distrib-left": mul(a, add(b, c)) == add(mul(a, b), mul(a, c)),
            "distrib-right": mul(add(a, b), c) == add(mul(a, c), mul(b, c)),
            "annihilate": mul(z, a) == z and mul(a, z) == z,
        }
        for k, ok in tests.items():
            checks[k].count += 1
            if not ok:
                checks[k].fail(**w)
    if not r.finite:
        for c in rep.checks:
            c.reason = f"sampled {samples} triples, seed {seed}"
    return rep


@dataclass(frozen=True)
class SemiringMorphism:
    src: Semiring
    tgt: Semiring
    fn: Callable[[Any], Any]
    name: str = ""


def check_semiring_morphism(h: SemiringMorphism) -> Report:
    """``h 0 = 0``, ``h 1 = 1``, ``h(a+b) = h a + h b``, ``h(a×b) = h a × h b`` on all pairs."""
    rep = Report()
    units = rep.new("semiring-morphism/units", "h 0 = 0', h 1 = 1'")
    add = rep.new("semiring-morphism/add", "h(a+b) = h a +' h b")
    mul = rep.new("semiring-morphism/mul", "h(a×b) = h a ×' h b")
    s, t, f = h.src, h.tgt, h.fn
    units.count = 2
    if f(s.zero) != t.zero or f(s.one) != t.one:
        units.fail(zero=f(s.zero), one=f(s.one))
    for a, b in itertools.product(s.elements(), repeat=2):
        add.count += 1
        mul.count += 1
        if f(s.add(a, b)) != t.add(f(a), f(b)):
            add.fail(a=a, b=b, left=f(s.add(a, b)), right=t.add(f(a), f(b)))
        if f(s.mul(a, b)) != t.mul(f(a), f(b)):
            mul.fail(a=a, b=b, left=f(s.mul(a, b)), right=t.mul(f(a), f(b)))
    return rep


def support(cap: int = 3) -> SemiringMorphism:
    """``ℕcap -> Bool``, ``n ↦ (n ≠ 0)``: a semiring morphism."""
    return SemiringMorphism(ncap(cap), BOOL, lambda n: int(n != 0), "support")


def bool_to_ncap(cap: int = 3) -> SemiringMorphism:
    """``Bool -> ℕcap``, ``b ↦ b``: *not* additive when ``cap ≥ 2`` (``⊤+⊤ = ⊤`` but ``1+1 = 2``)."""
    return SemiringMorphism(BOOL, ncap(cap), lambda b: int(b), "inclusion")

"""Well-scoped untyped λ-terms with de Bruijn indices as a relative monad.

``Lam n`` is the set of terms whose free variables are ``< n``.  The unit is
"variables as terms", and Kleisli extension is capture-avoiding simultaneous
substitution.  β-reduction is leftmost-outermost with explicit fuel.

Text syntax::

    term := '\\' term | app
    app  := atom+            (left associative)
    atom := <decimal index> | '(' term ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Abs:
    body: "Term"


Term = Union[Var, App, Abs]


class ScopeError(ValueError):
    def __init__(self, index: int, scope: int, occurrence: int = 0, position: int | None = None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"variable {index} is not bound in a scope of size {scope}{where}")
        self.index = index
        self.scope = scope
        self.occurrence = occurrence
        self.position = position


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def size(t: Term) -> int:
    match t:
        case Var():
            return 1
        case App(f, a):
            return 1 + size(f) + size(a)
        case Abs(b):
            return 1 + size(b)


def check_scope(t: Term, scope: int) -> None:
    """Raise :class:`ScopeError` naming the first unbound index.

    ``occurrence`` counts variables left to right, which is also their
    order in the text syntax.
    """
    seen = 0

    def go(t: Term, scope: int) -> None:
        nonlocal seen
        match t:
            case Var(i):
                if not 0 <= i < scope:
                    raise ScopeError(i, scope, seen)
                seen += 1
            case App(f, a):
                go(f, scope)
                go(a, scope)
            case Abs(b):
                go(b, scope + 1)

    go(t, scope)


def well_scoped(t: Term, scope: int) -> bool:
    try:
        check_scope(t, scope)
    except ScopeError:
        return False
    return True


@dataclass(frozen=True)
class Subst:
    """``table[i]`` is a term in scope ``tgt`` for each ``i < src``."""

    src: int
    tgt: int
    table: tuple[Term, ...]

    def __post_init__(self):
        if len(self.table) != self.src:
            raise ValueError(f"substitution needs {self.src} entries, got {len(self.table)}")
        for t in self.table:
            check_scope(t, self.tgt)


def identity_subst(n: int) -> Subst:
    return Subst(n, n, tuple(Var(i) for i in range(n)))


# ---------------------------------------------------------------- renaming and substitution


@lru_cache(maxsize=1 << 20)
def _rename(t: Term, f: tuple[int, ...]) -> Term:
    match t:
        case Var(i):
            return Var(f[i])
        case App(a, b):
            return App(_rename(a, f), _rename(b, f))
        case Abs(b):
            return Abs(_rename(b, (0,) + tuple(v + 1 for v in f)))


def shift(t: Term, scope: int) -> Term:
    """Weaken by one binder: ``Var i ↦ Var (i+1)``."""
    return _rename(t, tuple(range(1, scope + 1)))


@lru_cache(maxsize=1 << 20)
def _lift(s: tuple[Term, ...], tgt: int) -> tuple[Term, ...]:
    return (Var(0),) + tuple(shift(e, tgt) for e in s)


def _subst(t: Term, s: tuple[Term, ...], tgt: int) -> Term:
    if type(t) is Var:
        return s[t.index]
    if type(t) is App:
        return App(_subst(t.fun, s, tgt), _subst(t.arg, s, tgt))
    return Abs(_subst(t.body, (Var(0),) + tuple(shift(e, tgt) for e in s), tgt + 1))


def lift(s: Subst) -> Subst:
    """Extend with ``Var 0`` and shift the rest (substitution under a binder)."""
    return Subst(s.src + 1, s.tgt + 1, _lift(s.table, s.tgt))


def lam_subst(t: Term, s: Subst) -> Term:
    check_scope(t, s.src)
    return _subst(t, s.table, s.tgt)


def lam_rename(t: Term, f: Sequence[int], src: int, tgt: int) -> Term:
    """Rename along ``f : src -> tgt``."""
    if len(f) != src or any(not 0 <= v < tgt for v in f):
        raise ScopeError(next((v for v in f if not 0 <= v < tgt), len(f)), tgt)
    check_scope(t, src)
    return _rename(t, tuple(f))


# ---------------------------------------------------------------- relative monad


@dataclass
class LamRelMonad:
    """Shallow relative monad: objects are scopes, ``J n = n``."""

    name: str = "lam"
    lifting: str = "standard"

    def jsize(self, n: int) -> int:
        return n

    def unit(self, n: int, i: int) -> Term:
        return Var(i)

    def star(self, m: int, n: int, k: Sequence[Term]):
        table = tuple(k)
        if self.lifting == "standard":
            return lambda t: _subst(t, table, n)
        return lambda t: _subst_broken(t, table, n)


def lam_relmonad() -> LamRelMonad:
    return LamRelMonad()


def _subst_broken(t: Term, s: tuple[Term, ...], tgt: int) -> Term:
    """Substitution whose lifting forgets to shift (a deliberate defect for tests)."""
    match t:
        case Var(i):
            return s[i]
        case App(a, b):
            return App(_subst_broken(a, s, tgt), _subst_broken(b, s, tgt))
        case Abs(b):
            return Abs(_subst_broken(b, (Var(0),) + s, tgt + 1))


# ---------------------------------------------------------------- enumeration


@lru_cache(maxsize=None)
def terms_of_size(scope: int, n: int) -> tuple[Term, ...]:
    """All terms of exactly ``n`` nodes in ``scope`` (deterministic order)."""
    if n <= 0:
        return ()
    out: list[Term] = []
    if n == 1:
        out.extend(Var(i) for i in range(scope))
    out.extend(Abs(b) for b in terms_of_size(scope + 1, n - 1))
    for left in range(1, n - 1):
        for f in terms_of_size(scope, left):
            for a in terms_of_size(scope, n - 1 - left):
                out.append(App(f, a))
    return tuple(out)


def terms_up_to(scope: int, max_size: int) -> list[Term]:
    return [t for n in range(1, max_size + 1) for t in terms_of_size(scope, n)]


def substitutions(src: int, tgt: int, max_entry: int) -> Iterator[tuple[Term, ...]]:
    import itertools

    pool = terms_up_to(tgt, max_entry)
    return itertools.product(pool, repeat=src)


def lam_generator(max_scope: int = 2, max_term: int = 5, max_entry: int = 3):
    from ..relmonad import Generator

    return Generator(
        list(range(max_scope + 1)),
        lambda n: terms_up_to(n, max_term),
        lambda m, n: substitutions(m, n, max_entry),
    )


def identity_sweep(max_scope: int = 2, max_term: int = 7):
    """``t[id] = t`` for every term of size ≤ ``max_term`` in scopes ≤ ``max_scope``."""
    from ..report import Check

    chk = Check("lam/identity-substitution", "t[id] = t on all terms within the bounds")
    for n in range(max_scope + 1):
        ident = identity_subst(n)
        for t in terms_up_to(n, max_term):
            chk.count += 1
            if lam_subst(t, ident) != t:
                chk.fail(scope=n, term=show(t))
                return chk
    return chk


# ---------------------------------------------------------------- β-reduction


def _beta_contract(body: Term, arg: Term, scope: int) -> Term:
    return _subst(body, (arg,) + tuple(Var(i) for i in range(scope)), scope)


def beta_step(t: Term, scope: int) -> Term | None:
    """Contract the leftmost-outermost redex, or ``None`` for a normal form."""
    match t:
        case App(Abs(b), a):
            return _beta_contract(b, a, scope)
        case App(f, a):
            f2 = beta_step(f, scope)
            if f2 is not None:
                return App(f2, a)
            a2 = beta_step(a, scope)
            return None if a2 is None else App(f, a2)
        case Abs(b):
            b2 = beta_step(b, scope + 1)
            return None if b2 is None else Abs(b2)
        case Var():
            return None


def reducts(t: Term, scope: int) -> set[Term]:
    """Every one-step β-reduct (any redex position)."""
    out: set[Term] = set()
    match t:
        case App(f, a):
            if isinstance(f, Abs):
                out.add(_beta_contract(f.body, a, scope))
            out.update(App(f2, a) for f2 in reducts(f, scope))
            out.update(App(f, a2) for a2 in reducts(a, scope))
        case Abs(b):
            out.update(Abs(b2) for b2 in reducts(b, scope + 1))
    return out


@dataclass(frozen=True)
class Normalized:
    term: Term
    steps: int
    exhausted: bool


def normalize(t: Term, scope: int, fuel: int = 100) -> Normalized:
    """Iterate :func:`beta_step` until a normal form or ``fuel`` steps."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    check_scope(t, scope)
    steps = 0
    while True:
        nxt = beta_step(t, scope)
        if nxt is None:
            return Normalized(t, steps, False)
        if steps == fuel:
            return Normalized(t, steps, True)
        t = nxt
        steps += 1


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*(?:(\\)|(\d+)|(\()|(\)))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", len(text) - len(text[pos:].lstrip()))
        start = m.start(m.lastindex)
        kind = ("lam", "num", "lp", "rp")[m.lastindex - 1]
        out.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    return out


def parse(text: str, scope: int | None = None) -> Term:
    """Parse the text syntax; with ``scope`` also check well-scopedness."""
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ("eof", "", len(text))

    def term() -> Term:
        nonlocal i
        kind, _, _ = peek()
        if kind == "lam":
            i += 1
            return Abs(term())
        return app()

    def app() -> Term:
        nonlocal i
        t = atom()
        while peek()[0] in ("num", "lp", "lam"):
            if peek()[0] == "lam":
                # a trailing abstraction extends as far right as possible
                t = App(t, term())
                break
            t = App(t, atom())
        return t

    def atom() -> Term:
        nonlocal i
        kind, val, pos = peek()
        if kind == "num":
            i += 1
            return Var(int(val))
        if kind == "lp":
            i += 1
            t = term()
            k2, _, p2 = peek()
            if k2 != "rp":
                raise ParseError("expected ')'", p2)
            i += 1
            return t
        raise ParseError("expected a term" if kind == "eof" else f"unexpected {val!r}", pos)

    t = term()
    if i != len(toks):
        raise ParseError(f"unexpected {toks[i][1]!r}", toks[i][2])
    if scope is not None:
        try:
            check_scope(t, scope)
        except ScopeError as e:
            var_pos = [pos for kind, _, pos in toks if kind == "num"]
            raise ScopeError(e.index, e.scope, e.occurrence, var_pos[e.occurrence]) from None
    return t


def show(t: Term) -> str:
    """Print in the text syntax with minimal parentheses; ``parse(show(t)) == t``."""
    match t:
        case Var(i):
            return str(i)
        case Abs(b):
            return "\\ " + show(b)
        case App(f, a):
            left = f"({show(f)})" if isinstance(f, Abs) else show(f)
            right = show(a) if isinstance(a, Var) else f"({show(a)})"
            return f"{left} {right}"

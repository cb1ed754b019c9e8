import itertools

import pytest
from hypothesis import given, strategies as st

from relmon.finset import (
    CompositionError,
    EnumerationOverflow,
    FinFn,
    FinSet,
    budget,
    check_budget,
    compose,
    curry,
    enumerate_fns,
    exponential,
    fn,
    fn_from_index,
    fn_index,
    identity,
    inverse,
    uncurry,
)


@st.composite
def functions(draw, dom=None, cod=None):
    a = draw(st.integers(0, 4)) if dom is None else dom
    b = draw(st.integers(1 if a else 0, 4)) if cod is None else cod
    return fn(a, b, draw(st.lists(st.integers(0, max(b - 1, 0)), min_size=a, max_size=a)))


@st.composite
def composable(draw):
    a, b, c, d = (draw(st.integers(1, 4)) for _ in range(4))
    return draw(functions(a, b)), draw(functions(b, c)), draw(functions(c, d))


def test_table_is_validated():
    with pytest.raises(ValueError):
        fn(2, 2, [0, 2])
    with pytest.raises(ValueError):
        fn(2, 2, [0])


@given(composable())
def test_composition_is_associative_and_unital(fgh):
    f, g, h = fgh
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(identity(f.cod), f) == f == compose(f, identity(f.dom))


@given(composable())
def test_composition_matches_pointwise_application(fgh):
    f, g, _ = fgh
    assert compose(g, f).table == tuple(g(f(i)) for i in range(f.dom.size))


def test_mismatched_composition_raises():
    with pytest.raises(CompositionError):
        compose(fn(2, 2, [0, 1]), fn(1, 3, [0]))


@given(st.integers(0, 3), st.integers(0, 3))
def test_enumeration_order_matches_index(a, b):
    fns = list(enumerate_fns(a, b))
    assert len(fns) == b**a
    assert [f.index for f in fns] == list(range(b**a))
    # lexicographic, first argument most significant
    assert [f.table for f in fns] == list(itertools.product(range(b), repeat=a))


@given(functions())
def test_index_roundtrip(f):
    assert fn_from_index(fn_index(f.table, f.cod.size), f.dom.size, f.cod.size) == f.table


@given(st.integers(0, 3), st.integers(1, 3), st.integers(1, 3), st.data())
def test_curry_uncurry_are_inverse(c, a, b, data):
    h = data.draw(functions(c * a, b))
    k = curry(h, FinSet(c), FinSet(a))
    assert uncurry(k, FinSet(a), FinSet(b)) == h


def test_exponential_evaluation():
    e, ev = exponential(FinSet(2), FinSet(3))
    assert e.size == 9
    for f in range(9):
        tab = fn_from_index(f, 2, 3)
        assert [ev(f * 2 + x) for x in range(2)] == list(tab)


def test_inverse_of_bijection():
    f = fn(3, 3, [2, 0, 1])
    assert compose(inverse(f), f) == identity(3)
    with pytest.raises(ValueError):
        inverse(fn(2, 2, [0, 0]))


def test_budget_override():
    with budget(10):
        with pytest.raises(EnumerationOverflow):
            check_budget(11)
        check_budget(10)

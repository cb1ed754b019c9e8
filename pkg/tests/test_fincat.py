import numpy as np

from relmon.fincat import (
    check_category,
    check_functor,
    check_nat,
    fin_skeleton,
    functor,
    functor_category_homs,
    hom_functor,
    identity_nat,
    inclusion,
    monoid_category,
    op_category,
    poset_category,
    subuniverse,
)


def test_fin_skeleton_hom_sizes():
    c = fin_skeleton(2)
    assert c.objects == (0, 1, 2)
    for m in c.objects:
        for n in c.objects:
            assert c.homs[(m, n)] == n**m


def test_subuniverse_and_op_are_categories():
    for c in (fin_skeleton(2), subuniverse((0, 2, 3)), op_category(fin_skeleton(2))):
        assert check_category(c).ok


def test_broken_composition_is_refuted():
    # the two-element monoid with a non-associative table: a·a = e but with e not a unit
    c = monoid_category([[1, 0], [0, 0]], unit=0)
    assert not check_category(c).ok


def test_poset_category():
    c = poset_category(("a", "b", "c"), {("a", "b"), ("b", "c")})
    assert check_category(c).ok
    assert c.homs[("a", "c")] == 1 and c.homs[("c", "a")] == 0


def test_inclusion_and_hom_functors():
    c = fin_skeleton(2)
    assert check_functor(inclusion(c)).ok
    assert check_functor(hom_functor(c, 1)).ok


def test_bad_functor_table_is_refuted():
    c = fin_skeleton(1)
    tables = {pair: inclusion(c).arr[pair] for pair in c.pairs()}
    tables[(1, 1)] = np.array([[0]])
    F = functor(c, {0: 0, 1: 2}, {**tables, (1, 1): np.array([[1, 0]]), (0, 1): np.zeros((1, 0))})
    assert not check_functor(F).ok


def test_natural_transformations_of_inclusion():
    # End(Id) on fin_skeleton(2): only the identity is natural
    J = inclusion(fin_skeleton(2))
    nats = list(functor_category_homs(J, J))
    assert len(nats) == 1
    assert check_nat(identity_nat(J)).ok

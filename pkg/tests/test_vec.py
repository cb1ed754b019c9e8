import pytest

from relmon.instances.semiring import BOOL, INT, TROPICAL, Z4, ncap, support
from relmon.instances.vec import (
    Matrix,
    bool_modules,
    check_module,
    identity_matrix,
    join_semilattice,
    kleisli_matmul_check,
    kleisli_of_matrix,
    matmul,
    matrix_of_kleisli,
    module_roundtrip,
    powerset_multiset,
    powerset_relmonad,
    vec_generator,
    vec_morphism,
    vec_relmonad,
    vec_shallow,
)
from relmon.relmonad import check_functor_action, check_morphism, check_relmonad_laws, shallow_laws
from relmon.report import PASS


def test_vec_bool_exhaustive():
    t = vec_relmonad(BOOL, 2)
    assert check_relmonad_laws(t).ok
    assert check_functor_action(t).ok
    assert kleisli_matmul_check(t, BOOL).status == PASS


@pytest.mark.parametrize("r", [Z4, TROPICAL])
def test_vec_sampled(r):
    t = vec_relmonad(r, 2)
    assert check_relmonad_laws(t, mode="sampled", seed=1, samples=200).ok
    assert kleisli_matmul_check(t, r, seed=1, samples=8).status == PASS


def test_matmul_identity_and_associativity():
    a = Matrix(INT, 2, 3, ((1, 2, 0), (0, -1, 4)))
    b = Matrix(INT, 3, 2, ((1, 0), (2, 1), (0, 3)))
    c = Matrix(INT, 2, 2, ((5, 1), (1, 1)))
    assert matmul(identity_matrix(INT, 2), a) == a
    assert matmul(matmul(a, b), c) == matmul(a, matmul(b, c))


def test_matrix_kleisli_roundtrip():
    t = vec_relmonad(BOOL, 2)
    for i in range(t.hom_count(2, 2)):
        k = t.k_fn(2, 2, i)
        assert kleisli_of_matrix(matrix_of_kleisli(BOOL, k, 2)) == k


def test_shallow_int():
    assert shallow_laws(vec_shallow(INT), vec_generator(INT, [0, 1, 2, 3], seed=2, samples=6)).ok


def test_support_induces_a_morphism():
    src, tgt = vec_relmonad(ncap(3), 1), vec_relmonad(BOOL, 1)
    assert check_morphism(vec_morphism(src, tgt, support())).ok


def test_powerset_is_vec_bool():
    p, ms = powerset_multiset(2)
    v = vec_relmonad(BOOL, 2)
    for x, y in v.base.pairs():
        assert (p.star_table(x, y) == v.star_table(x, y)).all()
    assert ms.star(2, 2, [(2, 0), (1, 1)])((1, 3)) == (1 * 2 + 3 * 1, 1 * 0 + 3 * 1)


def test_modules():
    mods = bool_modules(4)
    assert len(mods) == 1 + 1 + 2 + 9
    assert all(check_module(m).ok for m in mods)
    v = vec_relmonad(BOOL, 2)
    for m in mods[:4]:
        assert module_roundtrip(m, v).ok
    assert check_module(join_semilattice(3)).ok


def test_powerset_relmonad_name():
    assert powerset_relmonad(2).name == "powerset♭"

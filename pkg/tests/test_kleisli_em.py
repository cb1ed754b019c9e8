import numpy as np

from relmon.fincat import check_category, check_functor, fin_skeleton, inclusion
from relmon.instances.semiring import BOOL
from relmon.instances.vec import MAYBE, POWERSET, vec_relmonad
from relmon.kleisli_em import (
    EMAlgebra,
    check_splitting,
    comparison_flat,
    comparison_sharp,
    em_alt_roundtrip,
    em_check,
    em_homs,
    em_splitting,
    enumerate_em_structures,
    enumerate_natural_structures,
    free_algebra,
    kleisli_L,
    kleisli_R,
    kleisli_adjunction_check,
    kleisli_build,
    kleisli_splitting,
    monad_algebras,
    splitting_morphisms,
)
from relmon.relmonad import restrict

J2 = inclusion(fin_skeleton(2))
V = vec_relmonad(BOOL, 2)


def test_kleisli_category_laws_and_functors():
    for t in (V, restrict(MAYBE, J2)):
        kl = kleisli_build(t)
        assert check_category(kl).ok
        assert check_functor(kleisli_L(t, kl)).ok
        assert check_functor(kleisli_R(t, kl)).ok
        assert kleisli_adjunction_check(t, kl).ok


def test_kleisli_hom_sizes():
    kl = kleisli_build(restrict(MAYBE, J2))
    for x, y in kl.pairs():
        assert kl.homs[(x, y)] == (y + 1) ** x


def test_free_algebras_pass():
    for x in V.base.objects:
        assert em_check(free_algebra(V, x)).ok


def test_broken_algebra_is_refuted():
    a = free_algebra(V, 1)
    chi = {z: np.zeros_like(np.asarray(a.chi[z])) for z in a.chi}
    assert not em_check(EMAlgebra(V, a.carrier, chi)).ok


def test_em_structures_on_small_carriers():
    # Vec(Bool)-algebras on n elements = join-semilattices with bottom labelled as tables
    assert len(enumerate_em_structures(V, 1)) == 1
    assert len(enumerate_em_structures(V, 2)) == 2


def test_alt_presentation_roundtrip():
    for n in (1, 2):
        assert em_alt_roundtrip(V, enumerate_natural_structures(V, n)).ok


def test_splittings():
    for s in (kleisli_splitting(V), em_splitting(V)):
        assert check_splitting(s).ok
        assert splitting_morphisms(V, s)["report"].ok


def test_em_homs_identity_present():
    a = free_algebra(V, 1)
    assert tuple(range(a.carrier)) in em_homs(a, a)


def test_comparisons():
    assert comparison_flat(POWERSET, J2)["report"].ok
    assert comparison_sharp(restrict(MAYBE, J2))["report"].ok


def test_monad_algebras_of_maybe():
    # maybe-algebras on n: a choice of the image of the extra point
    assert [len(monad_algebras(MAYBE, n)) for n in (1, 2, 3)] == [1, 2, 3]

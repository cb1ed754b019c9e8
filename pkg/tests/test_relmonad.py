from math import comb

import pytest

from relmon.fincat import fin_skeleton, inclusion
from relmon.finset import FinFn
from relmon.instances.semiring import BOOL
from relmon.instances.vec import IDENTITY, MAYBE, POWERSET, maybe_to_powerset, powerset_relmonad, vec_relmonad
from relmon.relmonad import (
    RelMonadData,
    RelMonadMorphism,
    check_functor_action,
    check_monad_laws,
    check_monad_morphism,
    check_morphism,
    check_relmonad_laws,
    coreflection_check,
    counit_bijective,
    extend,
    identity_morphism,
    mu_flat_check,
    mu_roundtrip_check,
    reflect,
    reify,
    restrict,
    restrict_morphism,
    shallow_laws,
    Generator,
    skew_monoid_laws,
    trivial_relmonad,
)
from relmon.report import FAIL, OUT_OF_UNIVERSE, PASS

J2 = inclusion(fin_skeleton(2))


@pytest.mark.parametrize("m", [POWERSET, MAYBE, IDENTITY])
def test_restrictions_are_relative_monads(m):
    t = restrict(m, J2)
    assert check_relmonad_laws(t).ok
    assert check_functor_action(t).ok
    assert mu_roundtrip_check(t).ok
    assert skew_monoid_laws(t).ok
    assert mu_flat_check(m, J2).ok


def test_ordinary_monads():
    for m in (POWERSET, MAYBE, IDENTITY):
        assert check_monad_laws(m, [0, 1, 2]).ok
    assert check_monad_morphism(maybe_to_powerset(), [0, 1, 2]).ok


def test_trivial_relative_monad():
    assert check_relmonad_laws(trivial_relmonad(J2)).ok


def test_sampled_mode_agrees():
    t = vec_relmonad(BOOL, 2)
    rep = check_relmonad_laws(t, mode="sampled", seed=3, samples=50)
    assert rep.ok and rep.get("associativity").count == 50


def constant_star(t: RelMonadData) -> RelMonadData:
    """Break the extension: every k* sends everything to the first element it can."""

    def star(x, y, k):
        good = t.star(x, y, k)
        return FinFn(good.dom, good.cod, tuple(good.table[0] for _ in good.table)) if good.dom.size else good

    return RelMonadData(t.base, t.J, t.T, t.unit, star, name="broken")


def test_broken_extension_is_refuted():
    rep = check_relmonad_laws(constant_star(restrict(POWERSET, J2)))
    assert rep.get("left-unit").status == FAIL
    assert rep.get("left-unit").witness is not None


def test_morphisms():
    src, tgt = restrict(MAYBE, J2), restrict(POWERSET, J2)
    assert check_morphism(identity_morphism(src)).ok
    assert check_morphism(restrict_morphism(maybe_to_powerset(), J2, src, tgt)).ok
    # the constant map into the empty set is not a morphism
    bad = RelMonadMorphism(src, tgt, {x: FinFn(src.T[x], tgt.T[x], (0,) * src.T[x].size) for x in src.base.objects})
    assert check_morphism(bad).get("unit").status == FAIL


@pytest.mark.parametrize("k", [2, 3])
def test_extension_counts_small_subsets(k):
    e = extend(powerset_relmonad(k))
    assert [e.size(n) for n in range(4)] == [sum(comb(n, i) for i in range(min(k, n) + 1)) for n in range(4)]


def test_extension_laws_and_boundary():
    rep = check_monad_laws(extend(powerset_relmonad(2)), [0, 1, 2])
    assert not rep.failures
    assert rep.get("associativity/n=1").status == PASS
    assert rep.get("associativity/n=2").status == OUT_OF_UNIVERSE


def test_coreflection():
    t = restrict(POWERSET, J2)
    assert coreflection_check(t, POWERSET, J2, sizes=[0, 1, 2]).ok
    assert [counit_bijective(POWERSET, J2, n) for n in range(4)] == [True, True, True, False]


def test_shallow_reflect_reify_roundtrip():
    t = restrict(MAYBE, J2)
    s = reflect(t)
    gen = Generator(
        list(t.base.objects),
        lambda x: range(t.T[x].size),
        lambda x, y: (t.k_fn(x, y, i).table for i in range(t.hom_count(x, y))),
    )
    assert shallow_laws(s, gen).ok
    back = reify(s, t.J, {x: list(range(t.T[x].size)) for x in t.base.objects})
    for x, y in t.base.pairs():
        assert (back.star_table(x, y) == t.star_table(x, y)).all()

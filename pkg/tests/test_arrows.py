import pytest

from relmon import arrows as ar
from relmon.fincat import check_category, fin_skeleton
from relmon.report import FAIL

B1, B2 = fin_skeleton(1), fin_skeleton(2)


@pytest.mark.parametrize("make", [ar.function_arrow, ar.maybe_arrow, ar.powerset_arrow, lambda b: ar.state_arrow(2, b)])
def test_arrow_laws(make):
    for base in (B1, B2):
        assert ar.check_arrow_laws(make(base)).ok


def test_broken_arrow_is_refuted():
    rep = ar.check_arrow_laws(ar.broken_arrow(ar.state_arrow(2, B2), 2))
    assert rep.failures


@pytest.mark.parametrize("make", [ar.function_arrow, ar.maybe_arrow, ar.powerset_arrow, lambda b: ar.state_arrow(2, b)])
def test_roundtrips_and_freyd(make):
    a = make(B1)
    t = ar.arrow_to_relmon(a)
    assert ar.check_presheaf_relmonad(t).ok
    assert ar.roundtrip_check(a, t).ok
    assert ar.freyd_is_kleisli_check(a).ok
    assert check_category(ar.freyd_category(a)).ok


def test_relmon_to_arrow_from_trivial():
    t = ar.trivial_presheaf_relmonad(B1)
    assert ar.check_presheaf_relmonad(t).ok
    assert ar.roundtrip_check(None, t).ok
    a = ar.relmon_to_arrow(t)
    assert ar.check_arrow_laws(a).ok
    # the trivial relative monad corresponds to the hom arrow
    for x, y in B1.pairs():
        assert a.R[(x, y)] == B1.homs[(x, y)]


def test_morphism_transport():
    m = ar.maybe_to_powerset_arrow(B1)
    assert ar.check_arrow_morphism(m).ok
    assert ar.transport_roundtrip(m).ok
    assert ar.transport_roundtrip(ar.identity_arrow_morphism(ar.maybe_arrow(B1))).ok
    bad = ar.broken_arrow_morphism(m, (1, 1), 0)
    assert ar.check_arrow_morphism(bad).get("pure").status == FAIL


def test_presheaf_enumeration():
    # presheaves on fin_skeleton(1) with values of size ≤ 2
    assert len(ar.enumerate_presheaves(B1, 2)) == 11


@pytest.mark.parametrize("c", [B1, ar.two_object_poset()])
def test_yoneda_well_behaved(c):
    rep = ar.yoneda_wellbehaved_check(c)
    assert rep.ok
    assert all(chk.count > 0 for chk in rep.checks)

from relmon.instances.state import (
    cont_kleisli_iso,
    cont_monad,
    cont_relmonad,
    state_em_bijection,
    state_em_census,
    state_kleisli_iso,
    state_monad,
    state_relmonad,
)
from relmon.kleisli_em import kleisli_adjunction_check, kleisli_build
from relmon.relmonad import check_functor_action, check_monad_laws, check_relmonad_laws
from relmon.report import FAIL


def test_state_relative_monad():
    t = state_relmonad(2)
    assert check_relmonad_laws(t).ok
    assert check_functor_action(t).ok
    assert [t.T[x].size for x in t.base.objects] == [0, 2, 4]


def test_state_monad_and_kleisli_iso():
    rep = check_monad_laws(state_monad(2), [0, 1, 2])
    assert not rep.failures
    assert state_monad(2).size(2) == (2 * 2) ** 2
    assert state_kleisli_iso(2)["report"].ok


def test_kleisli_hom_sizes_match_curried_form():
    t = state_relmonad(2)
    kl = kleisli_build(t)
    for x, y in kl.pairs():
        # (Y×S)^(X×S) = ((Y×S)^S)^X
        assert kl.homs[(x, y)] == ((y * 2) ** 2) ** x


def test_continuation():
    t = cont_relmonad(2)
    assert check_relmonad_laws(t).ok
    assert kleisli_adjunction_check(t).ok
    assert cont_kleisli_iso(2)["report"].ok
    rep = check_monad_laws(cont_monad(2), [0, 1])
    assert not [c for c in rep.checks if c.status == FAIL]


def test_state_em_census_small():
    res = state_em_census(2, 1)
    assert (res["natural"], res["lawful"]) == (1, 1)


def test_state_em_bijection():
    res = state_em_bijection(2, 2)
    assert res["report"].ok
    # every map X^S × S -> X arises, but only evaluation x(g, σ) = g σ is lawful
    assert res["natural"] == res["maps"] == 2 ** (2**2 * 2)
    assert res["lawful"] == 1
    (a,) = state_em_census(2, 2)["algebras"]
    one = next(z for z in a.t.base.objects if a.t.base.sizes[z] == 1)
    x = [int(a.chi[one][g][s]) for g in range(4) for s in range(2)]
    assert x == [(g >> (1 - s)) & 1 for g in range(4) for s in range(2)]

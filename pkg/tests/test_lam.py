import pytest
from hypothesis import given, strategies as st

from relmon.instances.lam import (
    Abs,
    App,
    LamRelMonad,
    ParseError,
    ScopeError,
    Subst,
    Var,
    identity_subst,
    lam_generator,
    lam_relmonad,
    lam_rename,
    lam_subst,
    normalize,
    parse,
    reducts,
    shift,
    show,
    size,
    terms_of_size,
    terms_up_to,
    well_scoped,
)
from relmon.relmonad import shallow_laws


def terms(scope: int, max_size: int = 6):
    pool = terms_up_to(scope, max_size)
    return st.sampled_from(pool)


def test_term_counts():
    # scope 0 has no terms of size 1; λ0 is the only closed term of size 2
    assert len(terms_of_size(0, 1)) == 0
    assert terms_of_size(0, 2) == (Abs(Var(0)),)
    assert len(terms_of_size(1, 1)) == 1
    # applications of two variables, plus λ (λ i) with i in scope 4
    assert len(terms_of_size(2, 3)) == 2 * 2 + 4


@given(terms(2))
def test_parse_show_roundtrip(t):
    assert parse(show(t), 2) == t


@given(terms(2))
def test_identity_substitution(t):
    assert lam_subst(t, identity_subst(2)) == t


@given(terms(1, 5), st.data())
def test_substitution_associative(t, data):
    s1 = Subst(1, 2, (data.draw(terms(2, 3)),))
    s2 = Subst(2, 1, (data.draw(terms(1, 3)), data.draw(terms(1, 3))))
    composed = Subst(1, 1, tuple(lam_subst(e, s2) for e in s1.table))
    assert lam_subst(lam_subst(t, s1), s2) == lam_subst(t, composed)


def test_shift_and_rename():
    assert shift(parse(r"\ 0 1"), 1) == parse(r"\ 0 2")
    assert lam_rename(parse("0 1"), (1, 0), 2, 2) == parse("1 0")


def test_examples():
    assert show(normalize(parse(r"(\ 0) 0", 1), 1).term) == "0"
    got = lam_subst(parse("0 1"), Subst(2, 1, (parse(r"\ 0"), parse("0"))))
    assert show(got) == r"(\ 0) 0"


def test_divergence_exhausts_fuel():
    res = normalize(parse(r"(\ 0 0) (\ 0 0)", 0), 0, 10)
    assert res.exhausted and res.steps == 10


def test_reducts_and_normal_forms():
    t = parse(r"(\ 0) ((\ 0) 0)", 1)
    assert len(reducts(t, 1)) == 1  # both redexes contract to the same term
    assert normalize(t, 1).term == Var(0)


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse("0 (1")
    assert e.value.position == 4
    with pytest.raises(ScopeError) as e:
        parse(r"0 (\ 3)", 2)
    assert e.value.position == 5
    assert not well_scoped(App(Var(0), Var(1)), 1)


def test_size():
    assert size(parse(r"\ 0 0")) == 4


def test_laws_small_bounds():
    rep = shallow_laws(lam_relmonad(), lam_generator(1, 4, 2))
    assert rep.ok


def test_unshifted_substitution_is_refuted():
    rep = shallow_laws(LamRelMonad(lifting="broken"), lam_generator(2, 4, 2))
    assert rep.failures

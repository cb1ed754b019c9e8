import pytest

from relmon.instances.semiring import (
    BOOL,
    INT,
    NAT,
    TROPICAL,
    TROPICAL_TOP,
    Z4,
    bool_to_ncap,
    check_semiring,
    check_semiring_morphism,
    finite_semiring,
    named,
    ncap,
    support,
)


@pytest.mark.parametrize("r", [BOOL, Z4, TROPICAL, INT, NAT, ncap(3)])
def test_semiring_axioms(r):
    assert check_semiring(r, seed=0, samples=200).ok


def test_tropical_saturates():
    assert TROPICAL.add(3, 5) == 3
    assert TROPICAL.mul(4, 5) == 7
    assert TROPICAL.mul(2, TROPICAL_TOP) == TROPICAL_TOP


def test_broken_semiring_is_refuted():
    # max/plus mod 3 does not distribute
    r = finite_semiring(
        "bad", 0, 1,
        [[max(a, b) for b in range(3)] for a in range(3)],
        [[(a + b) % 3 for b in range(3)] for a in range(3)],
    )
    assert not check_semiring(r).ok


def test_morphism_directions():
    assert check_semiring_morphism(support()).ok
    rep = check_semiring_morphism(bool_to_ncap())
    assert rep.failures and rep.failures[0].witness is not None


def test_named_lookup():
    assert named("bool") is BOOL
    assert named("ncap4").size == 5
    with pytest.raises(ValueError):
        named("nope")

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszprod.errors import FrequencyOverflow, NotDissociate, RatioViolation, TooLarge
from rieszprod.lacunary import LacunarySeq, dissociation_check, eps_sum, find_collision, lift_frequency, make_sequence


def test_geometric_sequence():
    seq = make_sequence(base=2, ratio=3, length=4)
    assert seq.modes == (2, 6, 18, 54)
    assert seq.ratio_floor == 3
    assert seq.degree(3) == 26


def test_fractional_ratio_uses_ceiling_steps():
    seq = make_sequence(ratio=Fraction(5, 2), length=3)
    assert seq.modes == (1, 3, 9)
    assert seq.ratio_floor == 3


def test_custom_sequence_floor_is_exact_minimum():
    seq = make_sequence(ratio=2, custom=[1, 3, 7, 50])
    assert seq.ratio_floor == Fraction(7, 3)


def test_ratio_violation():
    with pytest.raises(RatioViolation):
        make_sequence(ratio=3, custom=[1, 3, 8])
    with pytest.raises(RatioViolation):
        LacunarySeq((1, 2), 3)


def test_frequency_overflow():
    with pytest.raises(FrequencyOverflow):
        make_sequence(ratio=2**20, length=5)


def test_json_roundtrip():
    seq = make_sequence(ratio=2, custom=[1, 3, 7])
    assert LacunarySeq.from_json(seq.to_json()) == seq


def test_dissociation_ratio_three():
    assert dissociation_check(make_sequence(ratio=3, length=8))


def test_ratio_two_collides():
    seq = make_sequence(ratio=2, length=3)
    assert not dissociation_check(seq)
    a, b = find_collision(seq)
    assert a != b and eps_sum(seq, a) == eps_sum(seq, b)


def test_higher_order_needs_larger_ratio():
    seq = make_sequence(ratio=3, length=3)
    assert dissociation_check(seq, 1)
    assert not dissociation_check(seq, 2)
    assert dissociation_check(make_sequence(ratio=5, length=3), 2)


def test_enumeration_budget():
    with pytest.raises(TooLarge):
        dissociation_check(make_sequence(ratio=2, length=40), 1)


def test_lift_rejects_collisions():
    with pytest.raises(NotDissociate):
        lift_frequency(make_sequence(ratio=2, length=3), 1)


@given(st.lists(st.integers(-1, 1), min_size=5, max_size=5), st.integers(3, 6))
def test_lift_inverts_eps_sum(eps, d):
    seq = make_sequence(ratio=d, length=5)
    assert lift_frequency(seq, eps_sum(seq, eps)) == tuple(eps)


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_lift_order_two(eps):
    seq = make_sequence(ratio=5, length=4)
    assert lift_frequency(seq, eps_sum(seq, eps), q=2) == tuple(eps)


def test_lift_missing_frequency():
    assert lift_frequency(make_sequence(ratio=3, length=3), 14) is None

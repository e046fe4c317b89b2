import math

import numpy as np
import pytest
from fractions import Fraction

from rieszprod.errors import HypothesisViolation
from rieszprod.lacunary import make_sequence
from rieszprod.verify.transfer import check_l1_transfer, iid_second_moment, montecarlo_iid, tilde_identity

SEQ = make_sequence(ratio=3, length=4)


def test_tilde_identity():
    assert tilde_identity(SEQ, 3, [0.1, 2.0, -1.0])


def test_contraction_random_psi():
    r = check_l1_transfer(SEQ, 3, np.random.default_rng(0).standard_normal((4, 3)), psi_samples=10, seed=3)
    assert r.passed and r.lhs <= r.rhs + 1e-10


def test_zero_phase():
    r = check_l1_transfer(SEQ, 2, [1.0, -1.0, 2.0], psi=[[0.0, 0.0]])
    assert r.passed


def test_single_last_term_is_equality():
    r = check_l1_transfer(SEQ, 3, [0.0, 0.0, 0.0, 2.5], psi_samples=3)
    assert r.lhs == pytest.approx(2.5, rel=1e-9) and r.rhs == pytest.approx(2.5, rel=1e-9)


def test_needs_ratio_three():
    with pytest.raises(HypothesisViolation):
        check_l1_transfer(make_sequence(ratio=2, length=3), 2, [1.0, 1.0, 1.0])


def test_second_moment_oracle_exact():
    assert iid_second_moment([1, -2]) == 1 - 4 + 4 * Fraction(3, 2)


def test_mc_unit_mean():
    rep = montecarlo_iid(1.0, 4, [0, 0, 0, 0, 1], samples=20_000, seed=1)
    assert abs(rep.value - 1.0) <= 3 * rep.error_estimate


def test_mc_single_sample():
    rep = montecarlo_iid(2.0, 2, [1, 1, 1], samples=1, seed=0)
    assert math.isinf(rep.error_estimate) and rep.value > 0


def test_mc_deterministic_and_chunk_independent():
    a = montecarlo_iid(1.5, 3, [1, -1, 2, 0.5], samples=5000, seed=7)
    b = montecarlo_iid(1.5, 3, [1, -1, 2, 0.5], samples=5000, seed=7, chunk=333)
    assert a.value == b.value or a.value == pytest.approx(b.value, rel=1e-14)
    assert a == montecarlo_iid(1.5, 3, [1, -1, 2, 0.5], samples=5000, seed=7)

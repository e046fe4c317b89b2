from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import special_ortho_group

from rieszprod.lacunary import make_sequence
from rieszprod.verify.theorem import (
    check_main_theorem,
    check_theorem_batch,
    estimate_lower_constant,
    moment_ratios,
    random_coefficients,
    sign_patterns,
)

SEQ = make_sequence(ratio=3, length=6)


def _ratio(p, V, e_norm="l2"):
    return moment_ratios(SEQ, p, V[None], e_norm, 1e-12)[0][0]


def test_single_term_ratio_is_one():
    lo, up = check_main_theorem(SEQ, 1.5, [2.0])
    assert lo.lhs == up.lhs == 1.0 and lo.passed and up.passed


def test_exact_plancherel_example():
    lo, up = check_main_theorem(SEQ, 2, [1, -1, 1])
    assert lo.method == "PLANCHEREL_EXACT"
    # int (1 - R_1 + R_2)^2 over 1 + 3/2 + 9/4
    num = Fraction(1) - 2 * 1 + 2 * 1 + Fraction(3, 2) - 2 * Fraction(3, 2) + Fraction(9, 4)
    assert lo.exact[0] == num / Fraction(19, 4)
    assert up.passed and up.rhs == 32**3


def test_exact_matches_quadrature():
    V = np.array([[1.0], [-2.0], [0.5], [3.0]])
    lo, _ = check_main_theorem(SEQ, 4, V[:, 0].tolist())
    assert _ratio(4, V) == pytest.approx(lo.lhs, rel=1e-10)


def test_p1_upper_is_triangle_inequality():
    recs = check_theorem_batch(SEQ, 1.0, sign_patterns(3))
    assert all(r.passed for r in recs)
    assert max(r.lhs for r in recs) == pytest.approx(1.0, abs=1e-9)


def test_p1_floor_over_sign_patterns():
    recs = check_theorem_batch(SEQ, 1.0, sign_patterns(6), tol=1e-7)
    lows = [r for r in recs if r.statement_id == "THM-lower"]
    assert len(lows) == 64 and all(r.passed for r in lows)
    assert min(r.lhs for r in lows) > 0.1


@given(st.floats(1e-3, 1e3), st.sampled_from([1.0, 1.5, 3.0]), st.integers(0, 50))
def test_scaling_invariance(s, p, idx):
    V = random_coefficients(11, idx, 3, 2)
    assert _ratio(p, s * V) == pytest.approx(_ratio(p, V), rel=1e-12)


@given(st.integers(0, 10_000), st.sampled_from([1.0, 2.5]))
def test_orthogonal_invariance_l2(seed, p):
    V = random_coefficients(5, seed, 3, 3)
    Q = special_ortho_group.rvs(3, random_state=seed)
    assert _ratio(p, V @ Q.T) == pytest.approx(_ratio(p, V), rel=1e-10)


def test_global_sign_invariance():
    V = random_coefficients(3, 0, 4, 2)
    assert _ratio(1.5, -V) == pytest.approx(_ratio(1.5, V), rel=1e-13)


def test_random_coefficients_deterministic():
    assert np.array_equal(random_coefficients(9, 4, 3, 2), random_coefficients(9, 4, 3, 2))
    assert not np.array_equal(random_coefficients(9, 4, 3, 2), random_coefficients(9, 5, 3, 2))


def test_estimate_trivial_and_ordering():
    e0 = estimate_lower_constant(SEQ, 2.0, 0)
    assert e0.empirical_lower == e0.empirical_upper == 1.0
    est = estimate_lower_constant(SEQ, 1.5, 3, budget=16, seed=2)
    assert est.empirical_lower <= 1.0 <= est.empirical_upper
    assert _ratio(1.5, est.argmin) == pytest.approx(est.empirical_lower, rel=1e-6)
    assert _ratio(1.5, est.argmax) == pytest.approx(est.empirical_upper, rel=1e-6)


@pytest.mark.parametrize("strategy", ["signs", "random"])
def test_budget_doubling_never_raises_lower(strategy):
    a = estimate_lower_constant(SEQ, 1.0, 3, strategy=strategy, budget=8, seed=4, tol=1e-7)
    b = estimate_lower_constant(SEQ, 1.0, 3, strategy=strategy, budget=16, seed=4, tol=1e-7)
    assert b.empirical_lower <= a.empirical_lower + 1e-9


def test_estimate_deterministic():
    a = estimate_lower_constant(SEQ, 3.0, 2, budget=8, seed=1)
    b = estimate_lower_constant(SEQ, 3.0, 2, budget=8, seed=1)
    assert a.to_dict() == b.to_dict()

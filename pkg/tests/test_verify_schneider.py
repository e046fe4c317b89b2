from fractions import Fraction

import pytest

from rieszprod.errors import HypothesisViolation
from rieszprod.moments import lp_quadrature, x_moment_exact
from rieszprod.riesz import riesz_factor
from rieszprod.trigpoly import TrigPoly
from rieszprod.verify.schneider import (
    block_function,
    check_larger_inequality,
    check_p_discrepancy,
    check_schneider_counterexample,
    discrepancy_table,
    norm_ratio_power,
)


def test_denominator_value():
    recs = check_schneider_counterexample(4, 1)
    den = next(r for r in recs if r.statement_id == "SCH-denominator")
    assert den.exact == (Fraction(35, 8) ** 2, Fraction(35, 8) ** 2)


def test_growth_strict_for_three_steps():
    recs = check_schneider_counterexample(4, 3)
    assert all(r.passed for r in recs)
    ratios = [norm_ratio_power(4, k) for k in (1, 2, 3)]
    assert Fraction(1) < ratios[0] < ratios[1] < ratios[2]


def test_ratio_against_quadrature():
    # numerator of r_1 by an independent route: trapezoid rule on R_2 with modes 4, 16
    R = riesz_factor(4) * riesz_factor(16)
    num = lp_quadrature(R.to_float(), 4.0, tol=1e-13).value
    assert num / float(x_moment_exact(4)) ** 2 == pytest.approx(float(norm_ratio_power(4, 1)), rel=1e-11)


def test_block_function_is_exact():
    f = block_function(4)
    assert f.exact and f.degree == 2 + 8


def test_rejects_odd_or_small():
    with pytest.raises(HypothesisViolation):
        check_schneider_counterexample(3, 1)
    with pytest.raises(HypothesisViolation):
        check_schneider_counterexample(2, 1)


def test_larger_inequality_equality_when_dissociate():
    r = check_larger_inequality(riesz_factor(1), [1, 3, 9])
    assert r.passed and r.margin == 0 and r.note == "distinct sums"


def test_larger_inequality_strict_with_collisions():
    r = check_larger_inequality(riesz_factor(1), [1, 2])
    assert r.passed and r.margin > 0 and r.note == "collisions"


def test_larger_needs_nonnegative_coefficients():
    with pytest.raises(HypothesisViolation):
        check_larger_inequality(TrigPoly.cos(1, -1), [1, 3])


def test_discrepancy_table():
    rows = {r.p: r for r in check_p_discrepancy(4, [1.0, 2.0, 4.0])}
    assert rows[1.0].torus == pytest.approx(1.0) and rows[1.0].product == pytest.approx(1.0) and not rows[1.0].differs
    assert rows[2.0].torus == rows[2.0].product == 2.25 and not rows[2.0].differs
    assert rows[4.0].differs and rows[4.0].torus > rows[4.0].product
    assert discrepancy_table(4, [2.0]).shape == (1, 3)

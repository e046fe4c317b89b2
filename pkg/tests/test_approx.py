import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszprod.approx import (
    ConstantLedger,
    RealPoly,
    Tag,
    bernstein_approx,
    bernstein_degree,
    f_p,
    lambda1_envelope,
    lambda2,
    lambda_constants,
    majorant_epsilons,
    closed_form_constants,
    phi_moment,
    sandwich_excess,
    weierstrass_wp,
    weight_majorant,
)
from rieszprod.errors import RatioViolation
from rieszprod.lacunary import make_sequence
from rieszprod.moments import x_moment
from rieszprod.riesz import WeightSpec


def test_real_poly_bases_agree():
    mono = RealPoly([1.0, -2.0, 0.5], "monomial", (0.0, 1.0))
    x = np.linspace(0, 1, 11)
    # the same quadratic in the Bernstein basis: values at 0, 1/2 (control), 1
    bern = RealPoly([1.0, 0.0, -0.5], "bernstein", (0.0, 1.0))
    assert np.allclose(mono(x), bern(x))
    assert np.allclose(bern.monomial_coefficients(), [1.0, -2.0, 0.5])


@pytest.mark.parametrize("p,eps", [(1.5, 0.5), (2.0, 0.2), (3.0, 0.1)])
def test_bernstein_sandwich(p, eps):
    w = bernstein_approx(p, eps)
    assert w.degree == bernstein_degree(eps)
    t = np.linspace(0, 1, 10_000)
    assert np.all(w(t) >= f_p(t, p) - 1e-12)
    assert sandwich_excess(w, p) <= eps + 1e-12


def test_majorant_epsilons_sum_below_ln2_over_p():
    eps = majorant_epsilons(5, 2.0)
    assert sum(eps.values()) < math.log(2) / 2


def test_weight_majorant_bounds():
    seq = make_sequence(ratio=8, length=2)
    spec = WeightSpec(1, 2, 2.0, ("HALF_PHI", "ONE_MINUS_HALF_PHI"))
    maj = weight_majorant(spec, seq)
    assert maj.lower_margin >= -1e-12 and maj.upper_margin >= -1e-12
    assert maj.degree <= maj.degree_bound


def test_weight_majorant_needs_ratio_eight():
    with pytest.raises(RatioViolation):
        weight_majorant(WeightSpec(1, 2, 2.0, ("HALF_PHI", "HALF_PHI")), make_sequence(ratio=4, length=2))


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_wp_lambda1_below_one(p):
    res = weierstrass_wp(p)
    x = np.linspace(0, 2, 5001)
    assert np.all(res.w(x) >= x ** ((p - 1) / p) - 1e-12)
    assert res.lower_envelope <= res.lambda1 < 1


def test_lambda1_envelope_by_quadrature():
    p = 2.5
    env = x_moment(p - 1).value / x_moment(p).value ** ((p - 1) / p)
    assert lambda1_envelope(p) == pytest.approx(env, rel=1e-9)
    assert env < 1


def test_lambda2_monotone_in_eps():
    assert lambda2(0.9, 2.0, 0.1) < lambda2(0.9, 2.0, 0.2)


def test_lambda_constants_ledger():
    led = ConstantLedger()
    rec = lambda_constants(2.0, ledger=led)
    assert rec.value < 1 and rec.tag is Tag.EMPIRICAL
    assert led.value(2.0, "lambda1") < 1
    assert '"lambda2"' in led.to_json()


def test_closed_form_constants():
    led = closed_form_constants(2.0)
    assert led.value(2.0, "C_upper") == 32**3
    assert led.value(2.0, "d_upper") == 320
    assert led.get(2.0, "C7").tag is Tag.UNSPECIFIED
    assert closed_form_constants(1.0).value(1.0, "c_lower") == 2e-5


@given(st.integers(1, 4), st.floats(1.0, 4.0))
def test_phi_moment_against_grid(k, p):
    t = 2 * np.pi * np.arange(4096) / 4096
    assert phi_moment(k, p) == pytest.approx(np.mean(np.sin(t / 2) ** (2 * k * p)), rel=1e-8)

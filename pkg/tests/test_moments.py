import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import beta

from rieszprod.errors import NoConvergence
from rieszprod.lacunary import make_sequence
from rieszprod.moments import (
    Method,
    adaptive_trapezoid,
    lp_even_exact,
    lp_quadrature,
    riesz_moment,
    tilde_norm_product,
    torus2_norm,
    x_moment,
    x_moment_closed_form,
    x_moment_exact,
)
from rieszprod.riesz import riesz_product, weighted_sum
from rieszprod.trigpoly import TrigPoly


def test_x_moment_exact_values():
    assert x_moment_exact(2) == Fraction(3, 2)
    assert x_moment_exact(4) == Fraction(35, 8)


@pytest.mark.parametrize("p", [0.5, 1, 1.5, 2, 3, 4, 5])
def test_x_moment_against_beta_oracle(p):
    # int (1+cos)^p dm = 2^p B(p + 1/2, 1/2) / pi
    oracle = 2**p * beta(p + 0.5, 0.5) / math.pi
    assert x_moment_closed_form(p) == pytest.approx(oracle, rel=1e-13)
    assert x_moment(p).value == pytest.approx(oracle, rel=1e-10)


def test_x_moment_against_scipy_quad():
    val, _ = integrate.quad(lambda t: (1 + math.cos(t)) ** 1.5, 0, 2 * math.pi, limit=200)
    assert x_moment(1.5).value == pytest.approx(val / (2 * math.pi), rel=1e-10)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_even_exact_vs_quadrature(m):
    R = riesz_product(make_sequence(ratio=3, length=4), 4)
    ex = lp_even_exact(R, m)
    assert ex.method is Method.PLANCHEREL_EXACT and isinstance(ex.exact_rational, Fraction)
    q = lp_quadrature(R.to_float(), 2 * m, tol=1e-13)
    assert q.value == pytest.approx(ex.value, rel=1e-10)


def test_second_moment_of_riesz_product():
    # int R_N^2 = (3/2)^N when all sums are distinct
    R = riesz_product(make_sequence(ratio=3, length=5), 5)
    assert lp_even_exact(R, 1).exact_rational == Fraction(3, 2) ** 5


def test_vector_l2_even_moment():
    seq = make_sequence(ratio=3, length=2)
    f = weighted_sum([[1, 2], [0, -1], [3, 1]], seq)
    ex = lp_even_exact(f, 2)
    q = lp_quadrature(f, 4.0, tol=1e-13)
    assert float(ex.exact_rational) == pytest.approx(q.value, rel=1e-11)


def test_riesz_moment_product_form_under_dissociation():
    seq = make_sequence(ratio=5, length=3)
    # ratio 5 keeps all {-2..2}-sums distinct, so int R_N^4 factorises
    assert riesz_moment(seq, 3, 4).exact_rational == x_moment_exact(4) ** 3
    # at ratio 3 the squares collide and the moment is strictly larger
    assert riesz_moment(make_sequence(ratio=3, length=3), 3, 4).exact_rational > x_moment_exact(4) ** 3


def test_tilde_norm_product():
    assert tilde_norm_product(2, 3).exact_rational == Fraction(27, 8)
    assert tilde_norm_product(1.5, 2).value == pytest.approx(x_moment_closed_form(1.5) ** 2, rel=1e-10)


def test_torus2_norm_separable():
    rep = torus2_norm(lambda x, y: (1 + np.cos(x)) * (1 + np.cos(y)), 2.0, tol=1e-12)
    assert rep.value == pytest.approx(2.25, rel=1e-12)


def test_no_convergence_carries_report():
    with pytest.raises(NoConvergence) as info:
        adaptive_trapezoid(lambda M, idx: np.abs(np.sin(np.pi * idx / M * 7.3)) ** 0.1, 1e-15, 16, 256)
    assert info.value.report is not None and not info.value.report.converged


@given(st.floats(1.0, 4.0), st.floats(0.1, 10.0))
def test_homogeneity(p, s):
    f = TrigPoly.from_coeffs({0: 0.3, 2: 0.5, -2: 0.5, 5: 0.25j, -5: -0.25j})
    a = lp_quadrature(f, p, tol=1e-12).value
    b = lp_quadrature(f.scale(s), p, tol=1e-12).value
    assert b == pytest.approx(s**p * a, rel=1e-9)

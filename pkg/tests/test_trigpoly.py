from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszprod.errors import BudgetExceeded
from rieszprod.trigpoly import Dyadic, TrigPoly, VecTrigPoly, evaluate, random_trigpoly, vector_norm, vpoussin_kernel

dyadics = st.builds(lambda n, k: Fraction(n, 2**k), st.integers(-64, 64), st.integers(0, 6))
coeff_maps = st.dictionaries(st.integers(-20, 20), dyadics, min_size=1, max_size=6)


def _poly(d):
    return TrigPoly.from_coeffs(d)


def test_dyadic_reduction():
    d = Dyadic(4, 0, 3)
    assert (d.re, d.k) == (1, 1)
    assert d.real == Fraction(1, 2)


def test_exact_mode_detection():
    assert TrigPoly.from_coeffs({0: 1, 1: Fraction(1, 4)}).exact
    assert not TrigPoly.from_coeffs({0: 0.5}).exact
    assert not TrigPoly.from_coeffs({0: Fraction(1, 3)}).exact


def test_cos_product_identity():
    # cos(t)^2 = 1/2 + cos(2t)/2
    c = TrigPoly.cos(1)
    assert c * c == TrigPoly.from_coeffs({0: Fraction(1, 2), 2: Fraction(1, 4), -2: Fraction(1, 4)})


def test_sin_squared_plus_cos_squared():
    s, c = TrigPoly.sin(3), TrigPoly.cos(3)
    assert s * s + c * c == TrigPoly.constant(1)


def test_mixed_modes_promote():
    f = TrigPoly.cos(1) + TrigPoly.constant(0.1, exact=False)
    assert not f.exact and f.promoted


@given(coeff_maps, coeff_maps)
def test_product_matches_pointwise(a, b):
    f, g = _poly(a), _poly(b)
    t = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(evaluate(f * g, t), evaluate(f, t) * evaluate(g, t), atol=1e-9)


@given(coeff_maps, coeff_maps, coeff_maps)
def test_product_associative_exact(a, b, c):
    f, g, h = _poly(a), _poly(b), _poly(c)
    assert (f * g) * h == f * (g * h)


@given(coeff_maps)
def test_plancherel_matches_grid_mean(a):
    f = _poly(a)
    M = 64
    assert float(f.plancherel()) == pytest.approx(np.mean(np.abs(f.sample(M)) ** 2), rel=1e-12, abs=1e-12)


@given(coeff_maps)
def test_derivative_matches_finite_difference(a):
    f = _poly(a)
    t, h = 0.37, 1e-6
    fd = (evaluate(f, t + h) - evaluate(f, t - h)) / (2 * h)
    assert evaluate(f.derivative(), t) == pytest.approx(fd, abs=1e-4)


def test_dilate_and_modulate():
    f = TrigPoly.cos(2)
    assert f.dilate(3) == TrigPoly.cos(6)
    g = f.modulate(1)
    assert set(g.frequencies.tolist()) == {-1, 3}


def test_convolution_multiplies_coefficients():
    f = TrigPoly.from_coeffs({0: 1, 1: 2, -1: 2})
    g = TrigPoly.from_coeffs({1: Fraction(1, 2), 5: 1})
    h = f.convolve_fourier(g)
    assert h == TrigPoly.from_coeffs({1: 1})


def test_budget():
    f = TrigPoly.from_coeffs({n: 1 for n in range(10)})
    with pytest.raises(BudgetExceeded):
        f.multiply(f, budget=50)


def test_vpoussin_kernel():
    V = vpoussin_kernel(4)
    assert V.degree == 7
    assert float(V.coeff(4).real) == 1 and float(V.coeff(6).real) == 0.5
    assert np.mean(np.abs(V.sample(4096))) <= 1.5 + 1e-12
    assert evaluate(V, 0.0) == pytest.approx(12.0)


def test_json_roundtrip():
    rng = np.random.default_rng(1)
    for exact in (True, False):
        f = random_trigpoly(rng, 5, exact=exact)
        assert TrigPoly.from_json(f.to_json()).allclose(f, 0)


def test_vector_norms():
    v = np.array([[3.0, -4.0]])
    assert vector_norm(v, "l1")[0] == 7 and vector_norm(v, "l2")[0] == 5 and vector_norm(v, "linf")[0] == 4


def test_vec_poly_requires_real_coordinates():
    with pytest.raises(ValueError):
        VecTrigPoly((TrigPoly.from_coeffs({1: 1}),))

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszprod.lacunary import make_sequence
from rieszprod.riesz import (
    Choice,
    WeightSpec,
    grid_angles,
    phi_k,
    riesz_product,
    riesz_samples,
    riesz_shifted,
    riesz_tilde,
    weight_eval,
    weight_samples,
    weighted_sum,
)
from rieszprod.trigpoly import evaluate


def test_product_terms_and_coefficients():
    seq = make_sequence(ratio=3, length=4)
    R = riesz_product(seq, 4)
    assert R.exact and R.nterms == 81
    for eps in itertools.product((-1, 0, 1), repeat=4):
        n = sum(e * m for e, m in zip(eps, seq.modes))
        assert R.coeff(n).real == Fraction(1, 2 ** sum(map(abs, eps)))


def test_unit_mean_and_pointwise_values():
    seq = make_sequence(ratio=3, length=3)
    R = riesz_product(seq, 3)
    assert R.mean().real == 1
    t = np.linspace(0, 2 * np.pi, 11)
    direct = np.prod([1 + np.cos(n * t) for n in seq.modes], axis=0)
    assert np.allclose(evaluate(R, t), direct)


def test_ratio_two_still_multiplies_correctly():
    # collisions merge coefficients but the product stays right
    seq = make_sequence(ratio=2, length=3)
    t = np.linspace(0, 1, 7)
    assert np.allclose(evaluate(riesz_product(seq, 3), t), np.prod([1 + np.cos(n * t) for n in seq.modes], axis=0))


def test_samples_match_products():
    seq = make_sequence(ratio=4, length=3)
    S = riesz_samples(seq, 3, 256)
    for k in range(4):
        assert np.allclose(S[k], riesz_product(seq, k).sample(256))


def test_grid_angles_exact_reduction():
    idx = np.arange(16, dtype=np.int64)
    n = 3**30
    expected = 2 * np.pi * ((n % 16) * idx % 16) / 16
    assert np.array_equal(grid_angles(n, 16, idx), expected)


def test_shift_and_tilde():
    seq = make_sequence(ratio=3, length=2)
    psi = [0.3, 1.1]
    t = np.linspace(0, 2 * np.pi, 9)
    assert np.allclose(evaluate(riesz_shifted(seq, 2, psi), t), (1 + np.cos(t + 0.3)) * (1 + np.cos(3 * t + 1.1)))
    assert np.allclose(evaluate(riesz_tilde(seq, 2, psi), t), (1 + 0.5 * np.cos(t + 0.3)) * (1 + 0.5 * np.cos(3 * t + 1.1)))


def test_phi_k_values():
    t = np.linspace(0, 2 * np.pi, 13)
    assert np.allclose(evaluate(phi_k(3), t), ((1 - np.cos(t)) / 2) ** 3)


def test_weighted_sum_exact_and_vector():
    seq = make_sequence(ratio=3, length=2)
    f = weighted_sum([1, -2, 3], seq)
    assert f.exact and f.dim == 1
    g = weighted_sum([[1.0, 0.5], [0.0, 1.0], [2.0, -1.0]], seq, e_norm="linf")
    assert g.dim == 2 and not g.exact
    t = 0.7
    R = [1.0, 1 + np.cos(t), (1 + np.cos(t)) * (1 + np.cos(3 * t))]
    assert np.allclose(g(t), [1 * R[0] + 2 * R[2], 0.5 * R[0] + R[1] - R[2]])


@given(st.lists(st.sampled_from(list(Choice)), min_size=3, max_size=3), st.integers(1, 3), st.floats(1.0, 4.0))
def test_weight_in_unit_interval(choices, k, p):
    seq = make_sequence(ratio=8, length=3)
    spec = WeightSpec(k, 3, p, tuple(choices))
    g = weight_samples(spec, seq, 512)
    assert np.all(g >= 0) and np.all(g <= 1)
    t = 2 * np.pi * np.arange(512) / 512
    assert np.allclose(weight_eval(spec, seq, t), g)


def test_weight_spec_validation():
    with pytest.raises(ValueError):
        WeightSpec(1, 2, 2.0, ("ONE",))
    assert WeightSpec.from_json(WeightSpec(2, 1, 1.5, ("HALF_PHI",)).to_json()) == WeightSpec(2, 1, 1.5, (Choice.HALF_PHI,))

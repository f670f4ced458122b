import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import ndtri

from mcmcci._random import make_rng, normal_quantile, normal_quantile_approx, uniform_to_normal


def test_streams_are_reproducible():
    a = make_rng(7, 0, 3).random(16)
    b = make_rng(7, 0, 3).random(16)
    assert np.array_equal(a, b)


def test_distinct_keys_give_distinct_streams():
    assert not np.array_equal(make_rng(7, 0, 3).random(8), make_rng(7, 0, 4).random(8))
    assert not np.array_equal(make_rng(7, 0, 3).random(8), make_rng(7, 1, 3).random(8))


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        make_rng(-1)


def test_rational_approximation_accuracy():
    p = np.concatenate([np.logspace(-300, -12, 200), np.linspace(1e-12, 1e-3, 2001), np.linspace(1e-3, 1 - 1e-3, 20001),
                        1 - np.linspace(1e-12, 1e-3, 2001)])
    approx = np.array([normal_quantile_approx(x) for x in p])
    exact = ndtri(p)
    assert np.all(np.abs(approx - exact) <= 1.2e-9 * np.maximum(1.0, np.abs(exact)))


def test_vectorised_matches_scalar():
    u = make_rng(11).random(5000)
    vec = uniform_to_normal(u)
    scalar = np.array([normal_quantile(x) for x in u])
    np.testing.assert_allclose(vec, scalar, rtol=1e-14, atol=1e-15)


def test_draws_near_exact_quantile():
    u = np.concatenate([make_rng(12).random(20000), [1e-15, 1e-9, 1 - 1e-9, 1 - 2 ** -40]])
    np.testing.assert_allclose(uniform_to_normal(u), ndtri(u), rtol=1e-13, atol=1e-13)


def test_zero_uniform_stays_finite():
    assert np.isfinite(uniform_to_normal(np.array([0.0]))).all()


@given(st.floats(min_value=1e-10, max_value=1 - 1e-10))
def test_refined_quantile_near_exact(p):
    assert normal_quantile(p) == pytest.approx(float(ndtri(p)), rel=1e-12, abs=1e-12)


def test_known_quantiles():
    assert normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-13)
    assert normal_quantile(0.5) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        normal_quantile(1.0)

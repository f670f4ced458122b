import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mcmcci._random import make_rng
from mcmcci.chains import (
    UnknownTruthError, constant, exact_bias_curve, exact_bias_sqrt_bias, identity, indicator,
    known_truth, make_ar1_kernel, make_constant_kernel, make_kernel, make_sqrt_bias_kernel,
    make_two_state_kernel, simulate_many, simulate_trace, step_sqrt_bias,
    tail_probability_sqrt_bias, two_state_asymptotic_variance, Functional)
from mcmcci.estimators import repeated_runs_variance, running_mean

mpmath.mp.dps = 40


def _exact_bias_mp(n):
    return mpmath.fsum(1 / mpmath.sqrt(j + 1) for j in range(1, n + 1)) / n


# -- sqrt-bias transition law ------------------------------------------------

@given(st.floats(min_value=0, max_value=1, exclude_max=True))
def test_zero_is_absorbing(u):
    assert step_sqrt_bias(0, u) == 0


def test_state_one_threshold():
    cut = math.sqrt(1 / 2)
    assert step_sqrt_bias(1, math.nextafter(cut, 0)) == 2
    assert step_sqrt_bias(1, cut) == 0
    assert step_sqrt_bias(1, 0.0) == 2
    assert step_sqrt_bias(1, 0.99) == 0


def test_negative_state_rejected():
    with pytest.raises(ValueError):
        step_sqrt_bias(-1, 0.5)


def test_empirical_tail_law():
    R, horizon = 10 ** 5, 50
    kernel = make_sqrt_bias_kernel()
    alive = np.zeros(horizon)
    for i in range(R):
        alive += simulate_trace(kernel, indicator(), horizon, 1, (2024, 0, i)).values
    freq = alive / R
    assert abs(freq[2] - 0.5) <= 3 * math.sqrt(0.25 / R)
    for n in range(1, horizon + 1):
        p = tail_probability_sqrt_bias(n)
        assert abs(freq[n - 1] - p) <= 4 * math.sqrt(p * (1 - p) / R), n


# -- exact oracles -----------------------------------------------------------

def test_tail_probability_values():
    assert tail_probability_sqrt_bias(3) == 0.5
    assert tail_probability_sqrt_bias(1) == pytest.approx(0.7071067812, abs=1e-10)
    assert tail_probability_sqrt_bias(99) == pytest.approx(float(1 / mpmath.sqrt(100)), rel=1e-15)
    with pytest.raises(ValueError):
        tail_probability_sqrt_bias(0)


@pytest.mark.parametrize("n", [1, 2, 5, 13, 40])
def test_tail_probability_matches_product(n):
    prod = mpmath.fprod(mpmath.sqrt(i) / mpmath.sqrt(i + 1) for i in range(1, n + 1))
    assert tail_probability_sqrt_bias(n) == pytest.approx(float(prod), rel=1e-14)


def test_exact_bias_values():
    assert exact_bias_sqrt_bias(1) == pytest.approx(0.7071067812, abs=1e-10)
    # mpmath oracle: (1/3)(1/sqrt2 + 1/sqrt3 + 1/2)
    assert exact_bias_sqrt_bias(3) == pytest.approx(0.5948190167920578, rel=1e-14)
    b = exact_bias_sqrt_bias(10 ** 6)
    assert 9.99999e-4 <= b <= 2.0e-3
    with pytest.raises(ValueError):
        exact_bias_sqrt_bias(0)


@pytest.mark.parametrize("n", [1, 7, 100, 1234, 54321])
def test_exact_bias_against_high_precision(n):
    assert exact_bias_sqrt_bias(n) == pytest.approx(float(_exact_bias_mp(n)), rel=1e-14)


def test_bias_curve_agrees_with_scalar():
    curve = exact_bias_curve(10 ** 5)
    for n in (1, 2, 10, 999, 10 ** 4, 77777, 10 ** 5):
        assert curve[n - 1] == pytest.approx(exact_bias_sqrt_bias(n), rel=1e-13)


def test_bias_sandwich_exhaustive():
    curve = exact_bias_curve(10 ** 4)
    n = np.arange(1, 10 ** 4 + 1)
    assert np.all(1 / np.sqrt(n + 1) <= curve)
    assert np.all(curve <= 2 / np.sqrt(n))


def test_exact_bias_matches_simulation():
    kernel = make_sqrt_bias_kernel()
    traces = simulate_many(kernel, indicator(), 10, 20000, 1, master_seed=5)
    means = np.array([running_mean(t) for t in traces])
    se = means.std(ddof=1) / math.sqrt(means.size)
    assert abs(means.mean() - exact_bias_sqrt_bias(10)) <= 4 * se


# -- kernels -----------------------------------------------------------------

def test_two_state_stationary_means():
    assert make_two_state_kernel(0.5, 0.5).exact_stationary_mean == 0.5
    assert make_two_state_kernel(0.1, 0.3).exact_stationary_mean == pytest.approx(0.25)


@pytest.mark.parametrize("p01,p10", [(0, 0.5), (0.5, 0), (1.2, 0.5), (-0.1, 0.3)])
def test_two_state_rejects_bad_probabilities(p01, p10):
    with pytest.raises(ValueError):
        make_two_state_kernel(p01, p10)


def test_symmetric_two_state_is_iid():
    tr = simulate_trace(make_two_state_kernel(0.5, 0.5), identity(), 10 ** 5, "stationary", 3)
    x = tr.values
    lag1 = np.corrcoef(x[:-1], x[1:])[0, 1]
    assert abs(lag1) < 4 / math.sqrt(x.size)
    assert abs(running_mean(tr) - 0.5) <= 3 * math.sqrt(0.25 / 10 ** 5)


def test_two_state_asymptotic_variance_closed_form():
    assert two_state_asymptotic_variance(0.5, 0.5) == pytest.approx(0.25)
    assert two_state_asymptotic_variance(0.1, 0.1) == pytest.approx(2.25)


def test_two_state_repeated_runs_oracle():
    # ten long runs as a rough oracle, then many shorter runs as a tight one
    kernel = make_two_state_kernel(0.1, 0.1)
    rough = repeated_runs_variance(simulate_many(kernel, identity(), 10 ** 6, 10, "stationary", 17))
    # 99.9% band of 2.25 * chi2(9) / 9
    assert 2.25 * 1.152 / 9 < rough.B_squared < 2.25 * 27.88 / 9
    tight = repeated_runs_variance(simulate_many(kernel, identity(), 10 ** 4, 1000, "stationary", 18))
    assert tight.B_squared == pytest.approx(2.25, rel=0.12)


@pytest.mark.parametrize("rho", [1.0, -1.0, 1.5])
def test_ar1_rejects_nonergodic(rho):
    with pytest.raises(ValueError):
        make_ar1_kernel(rho)


def test_ar1_iid_case():
    tr = simulate_trace(make_ar1_kernel(0.0), identity(), 10 ** 5, 0.0, 9)
    assert abs(running_mean(tr)) <= 3 / math.sqrt(10 ** 5)
    assert np.var(tr.values) == pytest.approx(1.0, rel=0.03)


def test_ar1_long_run_mean():
    # asymptotic variance of AR(1) is 1/(1-rho)^2 = 4 at rho = 0.5
    b2 = repeated_runs_variance(
        simulate_many(make_ar1_kernel(0.5), identity(), 2000, 400, "stationary", 21)).B_squared
    assert b2 == pytest.approx(4.0, rel=0.2)
    tr = simulate_trace(make_ar1_kernel(0.5), identity(), 10 ** 6, 0.0, 22)
    assert abs(running_mean(tr)) <= 3 * math.sqrt(b2 / 10 ** 6)


def test_ar1_negative_rho_has_smaller_variance():
    def b2(rho):
        return repeated_runs_variance(
            simulate_many(make_ar1_kernel(rho), identity(), 1000, 400, "stationary", 31)).B_squared
    assert b2(-0.5) < b2(0.0)


# -- vectorised paths agree with the scalar step -------------------------------

def _stepwise(kernel, start, u):
    x, out = start, []
    for ui in u:
        x = kernel.step(x, float(ui))
        out.append(x)
    return np.array(out)


@settings(max_examples=60)
@given(p01=st.floats(0.01, 1.0), p10=st.floats(0.01, 1.0), start=st.sampled_from([0, 1]),
       seed=st.integers(0, 2 ** 32), n=st.integers(1, 300))
def test_two_state_path_matches_step(p01, p10, start, seed, n):
    k = make_two_state_kernel(p01, p10)
    u = make_rng(seed).random(n)
    assert np.array_equal(k.path(start, u), _stepwise(k, start, u))


@settings(max_examples=60)
@given(start=st.integers(0, 10 ** 6), seed=st.integers(0, 2 ** 32), n=st.integers(1, 300))
def test_sqrt_bias_path_matches_step(start, seed, n):
    k = make_sqrt_bias_kernel()
    u = make_rng(seed).random(n)
    assert np.array_equal(k.path(start, u), _stepwise(k, start, u))


@settings(max_examples=30)
@given(rho=st.floats(-0.99, 0.99), start=st.floats(-10, 10), seed=st.integers(0, 2 ** 32))
def test_ar1_path_matches_step(rho, start, seed):
    k = make_ar1_kernel(rho)
    u = make_rng(seed).random(100)
    assert np.array_equal(k.path(start, u), _stepwise(k, start, u))


# -- simulation contract ---------------------------------------------------------

@pytest.mark.parametrize("chain,params,start", [
    ("two-state", {"p01": 0.2, "p10": 0.4}, "stationary"),
    ("ar1", {"rho": 0.7}, 1.5),
    ("sqrt-bias", {}, 1),
    ("constant", {}, 0),
])
def test_simulation_is_deterministic(chain, params, start):
    k = make_kernel(chain, **params)
    a = simulate_trace(k, identity(), 500, start, (42, 0, 3))
    b = simulate_trace(k, identity(), 500, start, (42, 0, 3))
    assert a.values.tobytes() == b.values.tobytes()
    assert a.n == 500


def test_sqrt_bias_indicator_trace_reproducible():
    k = make_sqrt_bias_kernel()
    a = simulate_trace(k, indicator(), 5, 1, 42)
    b = simulate_trace(k, indicator(), 5, 1, 42)
    assert set(a.values.tolist()) <= {0.0, 1.0}
    assert a.values.tobytes() == b.values.tobytes()


def test_stationary_draw_requires_sampler():
    from dataclasses import replace
    k = replace(make_two_state_kernel(0.5, 0.5), stationary_sampler=None)
    with pytest.raises(ValueError):
        simulate_trace(k, identity(), 10, "stationary", 1)


def test_invalid_start_states():
    with pytest.raises(ValueError):
        simulate_trace(make_two_state_kernel(0.5, 0.5), identity(), 10, 2, 1)
    with pytest.raises(ValueError):
        simulate_trace(make_sqrt_bias_kernel(), identity(), 10, -3, 1)
    with pytest.raises(ValueError):
        simulate_trace(make_sqrt_bias_kernel(), identity(), 0, 1, 1)


def test_bound_violation_detected():
    loose = Functional("scaled", lambda x: 3.0 * x, bound_D=1.0)
    with pytest.raises(AssertionError):
        simulate_trace(make_sqrt_bias_kernel(), loose, 5, 1, 0)


def test_two_state_stationary_window_means():
    k = make_two_state_kernel(0.1, 0.3)
    traces = simulate_many(k, identity(), 50, 4000, "stationary", 8)
    block = np.array([t.values for t in traces])
    for lo, hi in [(0, 10), (10, 30), (30, 50)]:
        m = block[:, lo:hi].mean()
        se = block[:, lo:hi].mean(axis=1).std(ddof=1) / math.sqrt(block.shape[0])
        assert abs(m - 0.25) <= 4 * se


def test_known_truth_table():
    assert known_truth(make_two_state_kernel(0.1, 0.3), identity()) == pytest.approx(0.25)
    assert known_truth(make_sqrt_bias_kernel(), indicator()) == 0.0
    assert known_truth(make_constant_kernel(), constant(2.5)) == 2.5
    assert known_truth(make_ar1_kernel(0.0), indicator()) == pytest.approx(0.15865525393145705)
    weird = Functional("square", lambda x: x * x)
    with pytest.raises(UnknownTruthError):
        known_truth(make_ar1_kernel(0.3), weird)

"""Seeded uniform streams and the normal quantile used for inverse-CDF draws."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc

# Acklam's rational approximation of the standard normal quantile.
# Relative error <= 1.15e-9 on (0, 1) before refinement.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425
_P_HIGH = 1.0 - _P_LOW

# keeps inverse-CDF draws finite when the generator returns exactly 0
_U_MIN = 2.0 ** -54
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def make_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Counter-based Philox stream for ``(master_seed, *key)``.

    Distinct keys give statistically independent streams, so replication
    ``i`` of an experiment always sees the same draws whether replications
    run serially or in parallel.
    """
    if master_seed < 0:
        raise ValueError(f"seed must be nonnegative, got {master_seed}")
    seq = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))


def _tail(q):
    return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
        (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)


def _central(q, r):
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
        ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


def normal_quantile_approx(p: float) -> float:
    """Unrefined rational approximation of the standard normal quantile."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if p < _P_LOW:
        return _tail(math.sqrt(-2.0 * math.log(p)))
    if p > _P_HIGH:
        return -_tail(math.sqrt(-2.0 * math.log1p(-p)))
    q = p - 0.5
    return _central(q, q * q)


def normal_quantile(p: float) -> float:
    """Standard normal quantile: rational approximation plus one Halley step.

    The step is taken in the lower tail (``p > 1/2`` is mapped through
    ``1 - p``, which is exact there) to avoid cancellation near 1.
    """
    if p > 0.5:
        return -normal_quantile(1.0 - p)
    x = normal_quantile_approx(p)
    e = 0.5 * math.erfc(-x / _SQRT2) - p
    u = e * _SQRT2PI * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def uniform_to_normal(u: np.ndarray) -> np.ndarray:
    """Vectorised inverse-CDF transform of uniforms in [0, 1), refined like :func:`normal_quantile`."""
    p = np.clip(np.asarray(u, dtype=np.float64), _U_MIN, 1.0 - _U_MIN)
    upper = p > 0.5
    q = np.where(upper, 1.0 - p, p)
    x = np.empty_like(q)
    lo = q < _P_LOW
    x[lo] = _tail(np.sqrt(-2.0 * np.log(q[lo])))
    c = q[~lo] - 0.5
    x[~lo] = _central(c, c * c)
    e = 0.5 * erfc(-x / _SQRT2) - q
    step = e * _SQRT2PI * np.exp(0.5 * x * x)
    x = x - step / (1.0 + 0.5 * x * step)
    return np.where(upper, -x, x)

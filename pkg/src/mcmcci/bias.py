"""Bias bounds under polynomial ergodicity, and empirical bias-rate fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence, Union

import numpy as np

BETA_MARGIN = 1e-6
BETA_MIN = 0.5 + BETA_MARGIN
BETA_MAX = 1.0 - BETA_MARGIN

BetaPolicy = Union[Literal["optimal"], float]


class OrderTooLowError(ValueError):
    """Ergodicity order m <= 1/2: no o(1/sqrt(n)) bias guarantee is available."""


@dataclass(frozen=True)
class PolyErgodicityCert:
    """``||P^n(x, .) - pi|| <= M_x n^-m`` together with ``|f| <= D``."""

    m: float
    M_x: float
    D: float

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"m must be positive, got {self.m}")
        if not self.M_x >= 0:
            raise ValueError(f"M_x must be >= 0, got {self.M_x}")
        if not self.D >= 0:
            raise ValueError(f"D must be >= 0, got {self.D}")


@dataclass(frozen=True)
class BiasBound:
    C: float
    n: int
    provenance: Literal["assumed", "poly-ergodic-T4", "exact-example1"]
    beta_used: float | None = None

    def __post_init__(self):
        if not self.C >= 0:
            raise ValueError(f"C must be >= 0, got {self.C}")
        if self.beta_used is not None and not 0.5 < self.beta_used < 1.0:
            raise ValueError(f"beta must lie in (1/2, 1), got {self.beta_used}")


def optimal_beta(n: int, m: float = 1.0) -> float:
    """Minimiser over (1/2, 1) of n^-beta / (1 - beta), i.e. 1 - 1/ln n, clamped."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if m < 1:
        raise ValueError(f"optimal_beta applies to m >= 1, got {m}")
    return min(max(1.0 - 1.0 / math.log(n), BETA_MIN), BETA_MAX)


def bias_bound_t4(cert: PolyErgodicityCert, n: int, beta_policy: BetaPolicy = "optimal") -> BiasBound:
    """Bound |E(e_n) - pi(f)| from a polynomial-ergodicity certificate.

    For 1/2 < m < 1 this is ``2 D M_x / (1 - m) * n^-m``.  For m >= 1 the
    order is replaced by some beta in (1/2, 1), chosen by ``beta_policy``
    (``"optimal"`` or a fixed float).
    """
    if cert.m <= 0.5:
        raise OrderTooLowError(
            f"order too low: m = {cert.m} <= 1/2 gives no o(1/sqrt(n)) bias guarantee")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    scale = 2.0 * cert.D * cert.M_x
    if cert.m < 1.0:
        return BiasBound(scale / (1.0 - cert.m) * n ** -cert.m, n, "poly-ergodic-T4")
    if beta_policy == "optimal":
        beta = optimal_beta(n, cert.m) if n >= 2 else BETA_MIN
    else:
        beta = float(beta_policy)
        if not 0.5 < beta < 1.0:
            raise ValueError(f"fixed beta must lie in (1/2, 1), got {beta}")
    return BiasBound(scale / (1.0 - beta) * n ** -beta, n, "poly-ergodic-T4", beta_used=beta)


def fit_bias_rate(sample_sizes: Sequence[int], biases: Sequence[float]) -> float:
    """OLS slope of log(bias) on log(n)."""
    n = np.asarray(sample_sizes, dtype=np.float64)
    b = np.asarray(biases, dtype=np.float64)
    if n.size != b.size:
        raise ValueError("sample_sizes and biases differ in length")
    if n.size < 3:
        raise ValueError(f"need at least 3 points, got {n.size}")
    if np.any(b <= 0):
        raise ValueError("biases must be positive to take logs")
    if np.any(n <= 0) or np.any(np.diff(n) <= 0):
        raise ValueError("sample_sizes must be positive and strictly increasing")
    x = np.log(n)
    y = np.log(b)
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


def geometric_grid(start: float, stop: float, per_decade: int) -> list[int]:
    """Distinct integers spaced log-uniformly from ``start`` to ``stop`` inclusive."""
    if not 1 <= start <= stop:
        raise ValueError(f"need 1 <= start <= stop, got {start}, {stop}")
    if per_decade < 1:
        raise ValueError(f"per_decade must be >= 1, got {per_decade}")
    lo, hi = math.log10(start), math.log10(stop)
    points = int(round((hi - lo) * per_decade)) + 1
    grid = np.rint(np.logspace(lo, hi, max(points, 1))).astype(np.int64)
    return sorted(set(int(g) for g in grid))

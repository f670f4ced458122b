"""Chebychev and Markov-inequality confidence intervals, and the CLT reference.

Every constructor returns a :class:`ConfidenceInterval`.  Intervals are open;
:meth:`ConfidenceInterval.contains` uses strict inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

from ._random import normal_quantile

Kind = Literal["asymptotic-T1", "fixed-n-T2", "stationary-C1", "moment-T3",
               "clt-reference", "enlarged-T5"]

DEFAULT_EPSILON = 1e-3


@dataclass(frozen=True)
class ConfidenceInterval:
    center: float
    half_width_lower: float
    half_width_upper: float
    alpha: float
    kind: Kind
    n: int | None = None
    extras: dict[str, float] = field(default_factory=dict, compare=True)

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.half_width_lower < 0 or self.half_width_upper < 0:
            raise ValueError("half-widths must be nonnegative")

    @property
    def lower(self) -> float:
        return self.center - self.half_width_lower

    @property
    def upper(self) -> float:
        return self.center + self.half_width_upper

    @property
    def width(self) -> float:
        return self.half_width_lower + self.half_width_upper

    def contains(self, value: float) -> bool:
        return self.lower < value < self.upper


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def _check_B(B: float) -> None:
    if not B > 0.0:
        raise ValueError(f"B must be positive, got {B}")


def _chebychev_scale(n: int, alpha: float, B: float) -> float:
    """B / sqrt(n alpha): the stationary Chebychev half-width."""
    return B / math.sqrt(n * alpha)


def _symmetric(e_n, hw, alpha, kind, n, **extras) -> ConfidenceInterval:
    return ConfidenceInterval(e_n, hw, hw, alpha, kind, n, extras)


def interval_t1(e_n: float, n: int, alpha: float, B: float,
                epsilon: float = DEFAULT_EPSILON) -> ConfidenceInterval:
    """Asymptotic interval from an asymptotic-variance bound alone.

    Half-width ``(1 + epsilon) B / sqrt(n alpha)``; valid from almost every
    start state, with no bias or CLT assumption.
    """
    _check_n(n)
    _check_alpha(alpha)
    _check_B(B)
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    return _symmetric(e_n, (1.0 + epsilon) * _chebychev_scale(n, alpha, B), alpha,
                      "asymptotic-T1", n, epsilon=epsilon)


def interval_t2(e_n: float, n: int, alpha: float, B: float, C: float) -> ConfidenceInterval:
    """Fixed-n interval from ``n Var(e_n) <= B^2`` and ``|bias| <= C``.

    ``delta = C / (B/sqrt(n alpha) + C)`` and ``a_n = B / (sqrt(n alpha) (1 - delta))``.
    ``1 - delta`` is formed as ``s / (s + C)`` rather than by subtraction so
    the result stays accurate when C dominates.
    """
    _check_n(n)
    _check_alpha(alpha)
    _check_B(B)
    if not C >= 0.0:
        raise ValueError(f"C must be >= 0, got {C}")
    s = _chebychev_scale(n, alpha, B)
    delta = C / (s + C)
    a_n = s / (s / (s + C))
    return _symmetric(e_n, a_n, alpha, "fixed-n-T2", n, delta=delta, a_n=a_n, C=C)


def interval_c1(e_n: float, n: int, alpha: float, B: float) -> ConfidenceInterval:
    """Fixed-n interval for a chain already in stationarity (zero bias)."""
    t2 = interval_t2(e_n, n, alpha, B, 0.0)
    return replace(t2, kind="stationary-C1")


def interval_t3(e_n: float, gamma_n: float, alpha: float, n: int | None = None) -> ConfidenceInterval:
    """Markov-inequality interval from ``E|e_n - pi(h)| <= gamma_n``: half-width gamma_n / alpha."""
    _check_alpha(alpha)
    if not gamma_n > 0.0:
        raise ValueError(f"gamma_n must be positive, got {gamma_n}")
    if n is not None:
        _check_n(n)
    return _symmetric(e_n, gamma_n / alpha, alpha, "moment-T3", n, gamma_n=gamma_n)


def enlarge_t5(ci: ConfidenceInterval, c: float, r: float, n: int) -> ConfidenceInterval:
    """Widen both sides by ``c n^-r`` so a stationary-start interval covers fixed starts."""
    if not c > 0.0:
        raise ValueError(f"c must be positive, got {c}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    _check_n(n)
    pad = c * n ** -r
    extras = dict(ci.extras, c=c, r=r, enlargement=pad)
    return replace(ci, half_width_lower=ci.half_width_lower + pad,
                   half_width_upper=ci.half_width_upper + pad,
                   kind="enlarged-T5", n=n, extras=extras)


def clt_reference_interval(e_n: float, n: int, alpha: float, B: float) -> ConfidenceInterval:
    """Normal-approximation interval ``e_n +/- z_{1-alpha/2} B / sqrt(n)``, for width comparison only."""
    _check_n(n)
    _check_alpha(alpha)
    _check_B(B)
    z = normal_quantile(1.0 - alpha / 2.0)
    return _symmetric(e_n, z * B / math.sqrt(n), alpha, "clt-reference", n, z=z)


def width_ratio(a: ConfidenceInterval, b: ConfidenceInterval) -> float:
    if not b.width > 0.0:
        raise ValueError("denominator interval has zero width")
    if not a.width > 0.0:
        raise ValueError("numerator interval has zero width")
    return a.width / b.width

"""Point estimates and variance / first-moment bounds computed from traces."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .chains import FunctionalTrace

GAMMA_FLOOR = 1e-15


@dataclass(frozen=True)
class VarianceBound:
    """``B_squared`` bounds (or estimates) lim sup n Var(e_n)."""

    B_squared: float
    source: Literal["assumed", "batch-means", "repeated-runs"]
    n_used: int

    def __post_init__(self):
        if not self.B_squared >= 0.0:
            raise ValueError(f"B_squared must be >= 0, got {self.B_squared}")

    @property
    def B(self) -> float:
        return math.sqrt(self.B_squared)

    def inflated(self, factor: float) -> "VarianceBound":
        """Same bound with B_squared multiplied by ``factor`` (>= 1 for a safety margin)."""
        if factor <= 0:
            raise ValueError(f"inflation factor must be positive, got {factor}")
        return VarianceBound(self.B_squared * factor, self.source, self.n_used)


@dataclass(frozen=True)
class MomentBound:
    gamma_n: float
    n: int
    source: Literal["assumed", "repeated-runs"]

    def __post_init__(self):
        if not self.gamma_n > 0.0:
            raise ValueError(f"gamma_n must be positive, got {self.gamma_n}")


def _values(trace: FunctionalTrace | Sequence[float] | np.ndarray) -> np.ndarray:
    if isinstance(trace, FunctionalTrace):
        return trace.values
    return np.asarray(trace, dtype=np.float64)


def running_mean(trace: FunctionalTrace | Sequence[float] | np.ndarray) -> float:
    """e_n, accumulated with exactly rounded summation."""
    v = _values(trace)
    if v.size == 0:
        raise ValueError("cannot average an empty trace")
    return math.fsum(v.tolist()) / v.size


def batch_means_variance(trace: FunctionalTrace | np.ndarray, batch_count: int) -> VarianceBound:
    """Batch-means estimate of the asymptotic variance.

    The first ``n mod batch_count`` samples are dropped so the batches tile
    the tail of the run exactly.
    """
    v = _values(trace)
    if batch_count < 2:
        raise ValueError(f"batch_count must be >= 2, got {batch_count}")
    if v.size < 2 * batch_count:
        raise ValueError(
            f"need at least {2 * batch_count} samples for {batch_count} batches, got {v.size}")
    length = v.size // batch_count
    used = v[v.size - length * batch_count:].reshape(batch_count, length)
    means = [math.fsum(row) / length for row in used.tolist()]
    return VarianceBound(length * statistics.variance(means), "batch-means", length * batch_count)


def repeated_runs_variance(traces: Sequence[FunctionalTrace]) -> VarianceBound:
    """n times the unbiased sample variance of independent replications' means."""
    if len(traces) < 2:
        raise ValueError(f"need at least 2 traces, got {len(traces)}")
    n = traces[0].n
    if any(t.n != n for t in traces):
        raise ValueError("all traces must have the same length")
    if any(t.chain_id != traces[0].chain_id for t in traces):
        raise ValueError("all traces must come from the same chain")
    means = [running_mean(t) for t in traces]
    return VarianceBound(n * statistics.variance(means), "repeated-runs", n * len(traces))


def first_moment_bound(traces: Sequence[FunctionalTrace], true_value: float) -> MomentBound:
    """Conservative gamma_n >= E|e_n - pi(h)| from replications with a known truth.

    The sample mean absolute error is inflated by ``1 + 2/sqrt(R)`` and
    floored at 1e-15 so degenerate chains still give a usable bound.
    """
    R = len(traces)
    if R < 2:
        raise ValueError(f"need at least 2 traces, got {R}")
    n = traces[0].n
    if any(t.n != n for t in traces):
        raise ValueError("all traces must have the same length")
    mae = math.fsum(abs(running_mean(t) - true_value) for t in traces) / R
    return MomentBound(max(mae * (1.0 + 2.0 / math.sqrt(R)), GAMMA_FLOOR), n, "repeated-runs")

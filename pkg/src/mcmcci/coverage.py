"""Monte Carlo coverage laboratory.

Runs ``R`` seeded replications of a chain, builds one interval per
replication and counts how often the interval contains the known pi(h).
Replication ``i`` always uses the stream ``(master_seed, 0, i)``; oracle
runs that supply B or gamma use the disjoint streams ``(master_seed, 1, j)``
so the covered traces are never reused to size their own intervals.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Literal, Sequence

from . import intervals as iv
from .chains import (FUNCTIONALS, Functional, FunctionalTrace, MarkovKernel, StartMode,
                     exact_bias_sqrt_bias, known_truth, make_kernel, simulate_trace)
from .estimators import batch_means_variance, first_moment_bound, repeated_runs_variance, running_mean

Method = Literal["t1", "t2", "c1", "t3", "t5", "clt-ref"]
METHODS = ("t1", "t2", "c1", "t3", "t5", "clt-ref")

REPLICATION_STREAM = 0
ORACLE_STREAM = 1


@dataclass(frozen=True)
class ExperimentPlan:
    chain: str
    n: int
    R: int
    master_seed: int
    method: Method = "t1"
    chain_params: dict[str, float] = field(default_factory=dict)
    functional: str = "identity"
    start: StartMode = "stationary"
    alpha: float = 0.05
    epsilon: float = iv.DEFAULT_EPSILON
    B: float | None = None
    B_source: Literal["assumed", "oracle", "batch-means"] = "oracle"
    B_inflation: float = 1.0
    batch_count: int = 20
    C: float | None = None
    C_source: Literal["assumed", "exact-example1"] = "assumed"
    gamma: float | None = None
    gamma_source: Literal["assumed", "oracle"] = "oracle"
    c: float = 1.0
    r: float = 0.5
    t5_base: Literal["c1", "t1", "clt-ref"] = "c1"
    oracle_runs: int = 200
    oracle_start: StartMode | None = None

    def __post_init__(self):
        if self.R < 2:
            raise ValueError(f"R must be >= 2, got {self.R}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.oracle_runs < 2:
            raise ValueError(f"oracle_runs must be >= 2, got {self.oracle_runs}")
        if self.B_source == "assumed" and self.method != "t3" and self.B is None:
            raise ValueError("B_source 'assumed' needs a value for B")
        if self.method == "t2" and self.C_source == "assumed" and self.C is None:
            raise ValueError("method t2 with C_source 'assumed' needs a value for C")
        if self.method == "t3" and self.gamma_source == "assumed" and self.gamma is None:
            raise ValueError("method t3 with gamma_source 'assumed' needs a value for gamma")

    @property
    def trace_key(self) -> tuple:
        """Fields that fix the simulated traces; plans sharing it share traces."""
        return (self.chain, tuple(sorted(self.chain_params.items())), self.functional,
                self.n, self.R, str(self.start), self.master_seed)

    def kernel(self) -> MarkovKernel:
        return make_kernel(self.chain, **self.chain_params)

    def make_functional(self) -> Functional:
        return FUNCTIONALS[self.functional]()


@dataclass(frozen=True)
class CoverageReport:
    R: int
    hits: int
    empirical_coverage: float
    mc_standard_error: float
    mean_width: float
    truth: float
    B_squared: float | None
    C: float | None
    gamma: float | None
    plan: ExperimentPlan

    def as_row(self) -> dict:
        p = self.plan
        return {
            "chain": p.chain,
            "chain_params": ";".join(f"{k}={v}" for k, v in sorted(p.kernel().params.items())),
            "functional": p.functional,
            "start": str(p.start),
            "method": p.method,
            "n": p.n,
            "R": self.R,
            "alpha": p.alpha,
            "truth": self.truth,
            "B_squared": self.B_squared,
            "C": self.C,
            "gamma": self.gamma,
            "hits": self.hits,
            "empirical_coverage": self.empirical_coverage,
            "mc_standard_error": self.mc_standard_error,
            "mean_width": self.mean_width,
            "seed": p.master_seed,
        }


def _simulate(kernel, functional, n, count, start, master_seed, stream, workers):
    def one(i):
        return simulate_trace(kernel, functional, n, start, (master_seed, stream, i))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(count)))
    return [one(i) for i in range(count)]


class _Oracle:
    """Lazily simulated independent runs shared by plans with the same trace key."""

    def __init__(self, kernel, functional, workers):
        self.kernel = kernel
        self.functional = functional
        self.workers = workers
        self._cache: dict = {}

    def traces(self, plan: ExperimentPlan) -> list[FunctionalTrace]:
        start = plan.start if plan.oracle_start is None else plan.oracle_start
        key = (plan.n, plan.oracle_runs, str(start), plan.master_seed)
        if key not in self._cache:
            self._cache[key] = _simulate(self.kernel, self.functional, plan.n, plan.oracle_runs,
                                         start, plan.master_seed, ORACLE_STREAM, self.workers)
        return self._cache[key]


def _resolve_C(plan: ExperimentPlan) -> float:
    if plan.C_source == "exact-example1":
        if plan.chain != "sqrt-bias" or plan.functional != "indicator" or str(plan.start) != "1":
            raise ValueError("exact-example1 bias needs the sqrt-bias chain, indicator functional, start 1")
        return exact_bias_sqrt_bias(plan.n)
    return float(plan.C)


def _build(plan: ExperimentPlan, trace: FunctionalTrace, e_n: float, B: float | None,
           C: float | None, gamma: float | None) -> iv.ConfidenceInterval:
    if plan.B_source == "batch-means" and plan.method != "t3":
        B = math.sqrt(plan.B_inflation * batch_means_variance(trace, plan.batch_count).B_squared)
    m = plan.method
    if m == "t1":
        return iv.interval_t1(e_n, plan.n, plan.alpha, B, plan.epsilon)
    if m == "t2":
        return iv.interval_t2(e_n, plan.n, plan.alpha, B, C)
    if m == "c1":
        return iv.interval_c1(e_n, plan.n, plan.alpha, B)
    if m == "t3":
        return iv.interval_t3(e_n, gamma, plan.alpha, plan.n)
    if m == "clt-ref":
        return iv.clt_reference_interval(e_n, plan.n, plan.alpha, B)
    base = {"c1": lambda: iv.interval_c1(e_n, plan.n, plan.alpha, B),
            "t1": lambda: iv.interval_t1(e_n, plan.n, plan.alpha, B, plan.epsilon),
            "clt-ref": lambda: iv.clt_reference_interval(e_n, plan.n, plan.alpha, B)}[plan.t5_base]()
    return iv.enlarge_t5(base, plan.c, plan.r, plan.n)


def _evaluate(plan: ExperimentPlan, traces: Sequence[FunctionalTrace], truth: float,
              oracle: _Oracle) -> CoverageReport:
    B_sq = C = gamma = None
    if plan.method != "t3":
        if plan.B_source == "assumed":
            B_sq = plan.B_inflation * float(plan.B) ** 2
        elif plan.B_source == "oracle":
            B_sq = plan.B_inflation * repeated_runs_variance(oracle.traces(plan)).B_squared
    if plan.method == "t2":
        C = _resolve_C(plan)
    if plan.method == "t3":
        gamma = (float(plan.gamma) if plan.gamma_source == "assumed"
                 else first_moment_bound(oracle.traces(plan), truth).gamma_n)
    B = None if B_sq is None else math.sqrt(B_sq)
    hits = 0
    width_sum = []
    for trace in traces:
        ci = _build(plan, trace, running_mean(trace), B, C, gamma)
        hits += ci.contains(truth)
        width_sum.append(ci.width)
    R = len(traces)
    p_hat = hits / R
    return CoverageReport(
        R=R, hits=hits, empirical_coverage=p_hat,
        mc_standard_error=math.sqrt(p_hat * (1.0 - p_hat) / R),
        mean_width=math.fsum(width_sum) / R, truth=truth,
        B_squared=B_sq, C=C, gamma=gamma, plan=plan)


def run_coverage(plan: ExperimentPlan, workers: int = 1) -> CoverageReport:
    """Empirical coverage of one interval method; deterministic in ``plan.master_seed``."""
    return compare_methods([plan], workers=workers)[0]


def compare_methods(plans: Sequence[ExperimentPlan], workers: int = 1) -> list[CoverageReport]:
    """Evaluate several interval methods on one shared set of traces."""
    if not plans:
        raise ValueError("no plans given")
    key = plans[0].trace_key
    for p in plans[1:]:
        if p.trace_key != key:
            raise ValueError("plans must share chain, functional, n, R, start and master seed")
    first = plans[0]
    kernel = first.kernel()
    functional = first.make_functional()
    truth = known_truth(kernel, functional)
    traces = _simulate(kernel, functional, first.n, first.R, first.start, first.master_seed,
                       REPLICATION_STREAM, workers)
    oracle = _Oracle(kernel, functional, workers)
    return [_evaluate(p, traces, truth, oracle) for p in plans]


def plan_to_dict(plan: ExperimentPlan) -> dict:
    return asdict(plan)

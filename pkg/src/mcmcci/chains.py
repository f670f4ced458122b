"""Markov kernels, the built-in chain zoo, and exact oracles for the sqrt-bias chain.

Every kernel consumes exactly one uniform draw per transition, so a path is a
deterministic function of its start state and the uniform stream.  Each
kernel carries both a scalar ``step`` and a vectorised ``path`` that must
agree bit for bit; the tests hold them to that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Union

import numpy as np

from ._random import make_rng, uniform_to_normal

State = Union[int, float]
StartMode = Union[Literal["stationary"], int, float]


class UnknownTruthError(LookupError):
    """The stationary expectation of a functional is not known in closed form."""


@dataclass(frozen=True)
class MarkovKernel:
    chain_id: str
    step: Callable[[State, float], State]
    path: Callable[[State, np.ndarray], np.ndarray]
    state_space: Literal["integer", "real"]
    exact_stationary_mean: float | None = None
    stationary_sampler: Callable[[float], State] | None = None
    params: dict[str, float] = field(default_factory=dict)

    def coerce_state(self, x: Any) -> State:
        if self.state_space == "integer":
            if isinstance(x, float) and not x.is_integer():
                raise ValueError(f"{self.chain_id} has integer states, got {x}")
            x = int(x)
            if x < 0:
                raise ValueError(f"{self.chain_id} states are nonnegative, got {x}")
            if self.chain_id == "two-state" and x > 1:
                raise ValueError(f"two-state chain lives on {{0, 1}}, got {x}")
            if self.chain_id == "constant" and x != 0:
                raise ValueError(f"constant chain lives on {{0}}, got {x}")
            return x
        return float(x)


@dataclass(frozen=True)
class Functional:
    name: str
    h: Callable[[np.ndarray], np.ndarray]
    bound_D: float | None = None
    constant: float | None = None

    def __call__(self, states: np.ndarray) -> np.ndarray:
        return np.asarray(self.h(np.asarray(states)), dtype=np.float64)

    def check_bound(self, values: np.ndarray) -> None:
        if self.bound_D is not None and values.size and np.max(np.abs(values)) > self.bound_D:
            raise AssertionError(
                f"|{self.name}(x)| exceeded its declared bound {self.bound_D}")


@dataclass(frozen=True)
class FunctionalTrace:
    values: np.ndarray
    chain_id: str
    start_mode: StartMode
    seed: tuple[int, ...]
    states: np.ndarray | None = None

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("a trace needs at least one value")

    @property
    def n(self) -> int:
        return int(self.values.size)


# -- functionals ------------------------------------------------------------

def identity() -> Functional:
    return Functional("identity", lambda x: x.astype(np.float64))


def indicator() -> Functional:
    """``f(0) = 0`` and ``f(x) = 1`` for ``x >= 1``."""
    return Functional("indicator", lambda x: (x >= 1).astype(np.float64), bound_D=1.0)


def constant(value: float = 1.0) -> Functional:
    return Functional("constant", lambda x: np.full(np.shape(x), value, dtype=np.float64),
                      bound_D=abs(value), constant=value)


FUNCTIONALS: dict[str, Callable[..., Functional]] = {
    "identity": identity,
    "indicator": indicator,
    "constant": constant,
}


# -- the sqrt-bias chain ----------------------------------------------------

def step_sqrt_bias(state: int, u: float) -> int:
    """One transition: ``x -> x + 1`` w.p. sqrt(x / (x + 1)), else ``x -> 0``; 0 is absorbing."""
    if state < 0:
        raise ValueError(f"state must be nonnegative, got {state}")
    if state == 0:
        return 0
    return state + 1 if u < math.sqrt(state / (state + 1)) else 0


def _sqrt_bias_path(start: int, u: np.ndarray) -> np.ndarray:
    n = u.size
    out = np.zeros(n, dtype=np.int64)
    if start == 0 or n == 0:
        return out
    before = start + np.arange(n, dtype=np.int64)
    survive = u < np.sqrt(before / (before + 1))
    dead = np.flatnonzero(~survive)
    alive = n if dead.size == 0 else int(dead[0])
    out[:alive] = before[:alive] + 1
    return out


def tail_probability_sqrt_bias(n: int) -> float:
    """P[X_n != 0] from X_0 = 1, which telescopes to 1 / sqrt(n + 1)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 1.0 / math.sqrt(n + 1)


def exact_bias_sqrt_bias(n: int) -> float:
    """Exact bias of the running mean of ``indicator`` from X_0 = 1 (the truth is 0)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.fsum(1.0 / math.sqrt(j + 1) for j in range(1, n + 1)) / n


def exact_bias_curve(n_max: int) -> np.ndarray:
    """``exact_bias_sqrt_bias(n)`` for n = 1..n_max as one array (index n - 1)."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    j = np.arange(1, n_max + 1, dtype=np.float64)
    terms = 1.0 / np.sqrt(j + 1.0)
    # Kahan-compensated prefix sums; plain cumsum drifts at n ~ 1e6
    sums = np.empty(n_max)
    s = 0.0
    comp = 0.0
    for k, t in enumerate(terms.tolist()):
        y = t - comp
        tot = s + y
        comp = (tot - s) - y
        s = tot
        sums[k] = s
    return sums / j


def make_sqrt_bias_kernel() -> MarkovKernel:
    return MarkovKernel(
        chain_id="sqrt-bias",
        step=step_sqrt_bias,
        path=_sqrt_bias_path,
        state_space="integer",
        exact_stationary_mean=0.0,
        stationary_sampler=lambda u: 0,
    )


# -- two-state chain ----------------------------------------------------------

def make_two_state_kernel(p01: float, p10: float) -> MarkovKernel:
    """Chain on {0, 1} flipping 0 -> 1 w.p. ``p01`` and 1 -> 0 w.p. ``p10``."""
    for name, p in (("p01", p01), ("p10", p10)):
        if not 0.0 < p <= 1.0:
            raise ValueError(f"{name} must lie in (0, 1], got {p}")
    pi1 = p01 / (p01 + p10)

    def step(state: int, u: float) -> int:
        if state == 0:
            return 1 if u < p01 else 0
        return 0 if u < p10 else 1

    def path(start: int, u: np.ndarray) -> np.ndarray:
        # each draw picks one of four maps on {0,1}: const 0, const 1, identity, flip
        from0 = u < p01
        from1 = u >= p10
        is_const = from0 == from1
        is_flip = from0 & ~from1
        n = u.size
        idx = np.arange(1, n + 1)
        last_reset = np.maximum.accumulate(np.where(is_const, idx, 0))
        base_vals = np.concatenate(([start], from0.astype(np.int64)))
        # base value: the constant at the last reset, or the start if none yet
        base = np.where(last_reset > 0, base_vals[last_reset], start)
        flips = np.concatenate(([0], np.cumsum(is_flip)))
        parity = (flips[idx] - flips[last_reset]) & 1
        return (base ^ parity).astype(np.int64)

    return MarkovKernel(
        chain_id="two-state",
        step=step,
        path=path,
        state_space="integer",
        exact_stationary_mean=pi1,
        stationary_sampler=lambda u: 1 if u < pi1 else 0,
        params={"p01": p01, "p10": p10},
    )


def two_state_asymptotic_variance(p01: float, p10: float) -> float:
    """Closed-form lim n Var(e_n) for the identity functional on the two-state chain."""
    pi1 = p01 / (p01 + p10)
    lam = 1.0 - p01 - p10
    return pi1 * (1.0 - pi1) * (1.0 + lam) / (1.0 - lam)


# -- AR(1) --------------------------------------------------------------------

def make_ar1_kernel(rho: float) -> MarkovKernel:
    """``X_{k+1} = rho X_k + Z_k`` with standard normal innovations."""
    if not abs(rho) < 1.0:
        raise ValueError(f"|rho| must be < 1 for an ergodic AR(1), got {rho}")
    sd = 1.0 / math.sqrt(1.0 - rho * rho)

    def step(state: float, u: float) -> float:
        return rho * state + float(uniform_to_normal(np.array([u]))[0])

    def path(start: float, u: np.ndarray) -> np.ndarray:
        z = uniform_to_normal(u).tolist()
        out = np.empty(len(z))
        x = float(start)
        for k, zk in enumerate(z):
            x = rho * x + zk
            out[k] = x
        return out

    return MarkovKernel(
        chain_id="ar1",
        step=step,
        path=path,
        state_space="real",
        exact_stationary_mean=0.0,
        stationary_sampler=lambda u: sd * float(uniform_to_normal(np.array([u]))[0]),
        params={"rho": rho},
    )


# -- degenerate chain ---------------------------------------------------------

def make_constant_kernel() -> MarkovKernel:
    """Single-state chain; every functional is constant along it."""
    return MarkovKernel(
        chain_id="constant",
        step=lambda state, u: 0,
        path=lambda start, u: np.zeros(u.size, dtype=np.int64),
        state_space="integer",
        exact_stationary_mean=0.0,
        stationary_sampler=lambda u: 0,
    )


def make_kernel(chain_id: str, **params: float) -> MarkovKernel:
    if chain_id == "two-state":
        return make_two_state_kernel(params.get("p01", 0.5), params.get("p10", 0.5))
    if chain_id == "ar1":
        return make_ar1_kernel(params.get("rho", 0.0))
    if chain_id == "sqrt-bias":
        return make_sqrt_bias_kernel()
    if chain_id == "constant":
        return make_constant_kernel()
    raise ValueError(f"unknown chain {chain_id!r}")


CHAINS = ("two-state", "ar1", "sqrt-bias", "constant")


def known_truth(kernel: MarkovKernel, functional: Functional) -> float:
    """pi(h) for the zoo's kernel/functional pairs that have a closed form."""
    if functional.constant is not None:
        return functional.constant
    cid = kernel.chain_id
    if functional.name == "identity" and kernel.exact_stationary_mean is not None:
        return kernel.exact_stationary_mean
    if functional.name == "indicator":
        if cid in ("two-state",):
            return kernel.exact_stationary_mean
        if cid in ("sqrt-bias", "constant"):
            return 0.0
        if cid == "ar1":
            sd = 1.0 / math.sqrt(1.0 - kernel.params["rho"] ** 2)
            return 0.5 * math.erfc(1.0 / (sd * math.sqrt(2.0)))
    raise UnknownTruthError(f"no closed-form pi({functional.name}) for chain {cid!r}")


# -- simulation ---------------------------------------------------------------

def simulate_trace(kernel: MarkovKernel, h: Functional, n: int, start: StartMode,
                   seed: int | tuple[int, ...], keep_states: bool = False) -> FunctionalTrace:
    """Run ``n`` transitions and return h(X_1), ..., h(X_n).

    ``seed`` is a master seed or a ``(master, index, ...)`` key.  A
    stationary start draws X_0 from the first uniform of the stream.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    key = (seed,) if isinstance(seed, int) else tuple(seed)
    rng = make_rng(*key)
    if start == "stationary":
        if kernel.stationary_sampler is None:
            raise ValueError(f"{kernel.chain_id} has no exact stationary sampler")
        x0 = kernel.stationary_sampler(float(rng.random()))
    else:
        x0 = kernel.coerce_state(start)
    states = kernel.path(x0, rng.random(n))
    values = h(states)
    h.check_bound(values)
    return FunctionalTrace(values=values, chain_id=kernel.chain_id, start_mode=start,
                           seed=key, states=states if keep_states else None)


def simulate_many(kernel: MarkovKernel, h: Functional, n: int, R: int, start: StartMode,
                  master_seed: int, stream: int = 0) -> list[FunctionalTrace]:
    """``R`` independent traces; replication ``i`` uses key ``(master_seed, stream, i)``."""
    return [simulate_trace(kernel, h, n, start, (master_seed, stream, i)) for i in range(R)]

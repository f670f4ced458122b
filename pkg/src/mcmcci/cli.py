"""Command-line front end.

Subcommands: interval, bias-bound, simulate, coverage, bias-sweep,
compare-widths.  Stochastic subcommands (simulate, coverage,
compare-widths) refuse to run without ``--seed``.

Exit statuses
    0  success
    2  usage error (unknown subcommand, method or flag)
    3  invalid parameter value
    4  missing ``--seed`` on a stochastic subcommand
    5  output path not writable
    6  ergodicity order too low (m <= 1/2)
    7  no closed-form truth for the requested chain/functional
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import intervals as iv
from .bias import OrderTooLowError, PolyErgodicityCert, bias_bound_t4, fit_bias_rate, geometric_grid
from .chains import CHAINS, FUNCTIONALS, UnknownTruthError, exact_bias_curve, make_kernel, simulate_trace
from .coverage import METHODS, ExperimentPlan, compare_methods
from .output import FORMATS, render

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_NO_SEED = 4
EXIT_OUTPUT = 5
EXIT_ORDER = 6
EXIT_TRUTH = 7

INTERVAL_METHODS = ("t1", "t2", "c1", "t3", "t5-enlarge", "clt-ref")

INTERVAL_FIELDS = ("kind", "center", "lower", "upper", "half_width_lower", "half_width_upper",
                   "alpha", "n", "epsilon", "delta", "a_n", "C", "gamma_n", "z", "c", "r",
                   "enlargement")


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


def count(text: str) -> int:
    """Positive-or-zero integer that also accepts forms like ``1e6``."""
    value = float(text)
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text}")
    return int(value)


def start_mode(text: str):
    if text == "stationary":
        return text
    value = float(text)
    return int(value) if value.is_integer() else value


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat 'key = value' file; flags override it")
    p.add_argument("--format", choices=FORMATS, default=None, help="output format (default csv)")
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")


def _chain_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--chain", choices=CHAINS, default=None)
    p.add_argument("--p01", type=float, default=None)
    p.add_argument("--p10", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--functional", choices=tuple(FUNCTIONALS), default=None)
    p.add_argument("--n", type=count, default=None)
    p.add_argument("--start", type=start_mode, default=None,
                   help="'stationary' or a start state")
    p.add_argument("--seed", type=count, default=None)


def _plan_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--R", type=count, default=None, help="replications")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--B-source", choices=("assumed", "oracle", "batch-means"), default=None)
    p.add_argument("--B-inflation", type=float, default=None)
    p.add_argument("--batch-count", type=count, default=None)
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--C-source", choices=("assumed", "exact-example1"), default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--gamma-source", choices=("assumed", "oracle"), default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--t5-base", choices=("c1", "t1", "clt-ref"), default=None)
    p.add_argument("--oracle-runs", type=count, default=None)
    p.add_argument("--oracle-start", type=start_mode, default=None)
    p.add_argument("--workers", type=count, default=None)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="mcmcci", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("interval", help="build one confidence interval")
    _common(p)
    p.add_argument("--method", choices=INTERVAL_METHODS, default=None)
    p.add_argument("--e-n", type=float, default=None, help="point estimate (default 0)")
    p.add_argument("--n", type=count, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--base", choices=("c1", "t1", "t2", "clt-ref"), default=None,
                   help="interval enlarged by t5-enlarge (default c1)")
    subs["interval"] = p

    p = sub.add_parser("bias-bound", help="bias bound from a polynomial-ergodicity certificate")
    _common(p)
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--Mx", type=float, default=None)
    p.add_argument("--D", type=float, default=None)
    p.add_argument("--n", type=count, default=None)
    p.add_argument("--beta", type=float, default=None, help="fixed beta (m >= 1 only)")
    p.add_argument("--beta-policy", choices=("optimal", "fixed"), default=None)
    subs["bias-bound"] = p

    p = sub.add_parser("simulate", help="write one trace as (step, state, h) rows")
    _common(p)
    _chain_flags(p)
    subs["simulate"] = p

    p = sub.add_parser("coverage", help="empirical coverage, one row per method")
    _common(p)
    _chain_flags(p)
    _plan_flags(p)
    p.add_argument("--method", default=None,
                   help=f"comma-separated subset of {','.join(METHODS)}")
    subs["coverage"] = p

    p = sub.add_parser("compare-widths", help="coverage and mean widths on shared traces")
    _common(p)
    _chain_flags(p)
    _plan_flags(p)
    p.add_argument("--methods", default=None, help="comma-separated, default t1,clt-ref")
    subs["compare-widths"] = p

    p = sub.add_parser("bias-sweep", help="exact sqrt-bias chain bias over a geometric n grid")
    _common(p)
    p.add_argument("--chain", choices=("sqrt-bias",), default=None)
    p.add_argument("--n-grid", default=None, help="start:stop:points-per-decade, e.g. 1e3:1e6:4")
    subs["bias-sweep"] = p

    return parser, subs


DEFAULTS = {
    "format": "csv", "e_n": 0.0, "alpha": 0.05, "epsilon": iv.DEFAULT_EPSILON, "base": "c1",
    "beta_policy": "optimal", "chain": "two-state",
    "R": 1000, "B_source": "oracle", "B_inflation": 1.0,
    "batch_count": 20, "C_source": "assumed", "gamma_source": "oracle", "c": 1.0, "r": 0.5,
    "t5_base": "c1", "oracle_runs": 200, "workers": 1, "method": "t1",
    "methods": "t1,clt-ref", "n_grid": "1e3:1e6:4",
}


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_INVALID) from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected 'key = value'", EXIT_INVALID)
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def _merge_config(args: argparse.Namespace, sub: argparse.ArgumentParser) -> None:
    config = read_config(args.config) if args.config else {}
    actions = {a.dest: a for a in sub._actions}
    for key, raw in config.items():
        if key not in actions or key == "config":
            raise CliError(f"unknown config key {key!r}", EXIT_INVALID)
        if getattr(args, key) is None:
            action = actions[key]
            try:
                value = action.type(raw) if action.type else raw
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise CliError(f"config key {key!r}: {exc}", EXIT_INVALID) from exc
            if action.choices is not None and value not in action.choices:
                raise CliError(f"config key {key!r} must be one of {action.choices}", EXIT_INVALID)
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, "absent") is None:
            setattr(args, key, value)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise CliError(f"missing required --{name.replace('_', '-')}", EXIT_INVALID)


def _need_seed(args):
    if args.seed is None:
        raise CliError("stochastic commands require --seed (no default seed)", EXIT_NO_SEED)


def _chain_params(args) -> dict[str, float]:
    params = {}
    if args.chain == "two-state":
        params = {"p01": 0.5 if args.p01 is None else args.p01,
                  "p10": 0.5 if args.p10 is None else args.p10}
    elif args.chain == "ar1":
        params = {"rho": 0.0 if args.rho is None else args.rho}
    return params


def _functional(args):
    if args.functional is not None:
        return args.functional
    return "indicator" if args.chain == "sqrt-bias" else "identity"


def _start(args):
    """Explicit --start, else 1 for the sqrt-bias chain and a stationary draw otherwise."""
    if args.start is not None:
        return args.start
    return 1 if args.chain == "sqrt-bias" else "stationary"


def interval_row(ci: iv.ConfidenceInterval) -> dict:
    row = dict.fromkeys(INTERVAL_FIELDS)
    row.update(kind=ci.kind, center=ci.center, lower=ci.lower, upper=ci.upper,
               half_width_lower=ci.half_width_lower, half_width_upper=ci.half_width_upper,
               alpha=ci.alpha, n=ci.n)
    for k, v in ci.extras.items():
        if k in row:
            row[k] = v
    return row


def cmd_interval(args) -> list[dict]:
    _need(args, "method")
    m = args.method
    if m == "t3":
        _need(args, "gamma")
        ci = iv.interval_t3(args.e_n, args.gamma, args.alpha, args.n)
        return [interval_row(ci)]
    _need(args, "n", "B")
    if m == "t1":
        ci = iv.interval_t1(args.e_n, args.n, args.alpha, args.B, args.epsilon)
    elif m == "t2":
        _need(args, "C")
        ci = iv.interval_t2(args.e_n, args.n, args.alpha, args.B, args.C)
    elif m == "c1":
        ci = iv.interval_c1(args.e_n, args.n, args.alpha, args.B)
    elif m == "clt-ref":
        ci = iv.clt_reference_interval(args.e_n, args.n, args.alpha, args.B)
    else:
        _need(args, "c")
        if args.r is None:
            args.r = 0.5
        if args.base == "t2":
            _need(args, "C")
            base = iv.interval_t2(args.e_n, args.n, args.alpha, args.B, args.C)
        elif args.base == "t1":
            base = iv.interval_t1(args.e_n, args.n, args.alpha, args.B, args.epsilon)
        elif args.base == "clt-ref":
            base = iv.clt_reference_interval(args.e_n, args.n, args.alpha, args.B)
        else:
            base = iv.interval_c1(args.e_n, args.n, args.alpha, args.B)
        ci = iv.enlarge_t5(base, args.c, args.r, args.n)
    return [interval_row(ci)]


def cmd_bias_bound(args) -> list[dict]:
    _need(args, "m", "Mx", "D", "n")
    policy = "optimal"
    if args.beta is not None or args.beta_policy == "fixed":
        _need(args, "beta")
        policy = args.beta
    cert = PolyErgodicityCert(args.m, args.Mx, args.D)
    bb = bias_bound_t4(cert, args.n, policy)
    return [{"C": bb.C, "n": bb.n, "provenance": bb.provenance, "beta_used": bb.beta_used,
             "m": cert.m, "Mx": cert.M_x, "D": cert.D}]


def cmd_simulate(args) -> list[dict]:
    _need(args, "n")
    _need_seed(args)
    kernel = make_kernel(args.chain, **_chain_params(args))
    h = FUNCTIONALS[_functional(args)]()
    start = _start(args)
    tr = simulate_trace(kernel, h, args.n, start, args.seed, keep_states=True)
    states = tr.states.tolist()
    return [{"step": k + 1, "state": s, "h": v}
            for k, (s, v) in enumerate(zip(states, tr.values.tolist()))]


def _plans(args, methods: Sequence[str]) -> list[ExperimentPlan]:
    _need(args, "n")
    _need_seed(args)
    start = _start(args)
    plans = []
    for method in methods:
        plans.append(ExperimentPlan(
            chain=args.chain, chain_params=_chain_params(args), functional=_functional(args),
            n=args.n, R=args.R, master_seed=args.seed, method=method, start=start,
            alpha=args.alpha, epsilon=args.epsilon, B=args.B, B_source=args.B_source,
            B_inflation=args.B_inflation, batch_count=args.batch_count, C=args.C,
            C_source=args.C_source, gamma=args.gamma, gamma_source=args.gamma_source,
            c=args.c, r=args.r, t5_base=args.t5_base, oracle_runs=args.oracle_runs,
            oracle_start=args.oracle_start))
    return plans


def _methods(text: str) -> list[str]:
    methods = [m.strip() for m in text.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise CliError(f"unknown method {m!r}; expected one of {','.join(METHODS)}", EXIT_USAGE)
    if not methods:
        raise CliError("no methods given", EXIT_USAGE)
    return methods


def cmd_coverage(args) -> list[dict]:
    reports = compare_methods(_plans(args, _methods(args.method)), workers=args.workers)
    return [r.as_row() for r in reports]


def cmd_compare_widths(args) -> list[dict]:
    """Coverage rows plus each method's mean width relative to the last method listed."""
    reports = compare_methods(_plans(args, _methods(args.methods)), workers=args.workers)
    ref = reports[-1].mean_width
    rows = []
    for rep in reports:
        row = rep.as_row()
        row["width_ratio"] = rep.mean_width / ref if ref > 0 else None
        rows.append(row)
    return rows


def cmd_bias_sweep(args) -> list[dict]:
    try:
        start, stop, per_decade = args.n_grid.split(":")
        grid = geometric_grid(float(start), float(stop), count(per_decade))
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise CliError(f"bad --n-grid {args.n_grid!r}: {exc}", EXIT_INVALID) from exc
    curve = exact_bias_curve(grid[-1])
    biases = [float(curve[n - 1]) for n in grid]
    slope = fit_bias_rate(grid, biases) if len(grid) >= 3 else None
    return [{"n": n, "exact_bias": b, "lower_bound": (n + 1) ** -0.5,
             "upper_bound": 2.0 * n ** -0.5, "slope": slope}
            for n, b in zip(grid, biases)]


COMMANDS = {
    "interval": cmd_interval,
    "bias-bound": cmd_bias_bound,
    "simulate": cmd_simulate,
    "coverage": cmd_coverage,
    "compare-widths": cmd_compare_widths,
    "bias-sweep": cmd_bias_sweep,
}


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_OUTPUT) from exc


def main(argv: Sequence[str] | None = None) -> int:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args, subs[args.command])
        rows = COMMANDS[args.command](args)
        _emit(render(rows, args.format), args.output)
    except CliError as exc:
        print(f"mcmcci {args.command}: {exc}", file=sys.stderr)
        return exc.status
    except OrderTooLowError as exc:
        print(f"mcmcci {args.command}: {exc}", file=sys.stderr)
        return EXIT_ORDER
    except UnknownTruthError as exc:
        print(f"mcmcci {args.command}: {exc}", file=sys.stderr)
        return EXIT_TRUTH
    except ValueError as exc:
        print(f"mcmcci {args.command}: invalid parameter: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Exact and simulated bias of the sqrt-bias chain, with the fitted log-log rate.

The simulated column averages R seeded runs from X_0 = 1, as a check on the
closed-form sum.
"""

import argparse
import math
import sys

from mcmcci.bias import fit_bias_rate, geometric_grid
from mcmcci.chains import exact_bias_curve, indicator, make_sqrt_bias_kernel, simulate_many
from mcmcci.estimators import running_mean
from mcmcci.output import render


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--R", type=int, default=2000, help="runs per n for the simulated column")
    ap.add_argument("--max-simulated-n", type=int, default=10 ** 4)
    ap.add_argument("--format", choices=("csv", "jsonl", "text"), default="csv")
    args = ap.parse_args(argv)

    grid = geometric_grid(10, 10 ** 6, 4)
    curve = exact_bias_curve(grid[-1])
    exact = [float(curve[n - 1]) for n in grid]
    slope = fit_bias_rate(grid, exact)
    kernel = make_sqrt_bias_kernel()
    rows = []
    for k, (n, b) in enumerate(zip(grid, exact)):
        sim = None
        if n <= args.max_simulated_n:
            traces = simulate_many(kernel, indicator(), n, args.R, 1, args.seed, stream=k)
            sim = math.fsum(running_mean(t) for t in traces) / args.R
        rows.append({"n": n, "exact_bias": b, "simulated_bias": sim,
                     "bias_times_sqrt_n": b * math.sqrt(n), "slope": slope})
    sys.stdout.write(render(rows, args.format))


if __name__ == "__main__":
    main()

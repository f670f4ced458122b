"""Coverage table across the chain zoo and interval methods.

    python scripts/coverage_lab.py --seed 1 --R 1000 > coverage.csv
"""

import argparse
import sys
from dataclasses import replace

from mcmcci.coverage import ExperimentPlan, compare_methods
from mcmcci.output import render


def experiments(seed, R):
    # (description, base plan, methods)
    yield ExperimentPlan(chain="two-state", chain_params={"p01": 0.5, "p10": 0.5}, n=10 ** 4, R=R,
                         master_seed=seed, oracle_runs=1000), ("t1", "c1", "clt-ref", "t3")
    yield ExperimentPlan(chain="two-state", chain_params={"p01": 0.1, "p10": 0.1}, n=10 ** 4, R=R,
                         master_seed=seed, oracle_runs=1000), ("t1", "c1", "clt-ref")
    # non-stationary start from the rarer state; stationary-start B, widened by c n^-r
    yield ExperimentPlan(chain="two-state", chain_params={"p01": 0.1, "p10": 0.3}, start=1,
                         n=10 ** 4, R=R, master_seed=seed, oracle_start="stationary",
                         oracle_runs=1000), ("c1", "t5", "t1")
    yield ExperimentPlan(chain="ar1", chain_params={"rho": 0.5}, start=0.0, n=10 ** 4, R=R,
                         master_seed=seed, oracle_start="stationary",
                         oracle_runs=500), ("t1", "t5", "clt-ref")
    # fixed-n interval with the exact bias of the sqrt-bias chain
    yield ExperimentPlan(chain="sqrt-bias", functional="indicator", start=1, n=100, R=R,
                         master_seed=seed, C_source="exact-example1", C=None,
                         oracle_runs=1000), ("t2", "c1", "t3")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--R", type=int, default=1000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--format", choices=("csv", "jsonl", "text"), default="csv")
    args = ap.parse_args(argv)
    rows = []
    for base, methods in experiments(args.seed, args.R):
        plans = [replace(base, method=m) for m in methods]
        rows += [r.as_row() for r in compare_methods(plans, workers=args.workers)]
    sys.stdout.write(render(rows, args.format))


if __name__ == "__main__":
    main()

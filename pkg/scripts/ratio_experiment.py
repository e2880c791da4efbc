#!/usr/bin/env python3
"""Sweep random Euclidean instances through the best-of-many pipeline and
report how the realized costs compare with the golden-ratio guarantee.

Usage: python scripts/ratio_experiment.py --count 100 --nmin 4 --nmax 12
"""

import argparse
import math
import sys

import numpy as np

from pathtsp.decompose import decompose
from pathtsp.exact import exact_path_tsp
from pathtsp.heldkarp import hk_solve
from pathtsp.instances import generate_random_metric
from pathtsp.narrowcuts import certificate_cost_bound, pairwise_forced_cuts
from pathtsp.solver import GOLDEN_RATIO, solve_bom, solve_hoogeveen


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--nmin", type=int, default=4)
    ap.add_argument("--nmax", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--variants", nargs="*", default=["simple53", "golden"])
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    worst_avg, worst_out, worst_vs_opt = 0.0, 0.0, 0.0
    fractional = 0
    margins = {v: math.inf for v in args.variants}
    for i in range(args.count):
        n = int(rng.integers(args.nmin, args.nmax + 1))
        inst = generate_random_metric(n, args.seed * 100_003 + i)
        hk = hk_solve(inst)
        combo = decompose(hk)
        sol = solve_bom(inst, hk=hk, combo=combo)
        if len(combo.trees) > 1:
            fractional += 1
        worst_avg = max(worst_avg, sol.weighted_average / hk.value)
        worst_out = max(worst_out, sol.cost / hk.value)
        if n <= 12:
            opt = exact_path_tsp(inst).optimum
            worst_vs_opt = max(worst_vs_opt, sol.cost / opt)
        pair_cuts = pairwise_forced_cuts(hk)
        for variant in args.variants:
            rep = certificate_cost_bound(inst, hk, combo, variant, pair_cuts)
            margins[variant] = min(margins[variant], rep.bound_value - rep.weighted_total)
        hoo = solve_hoogeveen(inst, hk)
        assert hoo.cost <= (5 / 3) * hk.value * (1 + 1e-6)

    print(f"instances: {args.count} (fractional LP: {fractional})")
    print(f"golden guarantee:           {GOLDEN_RATIO:.7f}")
    print(f"worst weighted-avg / LP:    {worst_avg:.7f}")
    print(f"worst output / LP:          {worst_out:.7f}")
    print(f"worst output / OPT:         {worst_vs_opt:.7f}")
    for variant, margin in margins.items():
        # simple53 sits exactly on its bound by construction, so its margin
        # is float noise around zero
        print(f"min {variant} bound margin (before 1e-6 slack): {margin:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

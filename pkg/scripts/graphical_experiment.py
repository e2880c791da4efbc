#!/usr/bin/env python3
"""Unit-weight graphical sweep: compare the layer-traversal candidate with
the golden-ratio pipeline and evaluate the three-case bound tables.

Usage: python scripts/graphical_experiment.py --count 40 --nmax 12
"""

import argparse
import sys

import numpy as np

from pathtsp.exact import exact_path_tsp
from pathtsp.graphical import (
    GAP_CONSTANTS,
    RATIO_CONSTANTS,
    build_layer_traversal,
    check_layer_connectivity,
    ratio_expression,
)
from pathtsp.heldkarp import hk_solve
from pathtsp.instances import GraphicalInstance, metric_closure
from pathtsp.narrowcuts import compute_narrow_cuts


def random_connected_graph(n, seed, density=0.35):
    rng = np.random.default_rng(seed)
    order = list(rng.permutation(n))
    edges = {(min(a, b), max(a, b)) for a, b in zip(order, order[1:])}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                edges.add((u, v))
    st = rng.choice(n, 2, replace=False)
    return GraphicalInstance(n, tuple(sorted(edges)), int(st[0]), int(st[1]))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--nmin", type=int, default=5)
    ap.add_argument("--nmax", type=int, default=12)
    ap.add_argument("--theta", type=float, default=RATIO_CONSTANTS[0])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rho, parts = ratio_expression(*RATIO_CONSTANTS)
    gap, _ = ratio_expression(*GAP_CONSTANTS, n=7)
    print(f"bound table: rho={rho:.6f} (cases {parts}), gap={gap:.6f}")

    rng = np.random.default_rng(args.seed)
    traversal_wins = 0
    worst_hc = 0.0
    for i in range(args.count):
        n = int(rng.integers(args.nmin, args.nmax + 1))
        g = random_connected_graph(n, args.seed * 31 + i, float(rng.uniform(0.2, 0.6)))
        inst = metric_closure(g)
        hk = hk_solve(inst)
        structure = compute_narrow_cuts(hk, 1.0 - args.theta)
        lt = build_layer_traversal(g, hk, args.theta, structure)
        conn = check_layer_connectivity(hk, structure, args.theta)
        assert conn.all_hold
        opt = exact_path_tsp(inst).optimum
        worst_hc = max(worst_hc, lt.hc_cost / opt)
        if lt.hc_cost <= opt + 1e-9:
            traversal_wins += 1

    print(f"instances: {args.count}")
    print(f"traversal optimal on {traversal_wins}/{args.count}")
    print(f"worst traversal / OPT: {worst_hc:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

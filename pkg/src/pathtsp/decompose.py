"""Convex-combination decomposition of a Held-Karp point into spanning trees.

A feasible point of the path relaxation lies in the spanning tree polytope,
so it can be written as sum(lambda_i * chi(T_i)). The construction here is
column generation: a master LP minimizes the L1 slack of matching the target
marginals over a growing tree pool, and the pricing step asks for the
maximum-weight spanning tree under the master's edge duals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantError, IterationLimitError, NotConnectedError
from .instances import EdgeVector, all_edges
from .simplex import LinearProgram, simplex_solve

SUPPORT_EPS = 1e-9
LAMBDA_PRUNE = 1e-9
RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class TreeCombination:
    trees: tuple[frozenset[tuple[int, int]], ...]
    lambdas: tuple[float, ...]
    residual: float

    def to_dict(self) -> dict:
        return {
            "lambdas": list(self.lambdas),
            "trees": [sorted([u, v] for u, v in t) for t in self.trees],
            "residual": self.residual,
        }


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def max_weight_spanning_tree(
    n: int,
    weights: EdgeVector,
    restrict_to_support: bool = True,
) -> frozenset[tuple[int, int]]:
    """Greedy maximum-weight spanning tree, ties broken by canonical edge order.

    With restrict_to_support, only edges keyed in `weights` are candidates
    (entries may be negative, e.g. LP duals); otherwise all of K_n competes,
    missing edges at weight 0.
    """
    if restrict_to_support:
        candidates = sorted(weights.values.items())
    else:
        candidates = [(e, weights.get(*e)) for e in all_edges(n)]
    candidates.sort(key=lambda ew: (-ew[1], ew[0]))
    ds = _DisjointSet(n)
    tree = []
    for e, _ in candidates:
        if ds.union(*e):
            tree.append(e)
            if len(tree) == n - 1:
                break
    if len(tree) != n - 1:
        raise NotConnectedError("candidate edge set does not span all vertices")
    return frozenset(tree)


def _tree_is_spanning(tree: frozenset, n: int) -> bool:
    if len(tree) != n - 1:
        return False
    ds = _DisjointSet(n)
    return all(ds.union(u, v) for u, v in tree)


def decompose(xstar, n: int | None = None, tol: float = RESIDUAL_TOL) -> TreeCombination:
    """Express x* as a convex combination of spanning trees of its support.

    Accepts an HKSolution or a bare EdgeVector (then n must be given).
    Raises when the achieved max-norm residual exceeds tol, which signals
    that x* is outside the spanning tree polytope, i.e. an upstream bug.
    """
    if hasattr(xstar, "x"):
        x: EdgeVector = xstar.x
        n = xstar.n
    else:
        x = xstar
        if n is None:
            raise ValueError("n is required when passing a bare EdgeVector")
    support = x.support(SUPPORT_EPS)
    target = {e: x.values[e] for e in support}
    m = len(support)
    trees: list[frozenset] = [max_weight_spanning_tree(n, EdgeVector(target))]
    idx = {e: i for i, e in enumerate(support)}
    cap_rounds = max(20 * m, 20)
    lambdas: list[float] = [1.0]
    slack = float("inf")
    for _ in range(cap_rounds):
        k = len(trees)
        width = k + 2 * m
        objective = [0.0] * k + [1.0] * (2 * m)
        rows = []
        for e, i in idx.items():
            coeffs = [0.0] * width
            for j, tree in enumerate(trees):
                if e in tree:
                    coeffs[j] = 1.0
            coeffs[k + i] = 1.0  # sigma+
            coeffs[k + m + i] = -1.0  # sigma-
            rows.append((coeffs, "=", target[e]))
        rows.append(([1.0] * k + [0.0] * (2 * m), "=", 1.0))
        lp = LinearProgram(
            tuple(objective), tuple(rows), tuple((0.0, None) for _ in range(width))
        )
        res = simplex_solve(lp)
        if res.status != "optimal":
            raise InvariantError(f"decomposition master LP came back {res.status}")
        lambdas = list(res.x[:k])
        slack = res.objective
        duals = res.row_duals
        edge_duals = EdgeVector({e: duals[i] for e, i in idx.items()})
        mu = duals[m]
        priced = max_weight_spanning_tree(n, edge_duals, restrict_to_support=True)
        priced_weight = sum(edge_duals.get(*e) for e in priced)
        if slack <= 1e-10 or priced_weight + mu <= 1e-9 or priced in trees:
            break
        trees.append(priced)
    else:
        raise IterationLimitError(
            f"decomposition stalled with L1 slack {slack:.3g} after {cap_rounds} rounds"
        )

    kept = [(t, l) for t, l in zip(trees, lambdas) if l > LAMBDA_PRUNE]
    total = sum(l for _, l in kept)
    if total <= 0:
        raise InvariantError("decomposition lost all tree mass")
    kept = [(t, l / total) for t, l in kept]
    combined = EdgeVector()
    for tree, lam in kept:
        combined = combined.add(EdgeVector.from_edges(tree), lam)
    residual = _max_residual(combined, x)
    if residual > tol:
        raise IterationLimitError(
            f"decomposition residual {residual:.3g} exceeds tolerance {tol:.3g}"
        )
    return TreeCombination(
        trees=tuple(t for t, _ in kept),
        lambdas=tuple(l for _, l in kept),
        residual=residual,
    )


def _max_residual(combined: EdgeVector, x: EdgeVector) -> float:
    keys = set(combined.values) | set(x.values)
    return max(
        (abs(combined.values.get(e, 0.0) - x.values.get(e, 0.0)) for e in keys),
        default=0.0,
    )


def verify_combination(xstar, combo: TreeCombination, tol: float = RESIDUAL_TOL):
    """Check every TreeCombination invariant against x*; returns (ok, max deviation)."""
    if hasattr(xstar, "x"):
        x: EdgeVector = xstar.x
        n = xstar.n
    else:
        x = xstar
        n = 1 + max(v for e in x.values for v in e)
    ok = True
    support = set(x.support(SUPPORT_EPS / 2))
    for tree in combo.trees:
        if not _tree_is_spanning(tree, n):
            ok = False
        if any(e not in support for e in tree):
            ok = False
    if abs(sum(combo.lambdas) - 1.0) > 1e-9 or any(l < 0 for l in combo.lambdas):
        ok = False
    if len(combo.trees) > len(support) + 1:
        ok = False
    combined = EdgeVector()
    for tree, lam in zip(combo.trees, combo.lambdas):
        combined = combined.add(EdgeVector.from_edges(tree), lam)
    deviation = _max_residual(combined, x)
    if deviation > tol:
        ok = False
    return ok, deviation

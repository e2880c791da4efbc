"""Path-variant Held-Karp relaxation solved by row generation.

The LP keeps the degree equalities (1 at each endpoint, 2 elsewhere) and
grows cut rows lazily: s-t separating cuts must carry capacity at least 1,
all other cuts at least 2. Separation runs min-cut probes under the current
fractional solution -- one s-t probe plus, with s and t merged into a
super-node, one probe per internal vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantError, IterationLimitError
from .instances import EdgeVector, Instance, all_edges
from .maxflow import min_cut_merged
from .simplex import LinearProgram, simplex_solve

HK_TOL = 1e-7


@dataclass(frozen=True)
class CutQuery:
    vertices: frozenset[int]
    capacity: float
    kind: str  # "st" | "nonseparating"

    @property
    def required(self) -> float:
        return 1.0 if self.kind == "st" else 2.0

    @property
    def violation(self) -> float:
        return self.required - self.capacity


@dataclass(frozen=True)
class HKSolution:
    x: EdgeVector
    value: float
    iterations: int
    tight_cuts: tuple[frozenset[int], ...]
    n: int
    s: int
    t: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "x": self.x.to_pairs(),
            "iterations": self.iterations,
        }


def _probe_cuts(x: EdgeVector, inst: Instance) -> list[CutQuery]:
    """All separation probes for the current point, one CutQuery each."""
    n, s, t = inst.n, inst.s, inst.t
    weights = np.maximum(x.to_matrix(n), 0.0)
    probes: list[CutQuery] = []
    cap, side = min_cut_merged(weights, [s], [t])
    if t in side:
        side = frozenset(range(n)) - side
    probes.append(CutQuery(side, cap, "st"))
    for v in range(n):
        if v in (s, t):
            continue
        cap, side = min_cut_merged(weights, [v], [s, t])
        probes.append(CutQuery(side, cap, "nonseparating"))
    return probes


def separate(x: EdgeVector, inst: Instance, tol: float = HK_TOL) -> CutQuery | None:
    """Most-violated cut constraint, or None if x is cut-feasible.

    Ties on violation break toward the lexicographically smallest sorted
    vertex set, making the answer deterministic.
    """
    violated = [q for q in _probe_cuts(x, inst) if q.violation > tol]
    if not violated:
        return None
    return min(violated, key=lambda q: (-q.violation, sorted(q.vertices)))


def _degree_rows(n: int, s: int, t: int, edges, width: int, offset: int = 0):
    rows = []
    index = {e: i for i, e in enumerate(edges)}
    for v in range(n):
        coeffs = [0.0] * width
        for u in range(n):
            if u == v:
                continue
            e = (min(u, v), max(u, v))
            coeffs[offset + index[e]] = 1.0
        rhs = 1.0 if v in (s, t) else 2.0
        rows.append((coeffs, "=", rhs))
    return rows


def _cut_row(side: frozenset[int], edges, width: int, required: float, offset: int = 0):
    coeffs = [0.0] * width
    for i, (u, v) in enumerate(edges):
        if (u in side) != (v in side):
            coeffs[offset + i] = 1.0
    return (coeffs, ">=", required)


def hk_solve(inst: Instance, tol: float = HK_TOL) -> HKSolution:
    """Optimal solution of the path-variant Held-Karp relaxation."""
    n, s, t = inst.n, inst.s, inst.t
    if n == 2:
        x = EdgeVector({(min(s, t), max(s, t)): 1.0})
        return HKSolution(x, inst.c(s, t), 0, (), n, s, t)
    edges = all_edges(n)
    m = len(edges)
    objective = tuple(inst.cost[u, v] for u, v in edges)
    base_rows = _degree_rows(n, s, t, edges, m)
    bounds = tuple((0.0, 2.0) for _ in edges)
    cut_rows: list[tuple] = []
    seen: set[frozenset[int]] = set()
    tight: list[frozenset[int]] = []
    cap_rounds = 50 * n * n
    last: HKSolution | None = None
    for rounds in range(1, cap_rounds + 1):
        lp = LinearProgram(objective, tuple(base_rows + cut_rows), bounds)
        res = simplex_solve(lp)
        if res.status != "optimal":
            raise InvariantError(f"Held-Karp LP came back {res.status}")
        x = EdgeVector(
            {e: v for e, v in zip(edges, res.x) if v > 1e-12}
        )
        last = HKSolution(x, res.objective, rounds, tuple(tight), n, s, t)
        new = [
            q
            for q in _probe_cuts(x, inst)
            if q.violation > tol and q.vertices not in seen
        ]
        if not new:
            return last
        for q in new:
            seen.add(q.vertices)
            tight.append(q.vertices)
            cut_rows.append(_cut_row(q.vertices, edges, m, q.required))
    raise IterationLimitError(
        f"Held-Karp separation did not converge within {cap_rounds} rounds",
        best=last,
    )


@dataclass(frozen=True)
class HKReport:
    degree_violations: tuple[tuple[int, float, float], ...]  # (vertex, value, required)
    cut_violations: tuple[tuple[frozenset[int], float, float], ...]

    @property
    def ok(self) -> bool:
        return not self.degree_violations and not self.cut_violations


def hk_verify(x: EdgeVector, inst: Instance, tol: float = HK_TOL) -> HKReport:
    """Check degree equalities and cut constraints against x.

    Cuts are enumerated exhaustively for n <= 16; beyond that the flow-based
    separation provides the (single) most-violated witness.
    """
    from .exact import CUT_ENUM_CAP, enumerate_cut_check

    n, s, t = inst.n, inst.s, inst.t
    degree = np.zeros(n)
    for (u, v), w in x.values.items():
        degree[u] += w
        degree[v] += w
    deg_bad = []
    for v in range(n):
        want = 1.0 if v in (s, t) else 2.0
        if abs(degree[v] - want) > tol:
            deg_bad.append((v, float(degree[v]), want))
    if n <= CUT_ENUM_CAP:
        cut_bad = enumerate_cut_check(x, inst, ("hk",), tol=tol)
    else:
        worst = separate(x, inst, tol)
        cut_bad = [] if worst is None else [
            (worst.vertices, worst.capacity, worst.required)
        ]
    return HKReport(tuple(deg_bad), tuple(cut_bad))

"""Shared fixtures and independent test oracles.

The oracles here (BFS distances, Edmonds-Karp flow, full exponential LP)
are deliberately written against different primitives than the package so
that agreement is meaningful.
"""

from __future__ import annotations

from collections import deque

import numpy as np
import pytest

from pathtsp.instances import GraphicalInstance, Instance


@pytest.fixture
def unit_triangle():
    """n=3 with all unit costs, s=0, t=1, internal vertex 2."""
    cost = np.ones((3, 3)) - np.eye(3)
    return Instance(cost=cost, s=0, t=1)


@pytest.fixture
def five_cycle():
    """5-cycle graph with adjacent endpoints."""
    return GraphicalInstance(5, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0)), 0, 1)


def random_connected_graph(n: int, seed: int, density: float = 0.35) -> GraphicalInstance:
    """Random spanning-path skeleton plus density-sampled extra edges."""
    rng = np.random.default_rng(seed)
    order = list(rng.permutation(n))
    edges = {(min(a, b), max(a, b)) for a, b in zip(order, order[1:])}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                edges.add((u, v))
    st = rng.choice(n, 2, replace=False)
    return GraphicalInstance(n, tuple(sorted(edges)), int(st[0]), int(st[1]))


def bfs_distances(g: GraphicalInstance, src: int) -> list[float]:
    adj = g.adjacency()
    dist = [-1.0] * g.n
    dist[src] = 0.0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1.0
                queue.append(v)
    return dist


def edmonds_karp(cap: np.ndarray, s: int, t: int) -> float:
    """Independent max-flow oracle (BFS augmenting paths)."""
    n = cap.shape[0]
    flow = np.zeros((n, n))
    total = 0.0
    while True:
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] < 0:
            u = queue.popleft()
            for v in range(n):
                if parent[v] < 0 and cap[u, v] - flow[u, v] > 1e-12:
                    parent[v] = u
                    queue.append(v)
        if parent[t] < 0:
            return total
        bottleneck = np.inf
        v = t
        while v != s:
            u = parent[v]
            bottleneck = min(bottleneck, cap[u, v] - flow[u, v])
            v = u
        v = t
        while v != s:
            u = parent[v]
            flow[u, v] += bottleneck
            flow[v, u] -= bottleneck
            v = u
        total += bottleneck


def hamiltonian_path_instance(n: int, seed: int):
    """Random metric together with the identity-order Hamiltonian s-t path
    edge set (s=0, t=n-1 relabeled)."""
    from pathtsp.instances import generate_random_metric

    base = generate_random_metric(n, seed)
    inst = Instance(cost=base.cost, s=0, t=n - 1)
    path_edges = [(i, i + 1) for i in range(n - 1)]
    return inst, path_edges

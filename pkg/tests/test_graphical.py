import math

import pytest

from conftest import random_connected_graph
from pathtsp.errors import InvalidInstanceError
from pathtsp.exact import exact_path_tsp
from pathtsp.graphical import (
    GAP_CONSTANTS,
    RATIO_CONSTANTS,
    build_layer_traversal,
    check_layer_connectivity,
    ratio_expression,
    solve_graphical,
)
from pathtsp.heldkarp import hk_solve
from pathtsp.instances import GraphicalInstance, metric_closure
from pathtsp.narrowcuts import compute_narrow_cuts

THETA = RATIO_CONSTANTS[0]


def test_published_ratio_constants():
    rho, parts = ratio_expression(*RATIO_CONSTANTS)
    assert rho < 1.5780
    assert all(p < 1.5780 for p in parts)


def test_published_gap_constants():
    gap, parts = ratio_expression(*GAP_CONSTANTS, n=7)
    assert gap < 1.6137
    assert all(p < 1.6137 for p in parts)


def test_path_graph_traversal():
    g = GraphicalInstance(4, ((0, 2), (2, 3), (3, 1)), 0, 1)
    inst = metric_closure(g)
    hk = hk_solve(inst)
    lt = build_layer_traversal(g, hk, THETA)
    assert lt.structure.layers == ((0,), (2,), (3,), (1,))
    assert lt.plt == (0, 2, 3, 1)
    assert lt.eta_cost == 0.0
    assert lt.doubled == ()
    assert lt.hc_cost == 3.0


def test_five_cycle_augmentation_accounting(five_cycle):
    inst = metric_closure(five_cycle)
    hk = hk_solve(inst)
    lt = build_layer_traversal(five_cycle, hk, THETA)
    n = five_cycle.n
    assert lt.hc_cost <= 2 * (n - 1) - lt.plt_cost + 2 * lt.eta_cost + 1e-12
    assert lt.hc_cost >= exact_path_tsp(inst).optimum - 1e-9


def test_traversal_needs_three_vertices():
    g = GraphicalInstance(2, ((0, 1),), 0, 1)
    inst = metric_closure(g)
    hk = hk_solve(inst)
    with pytest.raises(InvalidInstanceError, match="n >= 3"):
        build_layer_traversal(g, hk, THETA)


@pytest.mark.parametrize("seed", range(6))
def test_traversal_invariants_on_random_graphs(seed):
    n = 5 + seed
    g = random_connected_graph(n, 400 + seed)
    inst = metric_closure(g)
    hk = hk_solve(inst)
    st = compute_narrow_cuts(hk, 1.0 - THETA)
    lt = build_layer_traversal(g, hk, THETA, st)
    # exact integer accounting identity
    assert lt.augmented_cost == 2 * (n - 1) - lt.plt_cost + 2 * lt.eta_cost
    # excess cost is paid for by the LP surplus over n-1
    assert THETA * lt.eta_cost <= hk.value - (n - 1) + 1e-6
    # traversal length sandwich
    assert st.ell - 1 <= len(lt.plt) - 1 <= lt.plt_cost + 1e-12
    # candidate is a genuine Hamiltonian path
    assert sorted(lt.hc_order) == list(range(n))
    assert lt.hc_cost >= exact_path_tsp(inst).optimum - 1e-9
    assert lt.hc_cost <= lt.augmented_cost + 1e-12


def test_layer_connectivity_on_path_graph():
    g = GraphicalInstance(5, ((0, 2), (2, 3), (3, 4), (4, 1)), 0, 1)
    inst = metric_closure(g)
    hk = hk_solve(inst)
    st = compute_narrow_cuts(hk, 1.0 - THETA)
    rep = check_layer_connectivity(hk, st, THETA)
    assert rep.all_hold
    # singleton layers make the connectivity check vacuous
    assert all(math.isinf(c) for c in rep.connectivity)


@pytest.mark.parametrize("seed", range(4))
def test_layer_connectivity_on_random_graphs(seed):
    g = random_connected_graph(8, 500 + seed)
    inst = metric_closure(g)
    hk = hk_solve(inst)
    theta = 0.1
    st = compute_narrow_cuts(hk, 1.0 - theta)
    rep = check_layer_connectivity(hk, st, theta)
    assert rep.all_hold, rep


def test_layer_connectivity_requires_matching_tau():
    g = random_connected_graph(6, 1)
    inst = metric_closure(g)
    hk = hk_solve(inst)
    st = compute_narrow_cuts(hk, 0.5)
    with pytest.raises(InvalidInstanceError):
        check_layer_connectivity(hk, st, THETA)


def test_solve_graphical_small_goes_exact():
    g = GraphicalInstance(4, ((0, 2), (2, 3), (3, 1)), 0, 1)
    res = solve_graphical(g)
    assert res.cost == 3.0
    assert res.method == "exact-small"


def test_solve_graphical_candidates_and_report():
    g = random_connected_graph(9, 77)
    res = solve_graphical(g)
    inst = metric_closure(g)
    opt = exact_path_tsp(inst).optimum
    assert res.cost >= opt - 1e-9
    assert res.candidates["hb"] >= opt - 1e-9
    assert res.candidates["hc"] >= opt - 1e-9
    assert res.candidates["ha"] is None
    assert res.bounds["rho"] < 1.5780
    assert res.bounds["certifying_case"] in (
        "first(oracle)",
        "second(traversal)",
        "third(pipeline)",
    )


def test_solve_graphical_with_plugged_oracle():
    g = random_connected_graph(8, 78)
    inst = metric_closure(g)
    exact = exact_path_tsp(inst)

    def oracle(graph):
        return exact.witness, exact.optimum

    res = solve_graphical(g, a0=oracle)
    assert res.candidates["ha"] == pytest.approx(exact.optimum)
    assert res.cost == pytest.approx(exact.optimum)

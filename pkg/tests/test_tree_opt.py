import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeh2 import fixtures
from edgeh2.errors import Disconnected, GraphError, UnknownVertex
from edgeh2.graph import build_graph, enumerate_spanning_trees, find_spanning_tree
from edgeh2.h2 import NoiseModel, h2_closed_form
from edgeh2.tree_opt import (auxiliary_graph, brute_force_min_tree, min_h2_spanning_tree,
                             total_cost, tree_report)

from conftest import random_graphs


def test_auxiliary_weights_triangle(tri):
    np.testing.assert_allclose(auxiliary_graph(tri).aux_weights, [11 / 6] * 3, atol=1e-12)


def test_auxiliary_weights_k2(k2):
    assert auxiliary_graph(k2).aux_weights[0] == pytest.approx(3.0)


def test_auxiliary_weights_scale_with_noise(tri):
    aux = auxiliary_graph(tri, NoiseModel(2.0, 0.5)).aux_weights
    # edge 1-2: 0.25 * (1 + 1/2) + 4 / 3
    assert aux[0] == pytest.approx(0.25 * 1.5 + 4 / 3)


def test_total_cost_is_tree_graph_norm():
    noise = NoiseModel(0.8, 1.4)
    for g in random_graphs(20, 20):
        aux = auxiliary_graph(g, noise)
        for t in enumerate_spanning_trees(g, cap=10**6)[:5]:
            expect = h2_closed_form(g.subgraph(t.tree_edges), noise=noise, model="tree").total_sq
            assert total_cost(t, aux) == pytest.approx(expect, rel=1e-12)
            assert tree_report(t, noise).total_sq == pytest.approx(expect, rel=1e-12)


def test_total_cost_rejects_other_graph(tri, k2):
    with pytest.raises(GraphError):
        total_cost(find_spanning_tree(tri), auxiliary_graph(k2))


def test_triangle_every_tree_optimal(tri):
    t, rep = min_h2_spanning_tree(tri)
    assert rep.total_sq == pytest.approx(1.833333, abs=1e-6)
    assert isinstance(rep.total_sq, float)


def test_cycle4_unique_minimizer():
    g = fixtures.cycle4()
    values = sorted((tree_report(t).total_sq, t.tree_edges) for t in enumerate_spanning_trees(g))
    assert values[1][0] - values[0][0] > 1e-6
    t, rep = min_h2_spanning_tree(g)
    assert set(t.tree_edges) == set(values[0][1])
    assert rep.total_sq == pytest.approx(values[0][0], abs=1e-12)


def test_greedy_matches_brute_force():
    rng = np.random.default_rng(21)
    for g in random_graphs(21, 60):
        noise = NoiseModel(*rng.uniform(0.1, 2.0, size=2))
        _, greedy = min_h2_spanning_tree(g, noise)
        _, brute = brute_force_min_tree(g, noise)
        assert abs(greedy.total_sq - brute) <= 1e-12


def test_seed_vertex_does_not_change_optimum():
    for g in random_graphs(22, 15):
        values = [min_h2_spanning_tree(g, seed_vertex=v)[1].total_sq for v in g.labels]
        assert max(values) - min(values) <= 1e-12


def test_unknown_seed_vertex(tri):
    with pytest.raises(UnknownVertex):
        min_h2_spanning_tree(tri, seed_vertex=9)


def test_disconnected():
    g = build_graph([(1, 1.0), (2, 1.0), (3, 1.0)], [(1, 2, 1.0)])
    with pytest.raises(Disconnected):
        min_h2_spanning_tree(g)
    with pytest.raises(Disconnected):
        brute_force_min_tree(g)


def test_tree_graph_returns_itself(p6):
    t, rep = min_h2_spanning_tree(p6)
    assert sorted(t.tree_edges) == list(range(p6.m))
    assert rep.total_sq == pytest.approx(h2_closed_form(p6).total_sq)


@given(st.integers(0, 2**32 - 1), st.floats(1.01, 10.0))
@settings(max_examples=40, deadline=None)
def test_heavier_edge_never_hurts(seed, factor):
    rng = np.random.default_rng(seed)
    g = fixtures.random_connected_graph(rng, int(rng.integers(3, 8)), p=0.5)
    pos = int(rng.integers(0, g.m))
    edges = list(g.edges)
    u, v, w = edges[pos]
    edges[pos] = (u, v, w * factor)
    heavier = build_graph(g.vertices, edges)
    before = min_h2_spanning_tree(g)[1].total_sq
    after = min_h2_spanning_tree(heavier)[1].total_sq
    assert after <= before + 1e-12

"""Minimum-H2 spanning trees.

On a tree the tree-output norm is a sum of per-edge costs
``sigma_v^2/eps_i + sigma_v^2/eps_j + sigma_omega^2/w_ij`` halved, so the
optimal tree is a minimum spanning tree under those costs. Prim's frontier
expansion finds it; exhaustive enumeration serves as the oracle.
"""
import heapq
from dataclasses import dataclass

import numpy as np

from .errors import Disconnected, GraphError
from .graph import adjacency, enumerate_spanning_trees, is_connected, spanning_tree, DEFAULT_TREE_CAP
from .h2 import DEFAULT_NOISE, H2Report, _require_structured


@dataclass(frozen=True)
class AuxiliaryGraph:
    graph: object
    aux_weights: np.ndarray  # graph edge order


def auxiliary_graph(g, noise=DEFAULT_NOISE):
    _require_structured(noise)
    inv_eps = 1.0 / g.epsilons
    costs = np.empty(g.m)
    for pos in range(g.m):
        i, j = g.endpoints(pos)
        costs[pos] = (noise.sigma_v**2 * inv_eps[i] + noise.sigma_v**2 * inv_eps[j]
                      + noise.sigma_omega**2 / g.edges[pos][2])
    return AuxiliaryGraph(g, costs)


def total_cost(t, aux):
    """Half the summed auxiliary cost of the tree edges."""
    if t.graph != aux.graph:
        raise GraphError("tree and auxiliary graph disagree on the underlying graph")
    return 0.5 * float(sum(aux.aux_weights[p] for p in t.tree_edges))


def tree_report(t, noise=DEFAULT_NOISE):
    """Tree-output norm of the spanning tree taken as a graph on its own."""
    g = t.graph
    w = g.weights
    inv_eps = 1.0 / g.epsilons
    w_term = 0.0
    e_term = 0.0
    for pos in t.tree_edges:
        i, j = g.endpoints(pos)
        w_term += 1.0 / w[pos]
        e_term += inv_eps[i] + inv_eps[j]
    w_term = 0.5 * noise.sigma_omega**2 * float(w_term)
    e_term = 0.5 * noise.sigma_v**2 * float(e_term)
    return H2Report(w_term + e_term, w_term, e_term, "tree", "closed_form")


def min_h2_spanning_tree(g, noise=DEFAULT_NOISE, seed_vertex=None):
    """Greedy (Prim) minimum-H2 spanning tree.

    Starts from ``seed_vertex`` (a label; defaults to the first declared
    vertex) and repeatedly adds the cheapest edge leaving the current tree.
    Equal costs go to the lower edge position. Returns ``(tree, report)``.
    """
    aux = auxiliary_graph(g, noise)
    start = 0 if seed_vertex is None else g.index(seed_vertex)
    adj = adjacency(g)
    in_tree = [False] * g.n
    in_tree[start] = True
    frontier = [(aux.aux_weights[pos], pos, j) for j, pos in adj[start]]
    heapq.heapify(frontier)
    chosen = []
    while frontier and len(chosen) < g.n - 1:
        _, pos, j = heapq.heappop(frontier)
        if in_tree[j]:
            continue
        in_tree[j] = True
        chosen.append(pos)
        for k, nxt in adj[j]:
            if not in_tree[k]:
                heapq.heappush(frontier, (aux.aux_weights[nxt], nxt, k))
    if len(chosen) != g.n - 1:
        raise Disconnected("graph is not connected")
    t = spanning_tree(g, chosen)
    return t, tree_report(t, noise)


def brute_force_min_tree(g, noise=DEFAULT_NOISE, cap=DEFAULT_TREE_CAP):
    """Exhaustive minimum over all spanning trees; first minimizer in enumeration order wins."""
    _require_structured(noise)
    if not is_connected(g):
        raise Disconnected("graph is not connected")
    best = None
    best_value = np.inf
    for t in enumerate_spanning_trees(g, cap):
        value = tree_report(t, noise).total_sq
        if value < best_value:
            best, best_value = t, value
    return best, best_value

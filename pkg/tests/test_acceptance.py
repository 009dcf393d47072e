"""Acceptance criteria. Each test prints one PASS/FAIL line, then asserts.

Run on its own with ``pytest tests/test_acceptance.py -s -q``; the lines are
also shown in a plain ``pytest`` run.
"""
import numpy as np
import pytest

from edgeh2 import fixtures
from edgeh2.graph import (enumerate_spanning_trees, find_spanning_tree, fundamental_basis,
                          fundamental_cycles, kirchhoff_count, cycle_matrix_checks, spanning_tree,
                          tree_from_pairs)
from edgeh2.h2 import (NoiseModel, gramian_residual, h2_closed_form, h2_lyapunov)
from edgeh2.planner import (CandidateEdge, delta_full_timescale, delta_full_weight,
                            delta_tree_model, rank_candidates, timescale_split)
from edgeh2.sim import SimConfig, empirical_h2
from edgeh2.tree_opt import auxiliary_graph, brute_force_min_tree, min_h2_spanning_tree

CORPUS_SIZE = 100


@pytest.fixture
def report(capsys):
    def emit(number, name, passed, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if passed else 'FAIL'}] criterion {number} {name}: {detail}")
        return passed
    return emit


def graph_corpus(seed, n_max):
    rng = np.random.default_rng(seed)
    for _ in range(CORPUS_SIZE):
        n = int(rng.integers(2, n_max + 1))
        yield fixtures.random_connected_graph(rng, n, p=float(rng.uniform(0.1, 0.7)))


def tree_corpus(seed):
    """Random trees, each paired with a random non-adjacent candidate edge."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < CORPUS_SIZE:
        t = fixtures.random_tree(rng, int(rng.integers(3, 11)))
        u, v = fixtures.random_non_edge(rng, t)
        out.append((t, CandidateEdge(u, v, float(rng.uniform(0.1, 10.0)))))
    return out


def recompute(t, c, noise, model):
    after = t.with_edge(c.u, c.v, c.weight)
    tree = spanning_tree(after, range(t.m))
    return h2_closed_form(t, None, noise, model), h2_closed_form(after, tree, noise, model)


def test_triangle_non_uniqueness(report, tri):
    values = [h2_closed_form(tri.subgraph(tree_from_pairs(tri, pairs).tree_edges),
                             model="tree").total_sq
              for pairs in ([(1, 2), (1, 3)], [(1, 2), (2, 3)])]
    aux = auxiliary_graph(tri).aux_weights
    err_trees = max(abs(v - 11 / 6) for v in values)
    err_aux = float(np.max(np.abs(aux - 11 / 6)))
    ok = err_trees <= 1e-9 and err_aux <= 1e-12
    report(1, "triangle trees tie at 1.833333", ok,
           f"trees {values[0]:.9f}, {values[1]:.9f}; aux max err {err_aux:.1e}")
    assert ok


def test_greedy_optimality(report):
    rng = np.random.default_rng(101)
    worst = 0.0
    for g in graph_corpus(2, 8):
        noise = NoiseModel(*rng.uniform(0.1, 2.0, size=2))
        greedy = min_h2_spanning_tree(g, noise)[1].total_sq
        worst = max(worst, abs(greedy - brute_force_min_tree(g, noise)[1]))
    ok = worst <= 1e-12
    report(2, "greedy tree equals exhaustive minimum", ok,
           f"{CORPUS_SIZE} graphs, max |diff| {worst:.1e}")
    assert ok


def test_closed_form_vs_lyapunov(report):
    rng = np.random.default_rng(303)
    worst_rel = 0.0
    worst_res = 0.0
    for g in graph_corpus(3, 10):
        noise = NoiseModel(*rng.uniform(0.1, 2.0, size=2))
        for model in ("full", "tree"):
            cf = h2_closed_form(g, noise=noise, model=model).total_sq
            ly = h2_lyapunov(g, noise=noise, model=model).total_sq
            worst_rel = max(worst_rel, abs(cf - ly) / abs(ly))
        worst_res = max(worst_res, gramian_residual(g, noise=noise))
    ok = worst_rel <= 1e-8 and worst_res <= 1e-8
    report(3, "closed form matches Lyapunov", ok,
           f"max rel dev {worst_rel:.1e}, max Gramian residual {worst_res:.1e}")
    assert ok


def test_tree_model_delta(report, p6):
    rng = np.random.default_rng(404)
    worst = 0.0
    all_negative = True
    for t, c in tree_corpus(4):
        noise = NoiseModel(*rng.uniform(0.1, 2.0, size=2))
        before, after = recompute(t, c, noise, "tree")
        d = delta_tree_model(t, c, noise)
        worst = max(worst, abs(d - (after.total_sq - before.total_sq)))
        all_negative &= d < 0
    short = CandidateEdge(*fixtures.P6_CHORD_SHORT)
    long_ = CandidateEdge(*fixtures.P6_CHORD_LONG)
    d_short, d_long = delta_tree_model(p6, short), delta_tree_model(p6, long_)
    first = rank_candidates(p6, [long_, short], k=1)[0].candidate
    ok = (worst <= 1e-10 and all_negative and abs(d_short + 0.476190) <= 5e-7
          and abs(d_long + 0.468750) <= 5e-7 and first == short)
    report(4, "tree-model edge-addition delta", ok,
           f"max err {worst:.1e}, all negative {all_negative}; path deltas {d_short:.6f}, "
           f"{d_long:.6f}; first pick {first.u}-{first.v}")
    assert ok


def test_timescale_identity(report):
    rng = np.random.default_rng(505)
    worst_split = 0.0
    worst_delta = 0.0
    for g in graph_corpus(5, 10):
        noise = NoiseModel(*rng.uniform(0.1, 2.0, size=2))
        t = find_spanning_tree(g)
        full = h2_closed_form(g, t, noise, "full").timescale_term
        tree_part, cotree_part = timescale_split(g, t, noise)
        scale = 0.5 * noise.sigma_v**2
        worst_split = max(worst_split, abs(full - tree_part - cotree_part) / scale)
        pair = fixtures.random_non_edge(rng, g)
        if pair is None:
            continue
        c = CandidateEdge(pair[0], pair[1], float(rng.uniform(0.1, 10.0)))
        after = h2_closed_form(g.with_edge(*pair, c.weight), None, noise, "full").timescale_term
        worst_delta = max(worst_delta, abs(delta_full_timescale(g, c, noise) - (after - full)))
    ok = worst_split <= 1e-10 and worst_delta <= 1e-12
    report(5, "time-scale trace split and edge delta", ok,
           f"max split err {worst_split:.1e}, max delta err {worst_delta:.1e}")
    assert ok


def test_full_weight_delta(report, tri):
    rng = np.random.default_rng(606)
    worst = 0.0
    for t, c in tree_corpus(6):
        noise = NoiseModel(*rng.uniform(0.1, 2.0, size=2))
        before, after = recompute(t, c, noise, "full")
        worst = max(worst, abs(delta_full_weight(t, c, noise)
                               - (after.weight_term - before.weight_term)))
    base = tri.subgraph([0, 1])
    c = CandidateEdge(2, 3, 1.0)
    chain = (h2_closed_form(base, model="tree").total_sq + delta_full_weight(base, c)
             + delta_full_timescale(base, c))
    target = h2_closed_form(tri, model="full").total_sq
    ok = worst <= 1e-10 and abs(chain - target) <= 1e-9
    report(6, "full-model weight delta", ok,
           f"max err {worst:.1e}; triangle chain {chain:.6f} vs {target:.6f}")
    assert ok


def test_full_model_tree_invariance(report, tri):
    worst = 0.0
    tested = 0
    for g in graph_corpus(7, 8):
        if kirchhoff_count(g) > 200:
            continue
        tested += 1
        totals = [h2_closed_form(g, t, model="full").total_sq for t in enumerate_spanning_trees(g)]
        worst = max(worst, (max(totals) - min(totals)) / max(totals))
    tri_terms = [h2_closed_form(tri, t).weight_term for t in enumerate_spanning_trees(tri)]
    tri_err = max(abs(v - 6 / 11) for v in tri_terms)
    ok = worst <= 1e-8 and tri_err <= 1e-12
    report(7, "full model independent of spanning tree", ok,
           f"{tested} graphs, max rel spread {worst:.1e}; triangle weight term err {tri_err:.1e}")
    assert ok


@pytest.mark.parametrize("name", ["k2", "triangle"])
def test_monte_carlo(report, name):
    g = getattr(fixtures, name)()
    cfg = SimConfig()
    rep = empirical_h2(g, cfg=cfg)
    again = empirical_h2(g, cfg=cfg)
    exact = h2_closed_form(g).total_sq
    err = abs(rep.total_sq - exact)
    ok = (err <= 3 * rep.stderr and err <= 0.05 * exact
          and (again.total_sq, again.stderr) == (rep.total_sq, rep.stderr))
    report(8, f"Monte Carlo on {name}", ok,
           f"estimate {rep.total_sq:.4f} +- {rep.stderr:.4f} vs {exact:.4f} "
           f"({err / rep.stderr:.2f} SE, {100 * err / exact:.2f}%), reproducible")
    assert ok


def test_cycle_matrix_identities(report):
    bases = 0
    problems = []
    for g in graph_corpus(9, 8):
        trees = (enumerate_spanning_trees(g) if kirchhoff_count(g) <= 50
                 else [find_spanning_tree(g), min_h2_spanning_tree(g)[0]])
        for t in trees:
            basis = fundamental_basis(g, t)
            problems += cycle_matrix_checks(g, t, basis, fundamental_cycles(g, t, basis))
            bases += 1
    ok = not problems
    report(9, "cycle-matrix identities", ok,
           f"{bases} bases, {len(problems)} violations" + (f": {problems[0]}" if problems else ""))
    assert ok

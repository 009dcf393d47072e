"""Cross-validation battery: every closed form against an independent route."""
from dataclasses import dataclass

from .errors import CapExceeded
from .fixtures import random_connected_graph
from .graph import cycle_matrix_checks, find_spanning_tree, spanning_tree
from .h2 import (DEFAULT_NOISE, gramian_residual, h2_closed_form, h2_lyapunov, h2_relation_check,
                 tree_invariance_check, verify_similarity)
from .planner import (CandidateEdge, delta_full_timescale, delta_full_weight, delta_tree_model,
                      timescale_split)
from .tree_opt import brute_force_min_tree, min_h2_spanning_tree

BRUTE_FORCE_CAP = 10_000


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _check(name, value, tol, fmt="{:.3e}"):
    return Check(name, bool(value <= tol), f"{fmt.format(value)} <= {tol:g}")


def run_checks(g, t, noise=DEFAULT_NOISE):
    """Run the battery on one (graph, spanning tree) pair; returns a list of Check."""
    out = []
    for model in ("full", "tree"):
        cf = h2_closed_form(g, t, noise, model)
        ly = h2_lyapunov(g, t, noise, model)
        out.append(_check(f"closed_form_vs_lyapunov[{model}]", _rel(cf.total_sq, ly.total_sq), 1e-8))
        out.append(_check(f"split_additivity[{model}]",
                          abs(cf.total_sq - cf.weight_term - cf.timescale_term), 1e-10))
    out.append(_check("gramian_residual", gramian_residual(g, t, noise), 1e-8))

    full = h2_closed_form(g, t, noise, "full")
    tree = h2_closed_form(g, t, noise, "tree")
    w_corr, e_corr = h2_relation_check(g, t, noise)
    out.append(_check("relation_weight", abs(full.weight_term - tree.weight_term - w_corr), 1e-10))
    out.append(_check("relation_timescale",
                      abs(full.timescale_term - tree.timescale_term - e_corr), 1e-10))
    tree_part, cotree_part = timescale_split(g, t, noise)
    out.append(_check("timescale_split_identity",
                      abs(tree_part + cotree_part - full.timescale_term), 1e-10))

    out.append(_check("full_model_tree_invariance", tree_invariance_check(g, noise), 1e-8))
    sim = verify_similarity(g, t)
    out.append(_check("similarity_block_structure", max(sim.block_error, sim.consensus_error), 1e-8))
    problems = cycle_matrix_checks(g, t)
    out.append(Check("cycle_matrix_identities", not problems, "; ".join(problems) or "ok"))

    greedy = min_h2_spanning_tree(g, noise)[1].total_sq
    try:
        _, brute = brute_force_min_tree(g, noise, cap=BRUTE_FORCE_CAP)
        out.append(_check("greedy_tree_optimal", abs(greedy - brute), 1e-12))
    except CapExceeded:
        out.append(Check("greedy_tree_optimal", True, "skipped: too many spanning trees"))

    out.extend(_edge_addition_checks(g, t, noise))
    return out


def _edge_addition_checks(g, t, noise):
    """Closed-form deltas for adding each cotree edge back to the bare tree."""
    base = g.subgraph(t.tree_edges)
    errs = {"tree": 0.0, "full_weight": 0.0, "full_timescale": 0.0}
    positive = 0
    for pos in t.cotree_edges:
        u, v, w = g.edges[pos]
        c = CandidateEdge(u, v, w)
        after = base.with_edge(u, v, w)
        tree = spanning_tree(after, range(base.m))
        before_tree = h2_closed_form(base, None, noise, "tree")
        before_full = h2_closed_form(base, None, noise, "full")
        after_tree = h2_closed_form(after, tree, noise, "tree")
        after_full = h2_closed_form(after, tree, noise, "full")
        d = delta_tree_model(base, c, noise)
        positive += d >= 0 and noise.sigma_omega > 0
        errs["tree"] = max(errs["tree"], abs(d - (after_tree.total_sq - before_tree.total_sq)))
        errs["full_weight"] = max(errs["full_weight"], abs(
            delta_full_weight(base, c, noise) - (after_full.weight_term - before_full.weight_term)))
        errs["full_timescale"] = max(errs["full_timescale"], abs(
            delta_full_timescale(base, c, noise)
            - (after_full.timescale_term - before_full.timescale_term)))
    if not t.cotree_edges:
        return [Check("edge_addition_deltas", True, "skipped: graph is a tree")]
    out = [_check(f"edge_addition_delta[{k}]", v, 1e-10) for k, v in errs.items()]
    out.append(Check("edge_addition_decreases_tree_model", positive == 0,
                     f"{positive} non-negative deltas"))
    return out


def random_battery(rng, count, noise=DEFAULT_NOISE, max_n=8):
    """Run the battery on ``count`` random connected graphs; yields (graph, checks)."""
    for _ in range(count):
        n = int(rng.integers(3, max_n + 1))
        g = random_connected_graph(rng, n, p=float(rng.uniform(0.1, 0.6)))
        yield g, run_checks(g, find_spanning_tree(g), noise)

"""Predicting and ranking the H2 effect of adding edges back to a spanning tree.

Closed-form deltas (valid when the base graph is a tree, new edge weight
``W``, closed cycle ``C`` with weighted length ``l_w = sum 1/w`` over C):

* tree-output model:  ``-sigma_omega^2 / (2 l_w) * sum_{tree edges of C} w^-2``
* full model, weights: ``sigma_omega^2 / (2 W) - sigma_omega^2 / (2 l_w) * sum_{C} w^-2``
* full model, time scales: ``sigma_v^2 / 2 * (1/eps_i + 1/eps_j)`` (any base graph)
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CyclesNotDisjoint, EdgeExists, GraphError
from .graph import (Cycle, edge_laplacian, fundamental_basis, fundamental_cycles, spanning_tree,
                    tree_path)
from .h2 import DEFAULT_NOISE, _check_model, _require_structured, _resolve_tree, h2_closed_form


@dataclass(frozen=True)
class CandidateEdge:
    u: int
    v: int
    weight: float

    def __post_init__(self):
        if self.u == self.v:
            raise GraphError(f"candidate {self.u}-{self.v} is a self-loop")
        w = float(self.weight)
        if not np.isfinite(w) or w <= 0:
            raise GraphError(f"candidate {self.u}-{self.v} needs a positive weight, got {self.weight}")
        object.__setattr__(self, "weight", w)


@dataclass(frozen=True)
class EdgeAdditionReport:
    candidate: CandidateEdge
    cycle: Cycle  # positions refer to the graph with the candidate appended
    delta_tree_model: float
    delta_full_weight: float
    delta_full_timescale: float

    @property
    def delta_full_total(self):
        return self.delta_full_weight + self.delta_full_timescale


def _check_candidate(g, c):
    g.index(c.u)
    g.index(c.v)
    if g.edge_position(c.u, c.v) is not None:
        raise EdgeExists(f"edge {c.u}-{c.v} already exists")


def _require_tree(g):
    if not g.is_tree():
        raise GraphError(f"base graph must be a tree ({g.n} vertices, {g.m} edges)")


def _cycle_sums(t, c):
    """(l_w, sum of w^-2 over the tree part of the cycle) for candidate c."""
    w = t.weights
    path = tree_path(t, c.u, c.v)
    l_w = float(np.sum(1.0 / w[path])) + 1.0 / c.weight
    return l_w, float(np.sum(w[path] ** -2.0))


def delta_tree_model(t, c, noise=DEFAULT_NOISE):
    """Change of the tree-output norm when c is added to the tree graph t (always negative)."""
    _require_tree(t)
    _check_candidate(t, c)
    l_w, tree_sq = _cycle_sums(t, c)
    return -noise.sigma_omega**2 / (2.0 * l_w) * tree_sq


def delta_full_weight(t, c, noise=DEFAULT_NOISE):
    _require_tree(t)
    _check_candidate(t, c)
    l_w, tree_sq = _cycle_sums(t, c)
    s2 = noise.sigma_omega**2
    return s2 / (2.0 * c.weight) - s2 / (2.0 * l_w) * (tree_sq + c.weight ** -2.0)


def delta_full_timescale(g, c, noise=DEFAULT_NOISE):
    _check_candidate(g, c)
    eps = g.epsilons
    return 0.5 * noise.sigma_v**2 * float(1.0 / eps[g.index(c.u)] + 1.0 / eps[g.index(c.v)])


def _augmented(t, cs):
    g = t
    for c in cs:
        g = g.with_edge(c.u, c.v, c.weight)
    return g, spanning_tree(g, range(t.m))


def evaluate_candidate(t, c, noise=DEFAULT_NOISE):
    """All closed-form deltas for adding c to the tree graph t."""
    g, tree = _augmented(t, [c])
    return EdgeAdditionReport(
        candidate=c,
        cycle=fundamental_cycles(g, tree)[0],
        delta_tree_model=delta_tree_model(t, c, noise),
        delta_full_weight=delta_full_weight(t, c, noise),
        delta_full_timescale=delta_full_timescale(t, c, noise),
    )


def delta_tree_model_multi(t, cs, noise=DEFAULT_NOISE):
    """Summed tree-model deltas for candidates whose cycles share no edge.

    Disjointness is read off the cycle matrix: its Gram matrix must be diagonal.
    """
    _require_tree(t)
    cs = list(cs)
    for c in cs:
        _check_candidate(t, c)
    g, tree = _augmented(t, cs)
    gram = fundamental_basis(g, tree).T_T
    gram = gram.T @ gram
    off = gram - np.diag(np.diag(gram))
    if np.any(off != 0):
        i, j = np.argwhere(off != 0)[0]
        raise CyclesNotDisjoint(f"cycles closed by candidates {i} and {j} share an edge")
    return float(sum(delta_tree_model(t, c, noise) for c in cs))


def timescale_split(g, t=None, noise=DEFAULT_NOISE):
    """Time-scale term of the full model as (tree part, cotree part)."""
    _require_structured(noise)
    t = _resolve_tree(g, t)
    s = 0.5 * noise.sigma_v**2
    tree_part = s * float(np.trace(edge_laplacian(g, t.tree_edges)))
    cotree_part = s * float(np.trace(edge_laplacian(g, t.cotree_edges))) if t.cotree_edges else 0.0
    return tree_part, cotree_part


@dataclass(frozen=True)
class PlanStep:
    candidate: CandidateEdge
    index: int  # position in the caller's candidate list
    delta: float
    cumulative_delta: float
    total_after: float
    exact: bool  # True when scored by recomputation rather than a closed-form delta
    report: Optional[EdgeAdditionReport] = None


def _score_closed(t, c, noise, model):
    rep = evaluate_candidate(t, c, noise)
    return (rep.delta_tree_model if model == "tree" else rep.delta_full_total), rep


def rank_candidates(t, cs, noise=DEFAULT_NOISE, model="tree", k=None):
    """Greedy sequential edge additions to the tree graph ``t``.

    Each step scores every remaining candidate against the current graph and
    applies the best (most negative change for the chosen model). The first
    step uses the closed-form deltas; later steps, where the graph is no
    longer a tree, recompute the norm exactly with ``t``'s edges as the
    spanning tree. Ties go to the earlier candidate.
    """
    _check_model(model)
    _require_structured(noise)
    _require_tree(t)
    cs = list(cs)
    k = len(cs) if k is None else k
    if not 0 <= k <= len(cs):
        raise ValueError(f"k must be between 0 and {len(cs)}, got {k}")
    seen = set()
    for c in cs:
        _check_candidate(t, c)
        key = frozenset((c.u, c.v))
        if key in seen:
            raise EdgeExists(f"candidate {c.u}-{c.v} listed twice")
        seen.add(key)

    base_positions = range(t.m)
    current = t
    current_total = h2_closed_form(t, None, noise, model).total_sq
    remaining = list(range(len(cs)))
    steps = []
    cumulative = 0.0
    for _ in range(k):
        scored = []
        for idx in remaining:
            c = cs[idx]
            if current.m == current.n - 1:
                delta, rep = _score_closed(current, c, noise, model)
                exact = False
            else:
                after = current.with_edge(c.u, c.v, c.weight)
                tree = spanning_tree(after, base_positions)
                delta = h2_closed_form(after, tree, noise, model).total_sq - current_total
                rep, exact = None, True
            scored.append((delta, idx, rep, exact))
        delta, idx, rep, exact = min(scored, key=lambda s: (s[0], s[1]))
        c = cs[idx]
        current = current.with_edge(c.u, c.v, c.weight)
        current_total = h2_closed_form(current, spanning_tree(current, base_positions), noise,
                                       model).total_sq
        cumulative += delta
        remaining.remove(idx)
        steps.append(PlanStep(c, idx, delta, cumulative, current_total, exact, rep))
    return steps

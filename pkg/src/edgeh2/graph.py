"""Time-scaled weighted graphs and their incidence/Laplacian/cycle machinery.

Conventions used throughout the package:

* vertices keep their declaration order; that order defines row indices;
* edges keep their declaration order; that order defines edge positions;
* an incidence column for edge (u, v) has +1 at whichever endpoint has the
  lower vertex index and -1 at the other;
* matrices indexed by "basis order" list tree edges first (in tree order),
  then cotree edges (in cotree order).
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (CapExceeded, Disconnected, DuplicateEdge, GraphError, NonPositiveParameter,
                     NumericalFailure, SelfLoop, UnknownVertex)
from .numerics import solve_linear

SNAP_TOL = 1e-9
DEFAULT_TREE_CAP = 10**6


def _positive(value, what):
    x = float(value)
    if not math.isfinite(x) or x <= 0.0:
        raise NonPositiveParameter(f"{what} must be finite and positive, got {value!r}")
    return x


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph with a time scale per vertex and a weight per edge."""

    vertices: tuple  # ((label, epsilon), ...)
    edges: tuple  # ((u_label, v_label, weight), ...)
    _index: dict = field(init=False, repr=False, compare=False)
    _edge_pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for label, eps in self.vertices:
            if label in index:
                raise GraphError(f"vertex {label} declared twice")
            index[label] = len(index)
        edge_pos = {}
        for pos, (u, v, _w) in enumerate(self.edges):
            key = frozenset((u, v))
            if key in edge_pos:
                raise DuplicateEdge(f"edge {u}-{v} appears more than once")
            edge_pos[key] = pos
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_edge_pos", edge_pos)

    @property
    def n(self):
        return len(self.vertices)

    @property
    def m(self):
        return len(self.edges)

    @property
    def labels(self):
        return [label for label, _ in self.vertices]

    @property
    def epsilons(self):
        return np.array([eps for _, eps in self.vertices], dtype=float)

    @property
    def weights(self):
        return np.array([w for _, _, w in self.edges], dtype=float)

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise UnknownVertex(f"vertex {label} is not in the graph") from None

    def has_vertex(self, label):
        return label in self._index

    def edge_position(self, u, v):
        """Position of the undirected edge {u, v}, or None if absent."""
        return self._edge_pos.get(frozenset((u, v)))

    def endpoints(self, pos):
        """Vertex indices (i, j) with i < j for the edge at ``pos``."""
        u, v, _ = self.edges[pos]
        i, j = self._index[u], self._index[v]
        return (i, j) if i < j else (j, i)

    def edge_label(self, pos):
        u, v, _ = self.edges[pos]
        return (u, v)

    def subgraph(self, positions):
        """Spanning subgraph on all vertices keeping only the given edges."""
        return Graph(self.vertices, tuple(self.edges[p] for p in positions))

    def with_edge(self, u, v, weight):
        """New graph with edge (u, v, weight) appended."""
        return build_graph(self.vertices, list(self.edges) + [(u, v, weight)])

    def is_tree(self):
        return self.m == self.n - 1 and is_connected(self)


def build_graph(vertices, edges):
    """Validate and freeze a graph.

    ``vertices`` is a sequence of ``(label, epsilon)``; ``edges`` of
    ``(u, v, weight)``. Labels are non-negative integers.
    """
    vertices = list(vertices)
    edges = list(edges)
    if not vertices:
        raise GraphError("graph needs at least one vertex")
    if not edges:
        raise GraphError("graph needs at least one edge")
    clean_vertices = []
    for label, eps in vertices:
        if isinstance(label, bool) or int(label) != label or label < 0:
            raise GraphError(f"vertex label must be a non-negative integer, got {label!r}")
        clean_vertices.append((int(label), _positive(eps, f"time scale of vertex {label}")))
    declared = {label for label, _ in clean_vertices}
    clean_edges = []
    for u, v, w in edges:
        for end in (u, v):
            if end not in declared:
                raise UnknownVertex(f"edge {u}-{v} references undeclared vertex {end}")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        clean_edges.append((int(u), int(v), _positive(w, f"weight of edge {u}-{v}")))
    return Graph(tuple(clean_vertices), tuple(clean_edges))


def adjacency(g, positions=None):
    """Vertex-index adjacency lists of (neighbour, edge position), in edge order."""
    adj = [[] for _ in range(g.n)]
    for pos in (range(g.m) if positions is None else positions):
        i, j = g.endpoints(pos)
        adj[i].append((j, pos))
        adj[j].append((i, pos))
    return adj


def is_connected(g, positions=None):
    adj = adjacency(g, positions)
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j, _ in adj[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == g.n


def degrees(g, positions=None):
    deg = np.zeros(g.n, dtype=int)
    for pos in (range(g.m) if positions is None else positions):
        i, j = g.endpoints(pos)
        deg[i] += 1
        deg[j] += 1
    return deg


def incidence_matrix(g, subset=None):
    positions = range(g.m) if subset is None else list(subset)
    D = np.zeros((g.n, len(positions)))
    for col, pos in enumerate(positions):
        i, j = g.endpoints(pos)
        D[i, col] = 1.0
        D[j, col] = -1.0
    return D


def graph_laplacian(g):
    D = incidence_matrix(g)
    return D @ np.diag(g.weights) @ D.T


def edge_laplacian(g, subset):
    """``D_S^T E^{-1} D_S`` over the edge subset S."""
    subset = list(subset)
    if not subset:
        raise GraphError("edge Laplacian needs a non-empty edge subset")
    D = incidence_matrix(g, subset)
    return D.T @ np.diag(1.0 / g.epsilons) @ D


@dataclass(frozen=True)
class SpanningTree:
    graph: Graph = field(repr=False)
    tree_edges: tuple
    cotree_edges: tuple

    def __post_init__(self):
        g = self.graph
        if len(self.tree_edges) != g.n - 1:
            raise GraphError(f"a spanning tree of {g.n} vertices needs {g.n - 1} edges, "
                             f"got {len(self.tree_edges)}")
        if sorted(self.tree_edges + self.cotree_edges) != list(range(g.m)):
            raise GraphError("tree and cotree edges must partition the graph's edges")
        if not is_connected(g, self.tree_edges):
            raise GraphError("tree edges do not connect every vertex")

    @property
    def order(self):
        """Basis order: tree edges, then cotree edges."""
        return self.tree_edges + self.cotree_edges


def spanning_tree(g, tree_edges):
    """SpanningTree from edge positions; cotree keeps graph order."""
    tree_edges = tuple(int(p) for p in tree_edges)
    chosen = set(tree_edges)
    if len(chosen) != len(tree_edges) or not chosen <= set(range(g.m)):
        raise GraphError(f"invalid tree edge positions {tree_edges}")
    cotree = tuple(p for p in range(g.m) if p not in chosen)
    return SpanningTree(g, tree_edges, cotree)


def tree_from_pairs(g, pairs):
    """SpanningTree from (u, v) label pairs, kept in the given order."""
    positions = []
    for u, v in pairs:
        pos = g.edge_position(u, v)
        if pos is None:
            raise GraphError(f"edge {u}-{v} is not in the graph")
        positions.append(pos)
    return spanning_tree(g, positions)


def find_spanning_tree(g):
    """Depth-first spanning tree from vertex index 0, edges explored in position order."""
    adj = adjacency(g)
    seen = [False] * g.n
    seen[0] = True
    tree = []
    stack = [0]
    while stack:
        i = stack[-1]
        for j, pos in adj[i]:
            if not seen[j]:
                seen[j] = True
                tree.append(pos)
                stack.append(j)
                break
        else:
            stack.pop()
    if len(tree) != g.n - 1:
        raise Disconnected(f"graph has {g.n} vertices but only {len(tree) + 1} are reachable "
                           f"from vertex {g.labels[0]}")
    return spanning_tree(g, sorted(tree))


def kirchhoff_count(g):
    """Number of spanning trees by the matrix-tree theorem (unweighted)."""
    if g.n == 1:
        return 1
    D = incidence_matrix(g)
    L = D @ D.T
    return int(round(np.linalg.det(L[1:, 1:])))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True

    def copy(self):
        uf = _UnionFind(0)
        uf.parent = list(self.parent)
        return uf


def enumerate_spanning_trees(g, cap=DEFAULT_TREE_CAP):
    """All spanning trees, by include/exclude branching on edges in position order.

    Each branch either contracts the edge (keeps it) or deletes it; deletion
    is only explored while the remaining edges still connect the graph.
    """
    if not is_connected(g):
        raise Disconnected("graph is not connected")
    if kirchhoff_count(g) > cap:
        raise CapExceeded(f"graph has {kirchhoff_count(g)} spanning trees, cap is {cap}")
    ends = [g.endpoints(p) for p in range(g.m)]
    found = []

    def viable(k, uf, components):
        # can edges k.. still merge everything?
        uf = uf.copy()
        for p in range(k, g.m):
            if uf.union(*ends[p]):
                components -= 1
        return components == 1

    def branch(k, uf, chosen, components):
        if components == 1:
            found.append(tuple(chosen))
            if len(found) > cap:
                raise CapExceeded(f"more than {cap} spanning trees")
            return
        if k == g.m or not viable(k, uf, components):
            return
        i, j = ends[k]
        if uf.find(i) != uf.find(j):
            inc = uf.copy()
            inc.union(i, j)
            branch(k + 1, inc, chosen + [k], components - 1)
        branch(k + 1, uf, chosen, components)

    branch(0, _UnionFind(g.n), [], g.n)
    return [spanning_tree(g, edges) for edges in found]


def sample_spanning_trees(g, count, rng):
    """Up to ``count`` distinct spanning trees from Kruskal runs over random edge orders."""
    trees = {}
    for _ in range(20 * count):
        uf = _UnionFind(g.n)
        chosen = [int(p) for p in rng.permutation(g.m) if uf.union(*g.endpoints(int(p)))]
        if len(chosen) != g.n - 1:
            raise Disconnected("graph is not connected")
        key = tuple(sorted(chosen))
        trees.setdefault(key, spanning_tree(g, key))
        if len(trees) >= count:
            break
    return list(trees.values())


@dataclass(frozen=True)
class EdgeBasis:
    tree: SpanningTree = field(repr=False)
    D_T: np.ndarray
    D_cotree: np.ndarray
    T_T: np.ndarray
    R: np.ndarray

    @property
    def order(self):
        return self.tree.order


def fundamental_basis(g, t):
    """Tree/cotree incidence matrices and the cycle representation matrix.

    ``T_T`` solves ``(D_T^T D_T) X = D_T^T D_cotree`` and is snapped to
    integers; an entry further than 1e-9 from an integer raises
    NumericalFailure.
    """
    if t.graph is not g and t.graph != g:
        raise GraphError("spanning tree belongs to a different graph")
    D_T = incidence_matrix(g, t.tree_edges)
    D_C = incidence_matrix(g, t.cotree_edges)
    k = g.n - 1
    if D_C.shape[1]:
        X = solve_linear(D_T.T @ D_T, D_T.T @ D_C)
        snapped = np.round(X)
        err = np.max(np.abs(X - snapped))
        if err > SNAP_TOL:
            raise NumericalFailure(f"cycle matrix entry {err:.3e} away from an integer")
        T_T = snapped + 0.0
    else:
        T_T = np.zeros((k, 0))
    R = np.hstack([np.eye(k), T_T])
    return EdgeBasis(t, D_T, D_C, T_T, R)


@dataclass(frozen=True)
class Cycle:
    edges: tuple  # edge positions: tree edges in tree order, closing edge last
    closing_edge: int


def _check_simple_cycle(g, edges):
    deg = degrees(g, edges)
    touched = np.nonzero(deg)[0]
    if np.any(deg[touched] != 2):
        return False
    # connected on touched vertices
    adj = adjacency(g, edges)
    start = int(touched[0])
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j, _ in adj[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(touched)


def fundamental_cycles(g, t, basis=None):
    basis = basis or fundamental_basis(g, t)
    cycles = []
    for col, closing in enumerate(t.cotree_edges):
        members = tuple(t.tree_edges[r] for r in np.nonzero(basis.T_T[:, col])[0])
        edges = members + (closing,)
        if not _check_simple_cycle(g, edges):
            raise NumericalFailure(f"column {col} of the cycle matrix is not a simple cycle")
        cycles.append(Cycle(edges, closing))
    return cycles


def cycle_lengths(g, c):
    """(weighted length, edge count): sum of 1/w over the cycle, and its size."""
    w = g.weights
    return float(sum(1.0 / w[p] for p in c.edges)), len(c.edges)


def tree_path(g, u, v, positions=None):
    """Edge positions on the unique path from label u to label v in a tree."""
    src, dst = g.index(u), g.index(v)
    adj = adjacency(g, positions)
    back = {src: None}
    queue = [src]
    for i in queue:
        if i == dst:
            break
        for j, pos in adj[i]:
            if j not in back:
                back[j] = (i, pos)
                queue.append(j)
    if dst not in back:
        raise Disconnected(f"no path between {u} and {v}")
    path = []
    node = dst
    while back[node] is not None:
        node, pos = back[node]
        path.append(pos)
    return path[::-1]


def cycle_matrix_checks(g, t, basis=None, cycles=None):
    """Check the cycle-matrix identities; returns a list of failure messages.

    * diag(T^T T)[k] equals |C_k| - 1;
    * (T^T T)[i, j] is zero exactly when cycles i and j share no edge;
    * diag(T T^T)[e] counts the fundamental cycles containing tree edge e.
    """
    basis = basis or fundamental_basis(g, t)
    cycles = cycles if cycles is not None else fundamental_cycles(g, t, basis)
    T = basis.T_T
    gram = T.T @ T
    cover = T @ T.T
    problems = []
    for k, c in enumerate(cycles):
        if gram[k, k] != len(c.edges) - 1:
            problems.append(f"cycle {k}: diag {gram[k, k]} != length-1 {len(c.edges) - 1}")
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            disjoint = not set(cycles[i].edges) & set(cycles[j].edges)
            if (gram[i, j] == 0) != disjoint:
                problems.append(f"cycles {i},{j}: off-diagonal {gram[i, j]} vs disjoint={disjoint}")
    for r, pos in enumerate(t.tree_edges):
        count = sum(pos in c.edges for c in cycles)
        if cover[r, r] != count:
            problems.append(f"tree edge {pos}: membership {cover[r, r]} != {count}")
    return problems

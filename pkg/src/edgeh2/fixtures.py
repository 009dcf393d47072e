"""Named example graphs and random-graph generators used by tests and the CLI."""
from .graph import build_graph


def k2():
    return build_graph([(1, 1.0), (2, 1.0)], [(1, 2, 1.0)])


def triangle():
    """Triangle with distinct time scales and weights but three equally good trees."""
    return build_graph([(1, 1.0), (2, 2.0), (3, 3.0)],
                       [(1, 2, 3.0), (1, 3, 2.0), (2, 3, 1.0)])


def cycle4():
    """4-cycle with distinct weights and time scales."""
    return build_graph([(1, 1.0), (2, 2.5), (3, 0.7), (4, 4.0)],
                       [(1, 2, 1.5), (2, 3, 0.4), (3, 4, 6.0), (4, 1, 2.2)])


P6_CHORD_SHORT = (2, 3, 10.0)
P6_CHORD_LONG = (3, 6, 5.0)


def path6():
    """Unit-weight path 2-1-3-4-5-6 with unit time scales."""
    return build_graph([(i, 1.0) for i in range(1, 7)],
                       [(1, 2, 1.0), (1, 3, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 6, 1.0)])


def path6_with_chords():
    g = path6()
    return g.with_edge(*P6_CHORD_SHORT).with_edge(*P6_CHORD_LONG)


def random_tree(rng, n, low=0.1, high=10.0):
    """Random labelled tree on 1..n: each vertex attaches to a uniformly chosen earlier one."""
    vertices = [(i + 1, float(rng.uniform(low, high))) for i in range(n)]
    order = rng.permutation(n) + 1
    edges = []
    for k in range(1, n):
        parent = int(order[rng.integers(0, k)])
        edges.append((parent, int(order[k]), float(rng.uniform(low, high))))
    return build_graph(vertices, edges)


def random_connected_graph(rng, n, p=0.4, low=0.1, high=10.0):
    """Random tree plus each remaining vertex pair with probability ``p``."""
    tree = random_tree(rng, n, low, high)
    edges = list(tree.edges)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if tree.edge_position(i, j) is None and rng.random() < p:
                edges.append((i, j, float(rng.uniform(low, high))))
    order = rng.permutation(len(edges))
    return build_graph(tree.vertices, [edges[k] for k in order])


def random_non_edge(rng, g):
    """A uniformly random vertex pair not joined in ``g``, or None for complete graphs."""
    labels = g.labels
    pairs = [(a, b) for i, a in enumerate(labels) for b in labels[i + 1:]
             if g.edge_position(a, b) is None]
    if not pairs:
        return None
    return pairs[int(rng.integers(0, len(pairs)))]

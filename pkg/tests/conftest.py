from pathlib import Path

import numpy as np
import pytest

from edgeh2 import fixtures
from edgeh2.graph import tree_from_pairs

DEMO = Path(__file__).resolve().parent.parent / "demo"


@pytest.fixture
def k2():
    return fixtures.k2()


@pytest.fixture
def tri():
    return fixtures.triangle()


@pytest.fixture
def tri_t1(tri):
    return tree_from_pairs(tri, [(1, 2), (1, 3)])


@pytest.fixture
def tri_t2(tri):
    return tree_from_pairs(tri, [(1, 2), (2, 3)])


@pytest.fixture
def p6():
    return fixtures.path6()


@pytest.fixture
def demo_dir():
    return DEMO


def random_graphs(seed, count, n_min=3, n_max=8):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        yield fixtures.random_connected_graph(rng, n, p=float(rng.uniform(0.1, 0.7)))

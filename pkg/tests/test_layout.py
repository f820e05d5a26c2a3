import math
import random

import numpy as np
import pytest

from conftest import graph
from oracles import random_pairs
from sociogram.layout import _initial_positions, fr_layout


def separation(res, u="a", v="b"):
    (x1, y1), (x2, y2) = res.positions[u], res.positions[v]
    return math.hypot(x1 - x2, y1 - y2)


def test_empty_and_single():
    assert fr_layout(graph([])).positions == {}
    assert fr_layout(graph([], vertices=["a"])).positions == {"a": (500.0, 500.0)}
    assert fr_layout(graph([], vertices=["a"]), canvas=(200, 80)).positions == {"a": (100.0, 40.0)}


def test_deterministic():
    rng = random.Random(1)
    names, pairs = random_pairs(rng, 30, 0.1)
    g = graph(pairs, vertices=names)
    assert fr_layout(g, seed=4) == fr_layout(g, seed=4)
    assert fr_layout(g, seed=4) != fr_layout(g, seed=5)


def test_connected_pair_pulls_together_from_opposite_corners():
    g = graph([("a", "b")])
    start = {"a": (0.0, 0.0), "b": (1000.0, 1000.0)}
    res = fr_layout(g, iterations=10, initial=start)
    assert separation(res) < math.hypot(1000, 1000)


def test_zero_iterations_returns_seeded_placement():
    g = graph([("a", "b"), ("b", "c")])
    res = fr_layout(g, iterations=0, seed=9)
    init = _initial_positions(3, 9, 1000.0, 1000.0)
    assert [res.positions[v] for v in ("a", "b", "c")] == [tuple(map(float, p)) for p in init]


def test_relabeling_equivariance():
    pairs = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c")]
    relabel = {"a": "p", "b": "q", "c": "r", "d": "s"}  # keeps sorted order
    g = graph(pairs)
    h = graph([(relabel[u], relabel[v]) for u, v in pairs])
    pg, ph = fr_layout(g, seed=3).positions, fr_layout(h, seed=3).positions
    for v, xy in pg.items():
        assert ph[relabel[v]] == xy


def test_finite_and_clamped_on_large_graph():
    rng = np.random.default_rng(0)
    n = 10_000
    src = rng.integers(0, n, 20_000)
    dst = rng.integers(0, n, 20_000)
    g = graph([(f"v{a}", f"v{b}") for a, b in zip(src, dst)], vertices=[f"v{i}" for i in range(n)])
    res = fr_layout(g, iterations=1)
    xy = np.array(list(res.positions.values()))
    assert len(xy) == n and np.isfinite(xy).all()
    assert (xy >= 0).all() and (xy[:, 0] <= 1000).all() and (xy[:, 1] <= 1000).all()


def test_coincident_vertices_stay_finite():
    g = graph([("a", "b"), ("b", "c")])
    res = fr_layout(g, initial={v: (10.0, 10.0) for v in "abc"})
    assert all(math.isfinite(c) for xy in res.positions.values() for c in xy)


@pytest.mark.parametrize("kwargs", [{"repulsion": 0}, {"iterations": -1}, {"canvas": (0, 10)}])
def test_parameter_validation(kwargs):
    with pytest.raises(ValueError):
        fr_layout(graph([("a", "b")]), **kwargs)


def test_metadata():
    res = fr_layout(graph([("a", "b")]), repulsion=2.0, iterations=7, seed=11)
    assert (res.iterations_run, res.seed, res.repulsion_multiplier) == (7, 11, 2.0)

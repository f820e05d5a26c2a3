import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph
from oracles import clustering_oracle, density_oracle, geodesic_oracle, random_pairs
from sociogram.errors import Undefined, UndefinedMetricError, UnknownVertexError
from sociogram.graphcore import degree
from sociogram.metrics import (
    asymmetry_strength,
    compute_graph_stats,
    degree_distribution,
    density,
    geodesic_stats,
    global_clustering,
    local_clustering,
    max_edges,
    vertex_asymmetry,
)

TRIANGLE = [("a", "b"), ("b", "c"), ("c", "a")]
PATH4 = [("a", "b"), ("b", "c"), ("c", "d")]


def k4_minus_edge():
    return graph([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("c", "d")])


class TestClustering:
    def test_triangle(self):
        assert local_clustering(graph(TRIANGLE), "a") == 1.0
        assert global_clustering(graph(TRIANGLE)) == 1.0

    def test_path_centre(self):
        assert local_clustering(graph([("a", "b"), ("b", "c")]), "b") == 0.0

    def test_k4_minus_one_edge(self):
        assert local_clustering(k4_minus_edge(), "a") == pytest.approx(2 / 3)

    def test_star(self):
        assert global_clustering(graph([("c", f"x{i}") for i in range(4)])) == 0.0

    def test_reciprocal_arcs_do_not_double_count(self):
        g = graph(TRIANGLE + [(v, u) for u, v in TRIANGLE])
        assert global_clustering(g) == 1.0

    def test_low_degree_vertices_count_as_zero(self):
        g = graph(TRIANGLE + [("c", "d")])
        # a, b: 1; c: 1/3; d: 0
        assert global_clustering(g) == pytest.approx((1 + 1 + 1 / 3) / 4)

    def test_unknown_vertex(self):
        with pytest.raises(UnknownVertexError):
            local_clustering(graph(TRIANGLE), "zz")

    def test_empty_graph(self):
        with pytest.raises(UndefinedMetricError):
            global_clustering(graph([]))

    def test_oracle_corpus(self):
        rng = random.Random(6)
        for _ in range(100):
            names, pairs = random_pairs(rng, rng.randint(1, 12), rng.uniform(0.05, 0.7), loops=True)
            g = graph(pairs, vertices=names)
            assert abs(global_clustering(g) - float(clustering_oracle(names, pairs))) < 1e-12


class TestDensity:
    def test_complete_directed_triangle(self):
        assert density(graph(TRIANGLE + [(v, u) for u, v in TRIANGLE])) == 1.0

    def test_two_arcs(self):
        assert density(graph([("a", "b"), ("b", "c")])) == pytest.approx(1 / 3)

    def test_loops_and_duplicates_ignored(self):
        g = graph([("a", "b"), ("a", "b"), ("a", "a")], dedup="keep_all")
        assert density(g) == 0.5

    def test_too_small(self):
        with pytest.raises(UndefinedMetricError):
            density(graph([], vertices=["a"]))

    def test_oracle_corpus(self):
        rng = random.Random(7)
        for _ in range(100):
            names, pairs = random_pairs(rng, rng.randint(2, 20), rng.uniform(0.0, 0.8), loops=True)
            g = graph(pairs, vertices=names)
            assert abs(density(g) - float(density_oracle(names, pairs))) < 1e-12

    def test_max_edges(self):
        assert [max_edges(n) for n in (0, 1, 2, 5)] == [0, 0, 1, 10]


class TestGeodesics:
    def test_path(self):
        geo = geodesic_stats(graph(PATH4))
        assert geo.diameter_D == 3
        assert geo.d_avg == pytest.approx(10 / 6)

    def test_complete_k5(self):
        names = "abcde"
        geo = geodesic_stats(graph([(u, v) for u in names for v in names if u < v]))
        assert (geo.diameter_D, geo.d_avg) == (1, 1.0)

    def test_cross_component_pairs_excluded(self):
        geo = geodesic_stats(graph([("a", "b"), ("c", "d")]))
        assert (geo.diameter_D, geo.d_avg, geo.reachable_pairs) == (1, 1.0, 4)

    def test_no_edges(self):
        with pytest.raises(UndefinedMetricError):
            geodesic_stats(graph([], vertices=["a", "b"]))

    def test_oracle_corpus(self):
        rng = random.Random(8)
        checked = 0
        for _ in range(60):
            names, pairs = random_pairs(rng, rng.randint(2, 14), rng.uniform(0.05, 0.5))
            if not pairs:
                continue
            g = graph(pairs, vertices=names)
            avg, diam = geodesic_oracle(names, pairs)
            geo = geodesic_stats(g)
            assert geo.diameter_D == diam
            assert abs(geo.d_avg - float(avg)) < 1e-12
            checked += 1
        assert checked > 40


class TestDegreeDistribution:
    def test_star(self):
        hist = degree_distribution(graph([("c", "x"), ("c", "y"), ("c", "z")]), "total")
        assert hist.bins == {1: 3, 3: 1}

    def test_two_cycle(self):
        assert degree_distribution(graph([("a", "b"), ("b", "a")]), "in").bins == {1: 2}

    def test_points_drop_zero(self):
        hist = degree_distribution(graph([("a", "b")], vertices=["z"]), "in")
        assert hist.bins == {0: 2, 1: 1}
        assert hist.points() == [(1, 1)]
        assert hist.points(drop_zero=False) == [(0, 2), (1, 1)]

    def test_oracle_corpus(self):
        rng = random.Random(9)
        for _ in range(50):
            names, pairs = random_pairs(rng, rng.randint(1, 30), rng.uniform(0, 0.3), loops=True)
            g = graph(pairs, vertices=names)
            for mode in ("in", "out", "total"):
                hist = degree_distribution(g, mode)
                assert hist.total == len(names)
                expected = {}
                for v in names:
                    ins = len({u for u, w in pairs if w == v and u != v})
                    outs = len({w for u, w in pairs if u == v and w != v})
                    d = {"in": ins, "out": outs, "total": ins + outs}[mode]
                    expected[d] = expected.get(d, 0) + 1
                assert hist.bins == expected


class TestAsymmetry:
    @pytest.mark.parametrize(
        "n_in, n_out, expected",
        [(2498, 1910, 0.117), (2273, 1358, 0.224), (1983, 726, 0.436)],
    )
    def test_published_pairs(self, n_in, n_out, expected):
        assert round(asymmetry_strength(n_in, n_out), 3) == pytest.approx(expected, abs=1e-9)

    def test_symmetric(self):
        assert asymmetry_strength(40, 40) == 0.0

    def test_sentinels(self):
        assert asymmetry_strength(5, 0) == Undefined("infinite_asymmetry")
        assert asymmetry_strength(0, 5) == Undefined("zero_in_degree")
        assert asymmetry_strength(0, 0) == Undefined("no_edges")

    @settings(max_examples=200)
    @given(st.integers(1, 10**6), st.integers(1, 10**6))
    def test_antisymmetric(self, a, b):
        assert asymmetry_strength(a, b) == pytest.approx(-asymmetry_strength(b, a), abs=1e-12)

    def test_inward_star(self):
        res = vertex_asymmetry(graph([(f"x{i}", "hub") for i in range(9)]))
        assert (res.n_in, res.n_out) == (1, 9)
        assert res.r_vertex == pytest.approx(math.log10(1 / 9))
        # the endpoint reading is identically balanced
        assert res.n_in_endpoints == res.n_out_endpoints == 9
        assert res.r_vertex_endpoints == 0.0

    def test_needs_an_edge(self):
        with pytest.raises(UndefinedMetricError):
            vertex_asymmetry(graph([], vertices=["a"]))


class TestGraphStats:
    def test_sentinels_on_empty(self):
        stats = compute_graph_stats(graph([]))
        assert isinstance(stats.c_global, Undefined)
        assert isinstance(stats.rho, Undefined)
        assert isinstance(stats.r_vertex, Undefined)

    def test_triangle_values(self):
        stats = compute_graph_stats(graph(TRIANGLE))
        assert stats.c_global == 1.0 and stats.rho == 0.5
        assert stats.diameter_D == 1 and stats.max_edges == 3
        assert stats.r_vertex == 0.0


names = st.sampled_from([f"v{i}" for i in range(9)])
pair_lists = st.lists(st.tuples(names, names), min_size=1, max_size=30)


@settings(max_examples=150, deadline=None)
@given(pair_lists, st.randoms(use_true_random=False))
def test_relabeling_invariance(pairs, rnd):
    g = graph(pairs)
    perm = list(g.vertices)
    shuffled = perm[:]
    rnd.shuffle(shuffled)
    relabel = dict(zip(perm, (s.upper() + "_x" for s in shuffled)))
    h = graph([(relabel[u], relabel[v]) for u, v in pairs])
    a, b = compute_graph_stats(g), compute_graph_stats(h)
    for field in ("c_global", "rho", "diameter_D", "d_avg"):
        x, y = getattr(a, field), getattr(b, field)
        if isinstance(x, Undefined):
            assert x == y
        else:
            assert x == pytest.approx(y, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(pair_lists, names, names)
def test_adding_an_edge(pairs, u, v):
    g = graph(pairs)
    h = graph(pairs + [(u, v)])
    new_arc = u != v and (u, v) not in g.multiplicity
    if new_arc and len(g.vertices) == len(h.vertices) and len(g.vertices) >= 2:
        assert density(h) > density(g)
    if len(g.vertices) == len(h.vertices):
        ug, uh = graph(pairs), h
        from sociogram.metrics import _bfs_distances
        from sociogram.graphcore import undirected_view

        before, after = undirected_view(ug), undirected_view(uh)
        for s in before.vertex_list:
            d0 = _bfs_distances(before.adj, s)
            d1 = _bfs_distances(after.adj, s)
            for t, dist in d0.items():
                assert d1[t] <= dist


@settings(max_examples=100, deadline=None)
@given(pair_lists)
def test_stat_ranges(pairs):
    stats = compute_graph_stats(graph(pairs))
    if not isinstance(stats.c_global, Undefined):
        assert 0.0 <= stats.c_global <= 1.0
    if not isinstance(stats.rho, Undefined):
        assert 0.0 <= stats.rho <= 1.0
    if not isinstance(stats.d_avg, Undefined):
        assert stats.d_avg <= stats.diameter_D
    g = graph(pairs)
    assert sum(degree(g, v, "total") for v in g.vertices) % 2 == 0

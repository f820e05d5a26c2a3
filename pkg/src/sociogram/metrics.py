"""Global and per-vertex structural metrics.

Triplets and geodesics are computed on the undirected view; density uses the
distinct non-loop directed pairs. All accumulations are integer until a single
final division, so results do not depend on evaluation order.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass

from .errors import Undefined, UndefinedMetricError
from .graphcore import Sociogram, UndirectedGraph, degree, undirected_view

__all__ = [
    "AsymmetryResult",
    "DegreeHistogram",
    "GeodesicStats",
    "GraphStats",
    "asymmetry_strength",
    "compute_graph_stats",
    "degree_distribution",
    "density",
    "geodesic_stats",
    "global_clustering",
    "local_clustering",
    "max_edges",
    "vertex_asymmetry",
]


@dataclass(frozen=True)
class DegreeHistogram:
    mode: str
    bins: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.bins.values())

    def points(self, drop_zero: bool = True) -> list[tuple[int, int]]:
        """(degree, vertex count) pairs in ascending degree, for fitting."""
        return [(d, c) for d, c in sorted(self.bins.items()) if c > 0 and (d > 0 or not drop_zero)]


@dataclass(frozen=True)
class GeodesicStats:
    d_avg: float
    diameter_D: int
    reachable_pairs: int


@dataclass(frozen=True)
class AsymmetryResult:
    """Both readings of the in/out aggregate.

    ``n_in``/``n_out`` count vertices that receive / send at least one edge;
    ``n_in_endpoints``/``n_out_endpoints`` sum in-/out-degree over all edges
    with duplicates retained. The endpoint sums agree on any graph, which is
    kept here as a consistency check.
    """

    n_in: int
    n_out: int
    r_vertex: float | Undefined
    n_in_endpoints: int
    n_out_endpoints: int
    r_vertex_endpoints: float | Undefined


@dataclass(frozen=True)
class GraphStats:
    n_vertices: int
    n_edges: int
    duplicate_count: int
    c_global: float | Undefined
    rho: float | Undefined
    diameter_D: int | Undefined
    d_avg: float | Undefined
    max_edges: int
    r_vertex: float | Undefined
    n_in: int
    n_out: int


def local_clustering(g: Sociogram | UndirectedGraph, v: str) -> float:
    """Closed over all triplets centred on ``v``; 0 when deg(v) < 2."""
    ug = undirected_view(g)
    nbrs = ug.neighbors(v)
    k = len(nbrs)
    if k < 2:
        return 0.0
    links = sum(len(ug.adj[u] & nbrs) for u in nbrs) // 2
    return links / (k * (k - 1) / 2)


def global_clustering(g: Sociogram | UndirectedGraph) -> float:
    """Mean of local clustering over every vertex (low-degree vertices count as 0)."""
    ug = undirected_view(g)
    if not ug.adj:
        raise UndefinedMetricError("clustering of an empty graph")
    return math.fsum(local_clustering(ug, v) for v in ug.vertex_list) / len(ug.adj)


def max_edges(n_vertices: int) -> int:
    """Maximum undirected edge count n(n-1)/2."""
    return n_vertices * (n_vertices - 1) // 2


def density(g: Sociogram) -> float:
    n = len(g.vertices)
    if n < 2:
        raise UndefinedMetricError("density needs at least two vertices")
    return g.n_arcs / (n * (n - 1))


def _bfs_distances(adj, source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if w not in dist:
                dist[w] = du
                queue.append(w)
    return dist


def geodesic_stats(g: Sociogram | UndirectedGraph) -> GeodesicStats:
    """Average and maximum shortest-path length over ordered reachable pairs.

    Pairs in different components are ignored entirely.
    """
    ug = undirected_view(g)
    if len(ug.adj) < 2:
        raise UndefinedMetricError("geodesics need at least two vertices")
    total = 0
    pairs = 0
    diameter = 0
    for s in ug.vertex_list:
        dist = _bfs_distances(ug.adj, s)
        pairs += len(dist) - 1
        total += sum(dist.values())
        diameter = max(diameter, max(dist.values()))
    if pairs == 0:
        raise UndefinedMetricError("no reachable vertex pairs")
    return GeodesicStats(d_avg=total / pairs, diameter_D=diameter, reachable_pairs=pairs)


def degree_distribution(g: Sociogram, mode: str = "total") -> DegreeHistogram:
    counts = Counter(degree(g, v, mode) for v in g.vertex_list)
    return DegreeHistogram(mode=mode, bins=dict(sorted(counts.items())))


def asymmetry_strength(n_in: float, n_out: float) -> float | Undefined:
    """log10(n_in / n_out), or a sentinel when either side is zero."""
    if n_out <= 0 and n_in <= 0:
        return Undefined("no_edges")
    if n_out <= 0:
        return Undefined("infinite_asymmetry")
    if n_in <= 0:
        return Undefined("zero_in_degree")
    return math.log10(n_in / n_out)


def vertex_asymmetry(g: Sociogram) -> AsymmetryResult:
    n_in = sum(1 for v in g.vertex_list if g.predecessors(v))
    n_out = sum(1 for v in g.vertex_list if g.successors(v))
    # multiplicity keeps duplicates; loops contribute one in- and one out-endpoint each
    in_end = Counter()
    out_end = Counter()
    for (s, t), count in g.multiplicity.items():
        out_end[s] += count
        in_end[t] += count
    n_in_end = sum(in_end.values())
    n_out_end = sum(out_end.values())
    if n_in_end == 0:
        raise UndefinedMetricError("vertex asymmetry needs at least one edge")
    return AsymmetryResult(
        n_in=n_in,
        n_out=n_out,
        r_vertex=asymmetry_strength(n_in, n_out),
        n_in_endpoints=n_in_end,
        n_out_endpoints=n_out_end,
        r_vertex_endpoints=asymmetry_strength(n_in_end, n_out_end),
    )


def _or_undefined(fn, *args):
    try:
        return fn(*args)
    except UndefinedMetricError as exc:
        return Undefined(_reason(exc))


def _reason(exc: Exception) -> str:
    text = str(exc)
    if "empty" in text:
        return "empty_graph"
    if "two vertices" in text:
        return "too_few_vertices"
    if "reachable" in text:
        return "no_reachable_pairs"
    return "no_edges"


def compute_graph_stats(g: Sociogram) -> GraphStats:
    """All global metrics at once; undefined ones come back as sentinels."""
    ug = undirected_view(g)
    geo = _or_undefined(geodesic_stats, ug)
    if g.unique_edges:
        asym = vertex_asymmetry(g)
        r_vertex, n_in, n_out = asym.r_vertex, asym.n_in, asym.n_out
    else:
        r_vertex, n_in, n_out = Undefined("no_edges"), 0, 0
    return GraphStats(
        n_vertices=len(g.vertices),
        n_edges=g.unique_edges,
        duplicate_count=g.duplicate_count,
        c_global=_or_undefined(global_clustering, ug),
        rho=_or_undefined(density, g),
        diameter_D=geo if isinstance(geo, Undefined) else geo.diameter_D,
        d_avg=geo if isinstance(geo, Undefined) else geo.d_avg,
        max_edges=max_edges(len(g.vertices)),
        r_vertex=r_vertex,
        n_in=n_in,
        n_out=n_out,
    )


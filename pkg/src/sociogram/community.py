"""Clauset-Newman-Moore greedy modularity grouping.

Merge gains are tracked as exact integers: for blocks i, j with l_ij edges
between them and total degrees d_i, d_j,

    dQ = l_ij / m - d_i d_j / (2 m^2) = (2 m l_ij - d_i d_j) / (2 m^2)

so the numerator orders candidate merges exactly and ties fall back to the
smallest (i, j) block-id pair. Block ids are indices into the sorted vertex
list, and a merged block keeps the smaller id.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError, Undefined, UndefinedMetricError
from .graphcore import Sociogram, UndirectedGraph, undirected_view

__all__ = ["Dendrogram", "Grouping", "agglomerate", "best_bipartition", "cnm_partition", "modularity"]


@dataclass
class Grouping:
    """Partition of the vertex set, largest block first."""

    blocks: list[frozenset[str]]
    modularity_Q: float | Undefined
    labels: dict[int, str] = field(default_factory=dict)
    merges: int = 0

    def membership(self) -> dict[str, int]:
        return {v: i for i, block in enumerate(self.blocks) for v in block}


def _check_partition(ug: UndirectedGraph, partition: Iterable[Iterable[str]]) -> list[frozenset[str]]:
    blocks = [frozenset(b) for b in partition]
    seen: set[str] = set()
    for b in blocks:
        if not b:
            raise ContractError("partition contains an empty block")
        if seen & b:
            raise ContractError("partition blocks overlap")
        seen |= b
    if seen != set(ug.adj):
        raise ContractError("partition does not cover the vertex set exactly")
    return blocks


def modularity(g: Sociogram | UndirectedGraph, partition: Iterable[Iterable[str]]) -> float:
    """Newman modularity of ``partition`` on the undirected, weight-1 view."""
    ug = undirected_view(g)
    blocks = _check_partition(ug, partition)
    m = ug.n_edges
    if m == 0:
        raise UndefinedMetricError("modularity is undefined without edges")
    terms = []
    for b in blocks:
        deg = sum(len(ug.adj[v]) for v in b)
        inner = sum(len(ug.adj[v] & b) for v in b) // 2
        terms.append(inner / m - (deg / (2 * m)) ** 2)
    return math.fsum(terms)


@dataclass
class Dendrogram:
    """Merge sequence of a greedy agglomeration.

    ``merges[k] = (i, j, gain)`` merges block j into block i; ``gain`` is the
    integer numerator of dQ (divide by 2 m^2 for the real value). ``peak`` is
    the number of leading merges with positive gain, i.e. where CNM stops.
    """

    vertices: tuple[str, ...]
    m: int
    merges: list[tuple[int, int, int]]
    peak: int

    def blocks_after(self, n_merges: int) -> list[frozenset[str]]:
        parent = list(range(len(self.vertices)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j, _ in self.merges[:n_merges]:
            parent[find(j)] = find(i)
        groups: dict[int, list[str]] = {}
        for idx, v in enumerate(self.vertices):
            groups.setdefault(find(idx), []).append(v)
        blocks = [frozenset(b) for b in groups.values()]
        blocks.sort(key=lambda b: (-len(b), min(b)))
        return blocks


def agglomerate(g: Sociogram | UndirectedGraph, down_to: int | None = None) -> Dendrogram:
    """Greedy modularity agglomeration from singletons.

    With ``down_to=None`` merging stops at the first non-positive gain (plain
    CNM). Otherwise merging continues past the peak until ``down_to`` blocks
    remain: first over adjacent blocks, then, once none are adjacent, by
    joining the two blocks with the smallest total degree (the best
    remaining gain, -d_i d_j).
    """
    ug = undirected_view(g)
    verts = ug.vertex_list
    index = {v: i for i, v in enumerate(verts)}
    m = ug.n_edges
    two_m = 2 * m
    deg = [len(ug.adj[v]) for v in verts]
    links: list[dict[int, int]] = [{index[w]: 1 for w in ug.adj[v]} for v in verts]
    alive = [True] * len(verts)

    heap = []
    for i, nbrs in enumerate(links):
        for j in nbrs:
            if i < j:
                heap.append((-(two_m - deg[i] * deg[j]), i, j))
    heapq.heapify(heap)

    merges: list[tuple[int, int, int]] = []
    peak = None
    n_blocks = len(verts)
    target = down_to if down_to is not None else 1

    def gain(i: int, j: int) -> int:
        return two_m * links[i][j] - deg[i] * deg[j]

    while heap and n_blocks > target:
        neg, i, j = heapq.heappop(heap)
        if not (alive[i] and alive[j]) or j not in links[i] or gain(i, j) != -neg:
            continue
        if -neg <= 0 and peak is None:
            peak = len(merges)
            if down_to is None:
                break
        merges.append((i, j, -neg))
        alive[j] = False
        n_blocks -= 1
        deg[i] += deg[j]
        for k, l_jk in links[j].items():
            if k == i:
                continue
            links[i][k] = links[i].get(k, 0) + l_jk
            del links[k][j]
            links[k][i] = links[i][k]
        links[i].pop(j, None)
        links[j] = {}
        for k in links[i]:
            a, b = (i, k) if i < k else (k, i)
            heapq.heappush(heap, (-gain(a, b), a, b))
    if peak is None:
        peak = len(merges)

    if down_to is not None and n_blocks > down_to:
        # no adjacent blocks remain; best gain is -d_i d_j, i.e. the two lightest blocks
        pool = [(deg[i], i) for i in range(len(verts)) if alive[i]]
        heapq.heapify(pool)
        while n_blocks > down_to:
            d1, b1 = heapq.heappop(pool)
            d2, b2 = heapq.heappop(pool)
            i, j = (b1, b2) if b1 < b2 else (b2, b1)
            merges.append((i, j, -d1 * d2))
            alive[j] = False
            n_blocks -= 1
            heapq.heappush(pool, (d1 + d2, i))
    return Dendrogram(verts, m, merges, peak)


def _grouping(ug: UndirectedGraph, blocks: list[frozenset[str]], merges: int) -> Grouping:
    q: float | Undefined = modularity(ug, blocks) if ug.n_edges else Undefined("no_edges")
    return Grouping(blocks=blocks, modularity_Q=q, merges=merges)


def cnm_partition(g: Sociogram | UndirectedGraph) -> Grouping:
    """CNM grouping cut at peak modularity.

    An edgeless graph yields all singletons with ``modularity_Q`` undefined.
    """
    ug = undirected_view(g)
    dendro = agglomerate(ug)
    return _grouping(ug, dendro.blocks_after(dendro.peak), dendro.peak)


def best_bipartition(g: Sociogram | UndirectedGraph) -> tuple[Grouping, Grouping]:
    """(CNM grouping, two-block cut of the same dendrogram) from one agglomeration run."""
    ug = undirected_view(g)
    dendro = agglomerate(ug, down_to=min(2, len(ug.adj)) or None)
    peak = _grouping(ug, dendro.blocks_after(dendro.peak), dendro.peak)
    two = _grouping(ug, dendro.blocks_after(len(dendro.merges)), len(dendro.merges))
    return peak, two


def order_blocks(blocks: Sequence[Iterable[str]]) -> list[frozenset[str]]:
    out = [frozenset(b) for b in blocks]
    out.sort(key=lambda b: (-len(b), min(b)))
    return out

"""Betweenness, PageRank and eigenvector centrality.

Vertices are indexed by sorted id everywhere, so sparse matrix products and
Brandes passes visit them in a fixed order and repeated runs are bit-identical.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .graphcore import Sociogram

DEFAULT_DAMPING = 0.85
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200

__all__ = [
    "CentralityScores",
    "IterativeResult",
    "betweenness",
    "centrality_scores",
    "eigenvector_centrality",
    "pagerank",
]


@dataclass
class IterativeResult:
    scores: dict[str, float]
    converged: bool
    iterations: int
    eigenvalue: float | None = None


@dataclass
class CentralityScores:
    betweenness: dict[str, float]
    pagerank: dict[str, float]
    eigenvector: dict[str, float]
    pagerank_converged: bool = True
    eigenvector_converged: bool = True
    flags: list[str] = field(default_factory=list)


def _index_adjacency(g: Sociogram, directed: bool) -> list[list[int]]:
    index = {v: i for i, v in enumerate(g.vertex_list)}
    adj = []
    for v in g.vertex_list:
        nbrs = g.successors(v) if directed else g.successors(v) | g.predecessors(v)
        adj.append(sorted(index[w] for w in nbrs))
    return adj


def _brandes_source(adj: list[list[int]], s: int) -> list[float]:
    """Dependency of ``s`` on every vertex (one Brandes pass)."""
    n = len(adj)
    sigma = [0] * n
    dist = [-1] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    sigma[s] = 1
    dist[s] = 0
    order = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sigma[v]
                preds[w].append(v)
    delta = [0.0] * n
    for w in reversed(order):
        coeff = (1.0 + delta[w]) / sigma[w]
        for v in preds[w]:
            delta[v] += sigma[v] * coeff
    delta[s] = 0.0
    return delta


_WORKER_ADJ: list[list[int]] = []


def _init_worker(adj: list[list[int]]) -> None:
    global _WORKER_ADJ
    _WORKER_ADJ = adj


def _worker_chunk(sources: list[int]) -> list[list[float]]:
    return [_brandes_source(_WORKER_ADJ, s) for s in sources]


def betweenness(
    g: Sociogram,
    directed: bool = False,
    normalized: bool = False,
    workers: int = 1,
) -> dict[str, float]:
    """Raw shortest-path betweenness by Brandes accumulation.

    Undirected mode counts each unordered {s, t} pair once. With
    ``normalized=True`` scores are divided by the number of pairs not
    involving the vertex ((n-1)(n-2), halved for undirected).

    ``workers > 1`` spreads source passes over processes; per-source
    dependencies are still added in source order, so the output does not
    depend on the worker count.
    """
    adj = _index_adjacency(g, directed)
    n = len(adj)
    total = [0.0] * n
    sources = list(range(n))
    if workers > 1 and n > 64:
        chunk = max(1, math.ceil(n / (workers * 4)))
        chunks = [sources[i : i + chunk] for i in range(0, n, chunk)]
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(adj,)) as pool:
            for deltas in pool.map(_worker_chunk, chunks):
                for delta in deltas:
                    for i, d in enumerate(delta):
                        total[i] += d
    else:
        for s in sources:
            delta = _brandes_source(adj, s)
            for i, d in enumerate(delta):
                total[i] += d
    scale = 1.0 if directed else 0.5
    if normalized and n > 2:
        scale /= (n - 1) * (n - 2) * (1.0 if directed else 0.5)
    return {v: total[i] * scale for i, v in enumerate(g.vertex_list)}


def _transition(g: Sociogram) -> tuple[sparse.csr_matrix, np.ndarray]:
    """Column-stochastic transition matrix over distinct arcs and the dangling mask."""
    index = {v: i for i, v in enumerate(g.vertex_list)}
    n = len(index)
    rows, cols, vals = [], [], []
    dangling = np.zeros(n, dtype=bool)
    for v in g.vertex_list:
        out = sorted(g.successors(v))
        j = index[v]
        if not out:
            dangling[j] = True
            continue
        w = 1.0 / len(out)
        for u in out:
            rows.append(index[u])
            cols.append(j)
            vals.append(w)
    m = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    m.sum_duplicates()
    m.sort_indices()
    return m, dangling


def pagerank(
    g: Sociogram,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> IterativeResult:
    """PageRank by power iteration with uniform teleport.

    Dangling vertices spread their mass uniformly. Iteration stops once the
    L1 change falls below ``tol``; if ``max_iter`` is hit first the scores are
    still returned, with ``converged=False``.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    n = len(g.vertices)
    if n == 0:
        return IterativeResult({}, True, 0)
    m, dangling = _transition(g)
    x = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        leak = x[dangling].sum()
        nxt = damping * (m @ x) + (damping * leak / n + teleport)
        nxt /= nxt.sum()
        change = np.abs(nxt - x).sum()
        x = nxt
        if change < tol:
            converged = True
            break
    return IterativeResult({v: float(x[i]) for i, v in enumerate(g.vertex_list)}, converged, it)


def eigenvector_centrality(
    g: Sociogram,
    tol: float = DEFAULT_TOL,
    max_iter: int = 1000,
) -> IterativeResult:
    """Principal eigenvector of the undirected adjacency, scaled to max 1.

    Iterates with A + I, which has the same eigenvectors but a strictly
    dominant top eigenvalue, so bipartite graphs (stars, paths) converge
    instead of oscillating. On a disconnected graph the dominant component
    wins and the others decay toward 0.
    """
    index = {v: i for i, v in enumerate(g.vertex_list)}
    n = len(index)
    rows, cols = [], []
    for u, v in g.arcs():
        rows += [index[u], index[v]]
        cols += [index[v], index[u]]
    if not rows:
        return IterativeResult({v: 0.0 for v in g.vertex_list}, False, 0)
    a = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    a.data[:] = 1.0  # reciprocal arcs collapse to a single undirected edge
    a.sort_indices()
    shifted = a + sparse.identity(n, format="csr")
    x = np.ones(n)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        nxt = shifted @ x
        nxt /= nxt.max()
        change = np.abs(nxt - x).max()
        x = nxt
        if change < tol:
            converged = True
            break
    ax = a @ x
    eigenvalue = float(x @ ax / (x @ x))
    return IterativeResult({v: float(x[i]) for i, v in enumerate(g.vertex_list)}, converged, it, eigenvalue)


def centrality_scores(
    g: Sociogram,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    directed_betweenness: bool = False,
    workers: int = 1,
) -> CentralityScores:
    pr = pagerank(g, damping, tol, max_iter)
    ev = eigenvector_centrality(g, tol, max(max_iter, 1000))
    flags = []
    if not pr.converged:
        flags.append("pagerank_not_converged")
    if not ev.converged:
        flags.append("eigenvector_not_converged" if g.n_arcs else "eigenvector_no_edges")
    return CentralityScores(
        betweenness=betweenness(g, directed=directed_betweenness, workers=workers),
        pagerank=pr.scores,
        eigenvector=ev.scores,
        pagerank_converged=pr.converged,
        eigenvector_converged=ev.converged,
        flags=flags,
    )

"""Six-way archetype classification of (sub)graphs and labelled synthetic generators."""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, fields
from enum import Enum
from importlib import resources
from pathlib import Path

from .community import best_bipartition
from .errors import ConfigurationError, ContractError, is_defined
from .graphcore import Edge, Sociogram, connected_components, undirected_view

__all__ = [
    "ArchetypeKind",
    "ArchetypeLabel",
    "ClassifierConfig",
    "FeatureVector",
    "classify_archetype",
    "features",
    "generate_archetype",
]


class ArchetypeKind(str, Enum):
    UNIFIED = "unified"
    IN_HUB = "in_hub"
    OUT_HUB = "out_hub"
    MULTI_TOPIC = "multi_topic"
    POLARIZED = "polarized"
    FRAGMENTED = "fragmented"


@dataclass(frozen=True)
class FeatureVector:
    """Label-free structural features of a graph.

    Edge counts are distinct non-loop directed pairs. ``bipartition_Q`` and
    ``cross_block_edge_fraction`` come from the two-block cut of the CNM
    dendrogram; ``modularity_Q`` is the CNM peak. Isolates are vertices with
    no non-loop edge, so self-tweet-only vertices count as isolates.
    """

    n_vertices: int
    n_edges: int
    isolate_fraction: float
    largest_component_fraction: float
    largest_component_density: float
    hub_in_share: float
    hub_out_share: float
    bipartition_Q: float
    cross_block_edge_fraction: float
    modularity_Q: float
    component_count: int
    self_loop_fraction: float


@dataclass(frozen=True)
class ArchetypeLabel:
    kind: ArchetypeKind
    confidence: float


@dataclass(frozen=True)
class ClassifierConfig:
    hub_share: float = 0.6
    hub_other_max: float = 0.2
    isolate_fraction: float = 0.5
    polarized_bipartition_q: float = 0.3
    polarized_cross_fraction: float = 0.05
    polarized_extra_q: float = 0.1
    unified_density: float = 0.3
    unified_component_fraction: float = 0.8

    @classmethod
    def load(cls, path: str | Path) -> "ClassifierConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigurationError(f"classifier config not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigurationError(f"{path}: unknown classifier keys {unknown}")
        return cls(**{k: float(v) for k, v in raw.items()})

    @classmethod
    def default(cls) -> "ClassifierConfig":
        with resources.as_file(resources.files("sociogram") / "data" / "classifier.json") as path:
            return cls.load(path)

    def to_dict(self) -> dict:
        return asdict(self)


def features(g: Sociogram) -> FeatureVector:
    if not g.vertices:
        raise ContractError("features need at least one vertex")
    n = len(g.vertices)
    ug = undirected_view(g)
    m_arcs = g.n_arcs
    comps = connected_components(ug)
    largest = comps[0]
    isolates = sum(1 for v in g.vertex_list if not ug.adj[v])
    lc_edges = sum(len(ug.adj[v]) for v in largest) // 2
    lc_pairs = len(largest) * (len(largest) - 1) // 2
    max_in = max(len(g.predecessors(v)) for v in g.vertex_list)
    max_out = max(len(g.successors(v)) for v in g.vertex_list)

    if ug.n_edges:
        peak, two = best_bipartition(ug)
        bi_q = two.modularity_Q
        side = two.membership()
        cross = sum(1 for u, v in ug.edges() if side[u] != side[v])
        cross_frac = cross / ug.n_edges
        peak_q = peak.modularity_Q
    else:
        bi_q = peak_q = 0.0
        cross_frac = 0.0
    return FeatureVector(
        n_vertices=n,
        n_edges=m_arcs,
        isolate_fraction=isolates / n,
        largest_component_fraction=len(largest) / n,
        largest_component_density=lc_edges / lc_pairs if lc_pairs else 0.0,
        hub_in_share=max_in / m_arcs if m_arcs else 0.0,
        hub_out_share=max_out / m_arcs if m_arcs else 0.0,
        bipartition_Q=bi_q if is_defined(bi_q) else 0.0,
        cross_block_edge_fraction=cross_frac,
        modularity_Q=peak_q if is_defined(peak_q) else 0.0,
        component_count=len(comps),
        self_loop_fraction=len(g.self_loops) / n,
    )


def _clamp(x: float) -> float:
    return min(1.0, max(0.0, x))


def _above(value: float, threshold: float) -> float:
    return _clamp((value - threshold) / (1.0 - threshold)) if threshold < 1 else 1.0


def _below(value: float, threshold: float) -> float:
    return _clamp((threshold - value) / threshold) if threshold > 0 else 1.0


def classify_archetype(f: FeatureVector, config: ClassifierConfig | None = None) -> ArchetypeLabel:
    """First matching rule wins: fragmented, in_hub, out_hub, polarized, unified.

    Anything else is multi_topic. Confidence is how far the deciding feature
    clears its threshold, rescaled to [0, 1]; it is not a probability.
    """
    c = config or ClassifierConfig()
    K = ArchetypeKind
    if f.isolate_fraction >= c.isolate_fraction:
        return ArchetypeLabel(K.FRAGMENTED, _above(f.isolate_fraction, c.isolate_fraction))
    if f.hub_in_share >= c.hub_share and f.hub_out_share < c.hub_other_max:
        return ArchetypeLabel(K.IN_HUB, _above(f.hub_in_share, c.hub_share))
    if f.hub_out_share >= c.hub_share and f.hub_in_share < c.hub_other_max:
        return ArchetypeLabel(K.OUT_HUB, _above(f.hub_out_share, c.hub_share))
    if (
        f.bipartition_Q >= c.polarized_bipartition_q
        and f.cross_block_edge_fraction < c.polarized_cross_fraction
        and f.modularity_Q - f.bipartition_Q < c.polarized_extra_q
    ):
        return ArchetypeLabel(K.POLARIZED, _above(f.bipartition_Q, c.polarized_bipartition_q))
    if (
        f.largest_component_fraction >= c.unified_component_fraction
        and f.largest_component_density >= c.unified_density
    ):
        return ArchetypeLabel(K.UNIFIED, _above(f.largest_component_density, c.unified_density))
    return ArchetypeLabel(K.MULTI_TOPIC, _below(f.largest_component_density, c.unified_density))


# generators

def _names(n: int) -> list[str]:
    width = len(str(n - 1))
    return [f"v{i:0{width}d}" for i in range(n)]


def _dense_block(rng: random.Random, members: list[str], p: float) -> list[Edge]:
    """Random orientation per pair, plus a Hamiltonian path so the block is connected."""
    edges = []
    for i, u in enumerate(members):
        for w in members[i + 1 :]:
            if rng.random() < p:
                edges.append(Edge(u, w) if rng.random() < 0.5 else Edge(w, u))
    for u, w in zip(members, members[1:]):
        edges.append(Edge(u, w))
    return edges


def _hub(rng: random.Random, verts: list[str], inward: bool) -> list[Edge]:
    center, leaves = verts[0], verts[1:]
    edges = [Edge(v, center) if inward else Edge(center, v) for v in leaves]
    for _ in range(max(0, len(verts) // 10)):
        a, b = rng.sample(leaves, 2)
        edges.append(Edge(a, b))
    return edges


def _polarized(rng: random.Random, verts: list[str]) -> list[Edge]:
    half = len(verts) // 2
    left, right = verts[:half], verts[half:]
    p = min(0.5, 12.0 / half)
    edges = _dense_block(rng, left, p) + _dense_block(rng, right, p)
    n_cross = max(1, int(0.02 * len(edges)))
    for _ in range(n_cross):
        edges.append(Edge(rng.choice(left), rng.choice(right)))
    return edges


def _fragmented(rng: random.Random, verts: list[str]) -> tuple[list[Edge], list[str]]:
    shuffled = verts[:]
    rng.shuffle(shuffled)
    n_iso = -(-len(verts) * 13 // 20)  # ceil(0.65 n)
    isolated, rest = shuffled[:n_iso], shuffled[n_iso:]
    edges = [Edge(v, v) for v in isolated if rng.random() < 0.5]
    i = 0
    while i < len(rest):
        size = min(rng.choice((2, 3)), len(rest) - i)
        group = rest[i : i + size]
        if size == 1:
            edges.append(Edge(group[0], group[0]))
        for u, w in zip(group, group[1:]):
            edges.append(Edge(u, w) if rng.random() < 0.5 else Edge(w, u))
        i += size
    return edges, isolated


def _unified(rng: random.Random, verts: list[str]) -> list[Edge]:
    return _dense_block(rng, verts, 0.45)


def _multi_topic(rng: random.Random, verts: list[str]) -> list[Edge]:
    n = len(verts)
    n_out = max(1, n // 10)
    core = verts[: n - n_out]
    k = min(rng.randint(3, 6), max(3, len(core) // 4))
    bounds = [round(i * len(core) / k) for i in range(k + 1)]
    blocks = [core[bounds[i] : bounds[i + 1]] for i in range(k)]
    edges = []
    for block in blocks:
        edges += _dense_block(rng, block, min(0.5, 10.0 / max(1, len(block))))
    for a, b in zip(blocks, blocks[1:]):
        edges.append(Edge(rng.choice(a), rng.choice(b)))
    for v in verts[n - n_out :]:
        if rng.random() < 0.5:
            edges.append(Edge(v, rng.choice(core)))
    return edges


def generate_archetype(kind: ArchetypeKind | str, size: int, seed: int) -> Sociogram:
    """Seeded synthetic graph of the given archetype.

    Deterministic per ``(kind, size, seed)``; vertex ids are ``v000`` style.
    """
    kind = ArchetypeKind(kind)
    if size < 5:
        raise ContractError("archetype graphs need size >= 5")
    rng = random.Random(f"{kind.value}:{size}:{seed}")
    verts = _names(size)
    if kind is ArchetypeKind.IN_HUB:
        edges = _hub(rng, verts, inward=True)
    elif kind is ArchetypeKind.OUT_HUB:
        edges = _hub(rng, verts, inward=False)
    elif kind is ArchetypeKind.POLARIZED:
        edges = _polarized(rng, verts)
    elif kind is ArchetypeKind.FRAGMENTED:
        edges, _ = _fragmented(rng, verts)
    elif kind is ArchetypeKind.UNIFIED:
        edges = _unified(rng, verts)
    else:
        edges = _multi_topic(rng, verts)
    return Sociogram(edges, vertices=verts)

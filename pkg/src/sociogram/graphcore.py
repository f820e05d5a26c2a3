"""Directed multigraph model, edge-list CSV ingestion and structural views.

Vertex ids are screen names, stripped and case-folded. Self-loops are kept in
storage (and tallied per vertex) but never show up in the adjacency views that
the metric modules consume.
"""

from __future__ import annotations

import csv
import io
from collections import Counter, deque
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from types import MappingProxyType
from typing import IO, Iterable, Iterator, Mapping

from .errors import FormatError, UnknownVertexError

__all__ = [
    "Dedup",
    "Edge",
    "EdgeKind",
    "EdgeListDocument",
    "Sociogram",
    "UndirectedGraph",
    "build_graph",
    "connected_components",
    "degree",
    "normalize_vertex",
    "parse_edge_csv",
    "read_edge_csv",
    "undirected_view",
    "write_edge_csv",
]

REQUIRED_COLUMNS = ("source", "target")
OPTIONAL_COLUMNS = ("kind", "text", "timestamp")


class EdgeKind(str, Enum):
    TWEET = "tweet"
    RETWEET = "retweet"
    MENTION = "mention"
    REPLY = "reply"

    @classmethod
    def parse(cls, raw: str | None) -> "EdgeKind":
        if raw is None or not raw.strip():
            return cls.TWEET
        key = raw.strip().lower().replace("_", " ").replace("-", " ")
        try:
            return _KIND_ALIASES[key]
        except KeyError:
            raise ValueError(f"unknown edge kind {raw!r}") from None


# NodeXL writes "Tweet", "Retweet", "Mentions", "Replies to" in its relationship column.
_KIND_ALIASES = {
    "tweet": EdgeKind.TWEET,
    "retweet": EdgeKind.RETWEET,
    "mention": EdgeKind.MENTION,
    "mentions": EdgeKind.MENTION,
    "reply": EdgeKind.REPLY,
    "replies to": EdgeKind.REPLY,
    "replies": EdgeKind.REPLY,
}


class Dedup(str, Enum):
    KEEP_ALL = "keep_all"
    COLLAPSE_PAIRS = "collapse_pairs"

    @classmethod
    def parse(cls, raw: "str | Dedup") -> "Dedup":
        if isinstance(raw, Dedup):
            return raw
        aliases = {"keep": cls.KEEP_ALL, "collapse": cls.COLLAPSE_PAIRS}
        return aliases.get(raw) or cls(raw)


def normalize_vertex(raw: str) -> str:
    return raw.strip().casefold()


def _parse_timestamp(raw: str | None) -> datetime | None:
    if raw is None or not raw.strip():
        return None
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    stamp = datetime.fromisoformat(text)
    if stamp.tzinfo is None:
        return stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: EdgeKind = EdgeKind.TWEET
    text: str | None = None
    timestamp: datetime | None = None

    def __post_init__(self) -> None:
        if not self.source or not self.target:
            raise ValueError("edge endpoints must be non-empty")
        if not isinstance(self.kind, EdgeKind):
            object.__setattr__(self, "kind", EdgeKind.parse(self.kind))

    @property
    def pair(self) -> tuple[str, str]:
        return (self.source, self.target)

    @property
    def is_self_loop(self) -> bool:
        return self.source == self.target


@dataclass
class EdgeListDocument:
    """Result of parsing an edge CSV.

    ``rows`` holds the raw records of accepted rows, parallel to ``edges``.
    Rejected rows only appear in ``errors`` as ``(line_number, message)``.
    """

    header: list[str]
    rows: list[dict[str, str]] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    errors: list[tuple[int, str]] = field(default_factory=list)


def parse_edge_csv(stream: IO[bytes] | IO[str] | bytes) -> EdgeListDocument:
    """Parse a UTF-8 edge-list CSV.

    Column order is free; only ``source`` and ``target`` are mandatory, and
    ``kind``, ``text``, ``timestamp`` are picked up when present. Unknown
    columns are ignored. Malformed rows are skipped and recorded with their
    line number.

    Raises:
        FormatError: the stream is not UTF-8 or lacks a mandatory column.
        OSError: the stream cannot be read.
    """
    raw = stream if isinstance(stream, (bytes, bytearray)) else stream.read()
    if isinstance(raw, (bytes, bytearray)):
        try:
            text = bytes(raw).decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise FormatError(f"input is not valid UTF-8: {exc}") from exc
    else:
        text = raw.lstrip("\ufeff")

    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header_row = next(reader)
    except StopIteration:
        raise FormatError("missing header row") from None
    header = [name.strip().lower() for name in header_row]
    missing = [col for col in REQUIRED_COLUMNS if col not in header]
    if missing:
        raise FormatError(f"header lacks mandatory column(s): {', '.join(missing)}")
    index = {name: header.index(name) for name in REQUIRED_COLUMNS + OPTIONAL_COLUMNS if name in header}

    doc = EdgeListDocument(header=header)
    for record in reader:
        line = reader.line_num
        if not record or all(not cell.strip() for cell in record):
            continue
        if len(record) != len(header):
            doc.errors.append((line, f"expected {len(header)} fields, got {len(record)}"))
            continue
        values = {name: record[i] for name, i in index.items()}
        source = normalize_vertex(values["source"])
        target = normalize_vertex(values["target"])
        if not source or not target:
            doc.errors.append((line, "empty source or target"))
            continue
        try:
            kind = EdgeKind.parse(values.get("kind"))
            stamp = _parse_timestamp(values.get("timestamp"))
        except ValueError as exc:
            doc.errors.append((line, str(exc)))
            continue
        text_value = values.get("text")
        doc.rows.append(dict(zip(header, record)))
        doc.edges.append(Edge(source, target, kind, text_value if text_value else None, stamp))
    return doc


def read_edge_csv(path) -> EdgeListDocument:
    with open(path, "rb") as handle:
        return parse_edge_csv(handle)


def write_edge_csv(g: "Sociogram", stream: IO[str]) -> None:
    """Serialize ``g.edges`` in the format :func:`parse_edge_csv` reads.

    Isolated vertices have no edge row and are therefore not preserved.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["source", "target", "kind", "text", "timestamp"])
    for e in g.edges:
        stamp = e.timestamp.isoformat().replace("+00:00", "Z") if e.timestamp else ""
        writer.writerow([e.source, e.target, e.kind.value, e.text or "", stamp])


class Sociogram:
    """Immutable directed multigraph of users and communication edges.

    Attributes:
        vertices: frozenset of vertex ids.
        vertex_list: the same ids, sorted; every deterministic iteration uses it.
        edges: stored edges. Under ``collapse_pairs`` only the first edge of
            each ordered (source, target) pair is kept.
        unique_edges: number of distinct ordered pairs (self-loops included).
        duplicate_count: number of input edges repeating an earlier pair.
        self_loops: per-vertex count of self-loop edges in the input.
    """

    __slots__ = (
        "vertices",
        "vertex_list",
        "edges",
        "dedup",
        "unique_edges",
        "duplicate_count",
        "self_loops",
        "multiplicity",
        "_succ",
        "_pred",
    )

    def __init__(
        self,
        edges: Iterable[Edge] = (),
        vertices: Iterable[str] = (),
        dedup: Dedup | str = Dedup.COLLAPSE_PAIRS,
    ) -> None:
        dedup = Dedup.parse(dedup)
        verts = set(vertices)
        kept: list[Edge] = []
        multiplicity: Counter[tuple[str, str]] = Counter()
        loops: Counter[str] = Counter()
        succ: dict[str, set[str]] = {}
        pred: dict[str, set[str]] = {}
        for e in edges:
            verts.add(e.source)
            verts.add(e.target)
            first = e.pair not in multiplicity
            multiplicity[e.pair] += 1
            if e.is_self_loop:
                loops[e.source] += 1
            elif first:
                succ.setdefault(e.source, set()).add(e.target)
                pred.setdefault(e.target, set()).add(e.source)
            if first or dedup is Dedup.KEEP_ALL:
                kept.append(e)
        if any(not v for v in verts):
            raise ValueError("vertex ids must be non-empty")

        self.dedup = dedup
        self.vertices = frozenset(verts)
        self.vertex_list = tuple(sorted(verts))
        self.edges = tuple(kept)
        self.unique_edges = len(multiplicity)
        self.duplicate_count = sum(multiplicity.values()) - len(multiplicity)
        self.multiplicity = MappingProxyType(dict(multiplicity))
        self.self_loops = MappingProxyType(dict(loops))
        empty: frozenset[str] = frozenset()
        self._succ = {v: frozenset(succ.get(v, empty)) for v in self.vertex_list}
        self._pred = {v: frozenset(pred.get(v, empty)) for v in self.vertex_list}

    def __repr__(self) -> str:
        return (
            f"Sociogram(|V|={len(self.vertices)}, unique_edges={self.unique_edges}, "
            f"duplicates={self.duplicate_count}, dedup={self.dedup.value})"
        )

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self.vertices

    @property
    def total_edges(self) -> int:
        return self.unique_edges + self.duplicate_count

    def _check(self, v: str) -> None:
        if v not in self.vertices:
            raise UnknownVertexError(v)

    def successors(self, v: str) -> frozenset[str]:
        """Distinct out-neighbours of ``v``, self excluded."""
        self._check(v)
        return self._succ[v]

    def predecessors(self, v: str) -> frozenset[str]:
        self._check(v)
        return self._pred[v]

    def arcs(self) -> Iterator[tuple[str, str]]:
        """Distinct non-loop ordered pairs in deterministic order."""
        for u in self.vertex_list:
            for v in sorted(self._succ[u]):
                yield (u, v)

    @property
    def n_arcs(self) -> int:
        return sum(len(s) for s in self._succ.values())

    def subgraph(self, members: Iterable[str]) -> "Sociogram":
        """Induced subgraph over ``members``; all input edges are re-fed so duplicates survive."""
        keep = set(members)
        for v in keep:
            self._check(v)
        edges = []
        for (s, t), count in self.multiplicity.items():
            if s in keep and t in keep:
                edges.extend([Edge(s, t)] * count)
        return Sociogram(edges, vertices=keep, dedup=self.dedup)


def build_graph(doc: EdgeListDocument, dedup: Dedup | str = Dedup.COLLAPSE_PAIRS) -> Sociogram:
    return Sociogram(doc.edges, dedup=dedup)


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph: no loops, no parallel edges."""

    adj: Mapping[str, frozenset[str]]
    n_edges: int

    @property
    def vertex_list(self) -> tuple[str, ...]:
        return tuple(sorted(self.adj))

    def neighbors(self, v: str) -> frozenset[str]:
        try:
            return self.adj[v]
        except KeyError:
            raise UnknownVertexError(v) from None

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    def edges(self) -> Iterator[tuple[str, str]]:
        for u in sorted(self.adj):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield (u, v)


def undirected_view(g: Sociogram | UndirectedGraph) -> UndirectedGraph:
    """Symmetrize ``g``: {u, v} is an edge iff an arc exists either way. Loops are dropped."""
    if isinstance(g, UndirectedGraph):
        return g
    adj = {v: g._succ[v] | g._pred[v] for v in g.vertex_list}
    n_edges = sum(len(n) for n in adj.values()) // 2
    return UndirectedGraph(MappingProxyType(adj), n_edges)


def degree(g: Sociogram, v: str, mode: str = "total") -> int:
    """In, out or total degree of ``v`` over distinct non-loop pairs."""
    if mode == "in":
        return len(g.predecessors(v))
    if mode == "out":
        return len(g.successors(v))
    if mode == "total":
        return len(g.predecessors(v)) + len(g.successors(v))
    raise ValueError(f"mode must be in/out/total, got {mode!r}")


def connected_components(g: Sociogram | UndirectedGraph) -> list[frozenset[str]]:
    """Weakly connected components, largest first (ties by smallest member)."""
    ug = undirected_view(g)
    seen: set[str] = set()
    blocks = []
    for start in ug.vertex_list:
        if start in seen:
            continue
        seen.add(start)
        block = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in ug.adj[u]:
                if w not in seen:
                    seen.add(w)
                    block.append(w)
                    queue.append(w)
        blocks.append(frozenset(block))
    blocks.sort(key=lambda b: (-len(b), min(b)))
    return blocks

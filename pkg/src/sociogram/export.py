"""GraphML and DOT export, plus a GraphML reader for round trips."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Mapping

from .graphcore import Edge, EdgeKind, Sociogram

__all__ = ["read_graphml", "to_dot", "to_graphml", "write_dot", "write_graphml"]

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_NODE_KEYS = (
    ("group", "int"),
    ("in_degree", "int"),
    ("out_degree", "int"),
    ("self_loops", "int"),
    ("betweenness", "double"),
    ("pagerank", "double"),
    ("eigenvector", "double"),
)


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _node_attrs(
    g: Sociogram,
    v: str,
    membership: Mapping[str, int] | None,
    centrality: Mapping[str, Mapping[str, float]] | None,
) -> dict[str, object]:
    attrs: dict[str, object] = {}
    if membership is not None and v in membership:
        attrs["group"] = membership[v]
    attrs["in_degree"] = len(g.predecessors(v))
    attrs["out_degree"] = len(g.successors(v))
    attrs["self_loops"] = g.self_loops.get(v, 0)
    for name, scores in (centrality or {}).items():
        if v in scores:
            attrs[name] = float(scores[v])
    return attrs


def to_graphml(
    g: Sociogram,
    membership: Mapping[str, int] | None = None,
    centrality: Mapping[str, Mapping[str, float]] | None = None,
) -> str:
    """Directed GraphML; every stored edge is written, so ``keep_all`` graphs get parallel edges."""
    ET.register_namespace("", GRAPHML_NS)
    root = ET.Element(f"{{{GRAPHML_NS}}}graphml")
    for name, typ in _NODE_KEYS:
        ET.SubElement(
            root, f"{{{GRAPHML_NS}}}key", {"id": name, "for": "node", "attr.name": name, "attr.type": typ}
        )
    for name in ("kind", "text"):
        ET.SubElement(
            root, f"{{{GRAPHML_NS}}}key", {"id": name, "for": "edge", "attr.name": name, "attr.type": "string"}
        )
    graph = ET.SubElement(root, f"{{{GRAPHML_NS}}}graph", {"id": "sociogram", "edgedefault": "directed"})
    for v in g.vertex_list:
        node = ET.SubElement(graph, f"{{{GRAPHML_NS}}}node", {"id": v})
        for key, value in _node_attrs(g, v, membership, centrality).items():
            ET.SubElement(node, f"{{{GRAPHML_NS}}}data", {"key": key}).text = _fmt(value)
    for i, e in enumerate(g.edges):
        edge = ET.SubElement(graph, f"{{{GRAPHML_NS}}}edge", {"id": f"e{i}", "source": e.source, "target": e.target})
        ET.SubElement(edge, f"{{{GRAPHML_NS}}}data", {"key": "kind"}).text = e.kind.value
        if e.text:
            ET.SubElement(edge, f"{{{GRAPHML_NS}}}data", {"key": "text"}).text = e.text
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def write_graphml(g: Sociogram, path: str | Path, membership=None, centrality=None) -> None:
    Path(path).write_text(to_graphml(g, membership, centrality), encoding="utf-8")


def read_graphml(path: str | Path, dedup: str = "keep_all") -> Sociogram:
    tree = ET.parse(path)
    ns = {"g": GRAPHML_NS}
    graph = tree.getroot().find("g:graph", ns)
    if graph is None:
        raise ValueError(f"{path}: no <graph> element")
    vertices = [n.get("id") for n in graph.findall("g:node", ns)]
    edges = []
    for e in graph.findall("g:edge", ns):
        data = {d.get("key"): d.text for d in e.findall("g:data", ns)}
        edges.append(Edge(e.get("source"), e.get("target"), EdgeKind.parse(data.get("kind")), data.get("text")))
    return Sociogram(edges, vertices=vertices, dedup=dedup)


def _dot_id(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    g: Sociogram,
    membership: Mapping[str, int] | None = None,
    centrality: Mapping[str, Mapping[str, float]] | None = None,
) -> str:
    lines = ["digraph sociogram {"]
    for v in g.vertex_list:
        attrs = ", ".join(f"{k}={_dot_id(_fmt(val))}" for k, val in _node_attrs(g, v, membership, centrality).items())
        lines.append(f"  {_dot_id(v)} [{attrs}];")
    for e in g.edges:
        lines.append(f"  {_dot_id(e.source)} -> {_dot_id(e.target)} [kind={_dot_id(e.kind.value)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(g: Sociogram, path: str | Path, membership=None, centrality=None) -> None:
    Path(path).write_text(to_dot(g, membership, centrality), encoding="utf-8")

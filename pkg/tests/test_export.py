import random
import xml.etree.ElementTree as ET

import networkx as nx
import pytest

from conftest import graph
from oracles import random_pairs
from sociogram.export import GRAPHML_NS, read_graphml, to_dot, to_graphml, write_graphml
from sociogram.graphcore import Edge, EdgeKind, Sociogram


def test_graphml_round_trip(tmp_path):
    g = Sociogram(
        [Edge("a", "b", EdgeKind.RETWEET, "hi & bye"), Edge("a", "b"), Edge("b", "b"), Edge("c", "a", EdgeKind.REPLY)],
        vertices=["lonely"],
        dedup="keep_all",
    )
    path = tmp_path / "g.graphml"
    write_graphml(g, path, membership={"a": 0, "b": 0, "c": 1, "lonely": 2})
    back = read_graphml(path)
    assert back.vertices == g.vertices
    assert dict(back.multiplicity) == dict(g.multiplicity)
    assert [(e.pair, e.kind, e.text) for e in back.edges] == [(e.pair, e.kind, e.text) for e in g.edges]


def test_graphml_attributes_and_networkx_interop(tmp_path):
    g = graph([("a", "b"), ("b", "c"), ("c", "a"), ("c", "c")])
    path = tmp_path / "g.graphml"
    write_graphml(g, path, membership={"a": 0, "b": 0, "c": 0}, centrality={"pagerank": {"a": 0.25, "b": 0.5, "c": 0.25}})
    nxg = nx.read_graphml(path)
    assert nxg.is_directed()
    assert set(nxg.nodes) == {"a", "b", "c"}
    assert nxg.nodes["b"]["pagerank"] == 0.5
    assert nxg.nodes["c"]["self_loops"] == 1
    assert nxg.nodes["a"]["in_degree"] == 1 and nxg.nodes["a"]["group"] == 0


def test_graphml_is_well_formed_for_awkward_ids():
    g = graph([('we"ird<id>', "ok"), ("ok", "élan")])
    root = ET.fromstring(to_graphml(g).encode())
    ids = {n.get("id") for n in root.iter(f"{{{GRAPHML_NS}}}node")}
    assert ids == {'we"ird<id>', "ok", "élan"}


def test_random_round_trips(tmp_path):
    rng = random.Random(31)
    for i in range(20):
        names, pairs = random_pairs(rng, rng.randint(1, 15), 0.2, loops=True)
        g = graph(pairs, vertices=names, dedup="keep_all")
        path = tmp_path / f"g{i}.graphml"
        write_graphml(g, path)
        back = read_graphml(path)
        assert back.vertices == g.vertices and dict(back.multiplicity) == dict(g.multiplicity)


def test_dot_lines():
    g = graph([("a", "b"), ("b", "c")], vertices=["z"])
    text = to_dot(g, membership={"a": 0, "b": 0, "c": 1, "z": 2})
    lines = text.splitlines()
    assert lines[0] == "digraph sociogram {" and lines[-1] == "}"
    assert sum(1 for ln in lines if "->" in ln) == 2
    assert '"a" -> "b"' in text
    assert sum(1 for ln in lines if ln.strip().startswith('"') and "->" not in ln) == 4


def test_dot_escapes_quotes():
    text = to_dot(graph([('say "hi"', "b")]))
    assert '"say \\"hi\\""' in text


@pytest.mark.parametrize("dedup", ["collapse_pairs", "keep_all"])
def test_dot_edge_count_follows_dedup(dedup):
    g = graph([("a", "b"), ("a", "b")], dedup=dedup)
    assert to_dot(g).count("->") == len(g.edges)

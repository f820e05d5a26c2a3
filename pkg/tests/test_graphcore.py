import io
import string
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph
from sociogram.errors import FormatError, UnknownVertexError
from sociogram.graphcore import (
    Dedup,
    Edge,
    EdgeKind,
    Sociogram,
    build_graph,
    connected_components,
    degree,
    parse_edge_csv,
    undirected_view,
    write_edge_csv,
)


def parse(text: str):
    return parse_edge_csv(io.BytesIO(text.encode("utf-8")))


class TestParse:
    def test_header_only(self):
        doc = parse("source,target\n")
        assert doc.edges == [] and doc.rows == [] and doc.errors == []

    def test_bad_row_is_skipped_with_line_number(self):
        doc = parse("source,target\na,b\nb,c\n,d\nc,a\n")
        assert len(doc.edges) == 3
        assert doc.errors == [(4, "empty source or target")]

    def test_full_row_mapping(self):
        doc = parse('source,target,kind,text,timestamp\na,b,retweet,"hi",2015-05-27T00:00:00Z\n')
        (e,) = doc.edges
        assert (e.source, e.target, e.kind, e.text) == ("a", "b", EdgeKind.RETWEET, "hi")
        assert e.timestamp == datetime(2015, 5, 27, tzinfo=timezone.utc)

    def test_missing_kind_defaults_to_tweet(self):
        assert parse("source,target\na,b\n").edges[0].kind is EdgeKind.TWEET

    def test_column_order_is_free_and_unknown_columns_ignored(self):
        doc = parse("Vertex Count,Target,text,Source\n1,B,hello,A\n")
        assert doc.edges[0].pair == ("a", "b")
        assert doc.edges[0].text == "hello"

    def test_screen_names_are_case_folded(self):
        doc = parse("source,target\nAlice,BOB\n")
        assert doc.edges[0].pair == ("alice", "bob")

    def test_quoted_commas_and_newlines(self):
        doc = parse('source,target,text\na,b,"one, two\nthree"\n')
        assert doc.edges[0].text == "one, two\nthree"

    @pytest.mark.parametrize(
        "raw, kind",
        [("Replies to", EdgeKind.REPLY), ("Mentions", EdgeKind.MENTION), ("RETWEET", EdgeKind.RETWEET)],
    )
    def test_nodexl_relationship_names(self, raw, kind):
        assert parse(f"source,target,kind\na,b,{raw}\n").edges[0].kind is kind

    def test_unknown_kind_and_bad_timestamp_are_row_errors(self):
        doc = parse("source,target,kind,timestamp\na,b,like,\na,b,tweet,yesterday\na,c,,\n")
        assert [line for line, _ in doc.errors] == [2, 3]
        assert len(doc.edges) == 1

    def test_field_count_mismatch(self):
        doc = parse("source,target\na,b,c\n")
        assert doc.errors and not doc.edges

    def test_missing_header_column_is_fatal(self):
        with pytest.raises(FormatError, match="target"):
            parse("source,text\na,hi\n")

    def test_empty_stream_is_fatal(self):
        with pytest.raises(FormatError):
            parse("")

    def test_invalid_utf8(self):
        with pytest.raises(FormatError):
            parse_edge_csv(io.BytesIO(b"source,target\n\xff\xfe,b\n"))

    def test_bom_is_tolerated(self):
        doc = parse_edge_csv(io.BytesIO("﻿source,target\na,b\n".encode()))
        assert len(doc.edges) == 1

    def test_unreadable_stream(self):
        class Broken(io.RawIOBase):
            def read(self, *_):
                raise OSError("disk on fire")

        with pytest.raises(OSError):
            parse_edge_csv(Broken())


class TestBuildGraph:
    def test_collapse_pairs_counts(self):
        g = graph([("a", "b"), ("a", "b"), ("b", "c")])
        assert len(g.vertices) == 3
        assert g.unique_edges == 2 and g.duplicate_count == 1
        assert len(g.edges) == 2

    def test_keep_all_retains_duplicates_but_still_reports(self):
        g = graph([("a", "b"), ("a", "b"), ("b", "c")], dedup="keep_all")
        assert len(g.edges) == 3
        assert g.unique_edges == 2 and g.duplicate_count == 1

    def test_duplicates_ignore_kind(self):
        g = Sociogram([Edge("a", "b", EdgeKind.TWEET), Edge("a", "b", EdgeKind.MENTION)])
        assert g.duplicate_count == 1

    def test_published_duplicate_arithmetic(self):
        # 2432 distinct pairs, 170 of them repeated once: 2602 rows in total
        pairs = [(f"s{i}", f"t{i}") for i in range(2432)]
        pairs += pairs[:170]
        g = graph(pairs)
        assert g.total_edges == 2602
        assert g.unique_edges == 2432 and g.duplicate_count == 170

    def test_empty(self):
        g = build_graph(parse("source,target\n"))
        assert len(g.vertices) == 0 and g.unique_edges == 0

    def test_self_loops_tallied_not_in_adjacency(self):
        g = graph([("a", "a"), ("a", "a"), ("a", "b")])
        assert g.self_loops["a"] == 2
        assert g.successors("a") == {"b"}
        assert g.unique_edges == 2

    def test_subgraph_keeps_duplicates(self):
        g = graph([("a", "b"), ("a", "b"), ("b", "c")])
        sub = g.subgraph({"a", "b"})
        assert sub.vertices == {"a", "b"} and sub.duplicate_count == 1

    def test_dedup_parse(self):
        assert Dedup.parse("keep") is Dedup.KEEP_ALL
        assert Dedup.parse("collapse_pairs") is Dedup.COLLAPSE_PAIRS


class TestViews:
    def test_reciprocal_pair_becomes_one_edge(self):
        ug = undirected_view(graph([("a", "b"), ("b", "a")]))
        assert ug.n_edges == 1 and list(ug.edges()) == [("a", "b")]

    def test_self_loop_dropped(self):
        ug = undirected_view(graph([("a", "a"), ("a", "b")]))
        assert ug.n_edges == 1

    def test_empty_and_idempotent(self):
        ug = undirected_view(graph([]))
        assert ug.n_edges == 0
        assert undirected_view(ug) is ug

    def test_degrees(self):
        star = graph([(f"x{i}", "c") for i in range(5)])
        assert degree(star, "c", "in") == 5 and degree(star, "c", "out") == 0
        cyc = graph([("a", "b"), ("b", "a")])
        assert degree(cyc, "a", "in") == degree(cyc, "a", "out") == 1
        assert degree(cyc, "a", "total") == 2
        iso = graph([], vertices=["z"])
        assert [degree(iso, "z", m) for m in ("in", "out", "total")] == [0, 0, 0]

    def test_degree_unknown_vertex(self):
        with pytest.raises(UnknownVertexError):
            degree(graph([("a", "b")]), "nope", "in")

    def test_components(self):
        assert connected_components(graph([("a", "b")], vertices=["c"])) == [{"a", "b"}, {"c"}]
        assert connected_components(graph([("a", "b"), ("b", "c"), ("c", "d")])) == [{"a", "b", "c", "d"}]
        isolated = graph([], vertices=[f"v{i}" for i in range(10)])
        assert len(connected_components(isolated)) == 10


names = st.text(alphabet=string.ascii_lowercase[:8], min_size=1, max_size=2)
edge_lists = st.lists(st.tuples(names, names), max_size=40)


@settings(max_examples=150, deadline=None)
@given(edge_lists)
def test_degree_sums_equal_unique_non_loop_edges(pairs):
    g = graph(pairs)
    loops = {(u, v) for u, v in pairs if u == v}
    n_arcs = g.unique_edges - len(loops)
    assert sum(degree(g, v, "in") for v in g.vertices) == n_arcs
    assert sum(degree(g, v, "out") for v in g.vertices) == n_arcs
    assert g.unique_edges + g.duplicate_count == len(pairs)
    n = len(g.vertices)
    assert g.unique_edges <= n * (n - 1) + n


@settings(max_examples=150, deadline=None)
@given(edge_lists)
def test_undirected_view_bounds_and_components_partition(pairs):
    g = graph(pairs)
    ug = undirected_view(g)
    assert ug.n_edges <= g.unique_edges
    assert undirected_view(ug) == ug
    comps = connected_components(g)
    union = set()
    for c in comps:
        assert not (union & c)
        union |= c
    assert union == set(g.vertices)


@settings(max_examples=100, deadline=None)
@given(edge_lists, st.sampled_from(["collapse_pairs", "keep_all"]))
def test_csv_round_trip(pairs, dedup):
    g = graph(pairs, dedup=dedup)
    buf = io.StringIO()
    write_edge_csv(g, buf)
    back = build_graph(parse_edge_csv(io.BytesIO(buf.getvalue().encode())), dedup)
    assert back.vertices == g.vertices
    assert set(back.multiplicity) == set(g.multiplicity)
    if dedup == "keep_all":
        assert dict(back.multiplicity) == dict(g.multiplicity)

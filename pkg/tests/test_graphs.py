"""Marked multigraphs: invariants, isomorphism keys, automorphism counts."""

import itertools
import random

import pytest

from cyclichodge.graphs import (
    MarkedGraph, graph_genus, is_valid_descendant_graph, is_valid_smooth_graph,
    leaf_basis_index, leaf_level,
)
from conftest import random_connected_graph


def brute_automorphisms(graph):
    """Half-edge count by direct enumeration: vertex permutations times
    independently checked edge/leaf bijections fixing endpoints and marks."""
    count = 0
    for perm in itertools.permutations(range(graph.n_vertices)):
        mapped = sorted((min(perm[u], perm[v]), max(perm[u], perm[v]), m)
                        for (u, v, m) in graph.edges)
        if mapped != sorted(graph.edges):
            continue
        if sorted((perm[v], m) for (v, m) in graph.leaves) != sorted(graph.leaves):
            continue
        lifts = 1
        pair_marks = {}
        for (u, v, m) in graph.edges:
            pair_marks.setdefault((u, v), []).append(m)
        for (u, v), marks in pair_marks.items():
            for m in set(marks):
                c = marks.count(m)
                lifts *= (2 ** c if u == v else 1)
                for t in range(2, c + 1):
                    lifts *= t
        leaf_marks = {}
        for (v, m) in graph.leaves:
            leaf_marks.setdefault(v, []).append(m)
        for v, marks in leaf_marks.items():
            for m in set(marks):
                c = marks.count(m)
                for t in range(2, c + 1):
                    lifts *= t
        count += lifts
    return count


class TestBasics:
    def test_leaf_mark_parsing(self):
        assert leaf_level("E0") == 0
        assert leaf_level("E12") == 12
        assert leaf_level("UNIT") is None
        assert leaf_basis_index("B3") == 2
        assert leaf_basis_index("E1") is None

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            MarkedGraph(0, [])
        with pytest.raises(ValueError):
            MarkedGraph(1, [(0, 1, "GG")])
        with pytest.raises(ValueError):
            MarkedGraph(1, [(0, 0, "XX")])
        with pytest.raises(ValueError):
            MarkedGraph(2, [(0, 1, "IDLOOP")])
        with pytest.raises(ValueError):
            MarkedGraph(1, [], [(0, "E")])
        with pytest.raises(ValueError):
            MarkedGraph(1, [], [(0, "B0")])
        with pytest.raises(ValueError):
            MarkedGraph(1, [], [(1, "E0")])

    def test_half_edge_geometry(self):
        g = MarkedGraph(2, [(0, 1, "GG"), (1, 1, "GG")], [(0, "E0")])
        assert g.n_half_edges == 5
        assert [g.he_vertex(h) for h in range(5)] == [0, 1, 1, 1, 0]
        assert g.vertex_germs(0) == (0, 4)
        assert g.vertex_germs(1) == (1, 2, 3)
        assert g.degree(1) == 3

    def test_genus(self):
        theta = MarkedGraph(2, [(0, 1, "GG")] * 3)
        assert theta.genus() == 2
        assert graph_genus(theta) == 2
        disconnected = MarkedGraph(2, [])
        assert not disconnected.is_connected()
        with pytest.raises(ValueError):
            disconnected.genus()

    def test_vertex_profile(self):
        g = MarkedGraph(1, [(0, 0, "IDLOOP"), (0, 0, "GG")], [(0, "E1")])
        assert g.vertex_profile(0) == (1, 3)

    def test_relabel(self):
        g = MarkedGraph(3, [(0, 1, "GG"), (1, 2, "ID")], [(2, "E0")])
        h = g.relabel([2, 0, 1])
        assert h.edges == ((0, 2, "GG"), (0, 1, "ID"))
        assert h.leaves == ((1, "E0"),)
        with pytest.raises(ValueError):
            g.relabel([0, 0, 1])

    def test_json_round_trip(self):
        g = MarkedGraph(2, [(0, 1, "GG"), (0, 0, "IDLOOP")],
                        [(1, "E2"), (0, "UNIT")])
        assert MarkedGraph.from_json(g.to_json()) == g

    def test_json_shape_errors(self):
        with pytest.raises(ValueError):
            MarkedGraph.from_json('{"edges": []}')
        with pytest.raises(ValueError):
            MarkedGraph.from_json('{"vertices": 1, "edges": [[1, 1]]}')
        with pytest.raises(ValueError):
            MarkedGraph.from_json('{"vertices": 1, "leaves": [[1]]}')


class TestCanonicalForm:
    def test_invariant_under_relabeling(self):
        rng = random.Random(31)
        for _ in range(60):
            g = random_connected_graph(rng, 3)
            key = g.canonical_form()
            for _ in range(4):
                perm = list(range(g.n_vertices))
                rng.shuffle(perm)
                edges = list(g.relabel(perm).edges)
                leaves = list(g.relabel(perm).leaves)
                rng.shuffle(edges)
                rng.shuffle(leaves)
                h = MarkedGraph(g.n_vertices, edges, leaves)
                assert h.canonical_form() == key

    def test_separates_marks(self):
        a = MarkedGraph(2, [(0, 1, "GG")], [(0, "E0")])
        b = MarkedGraph(2, [(0, 1, "ID")], [(0, "E0")])
        c = MarkedGraph(2, [(0, 1, "GG")], [(1, "E0")])
        assert a.canonical_form() != b.canonical_form()
        assert a.canonical_form() == c.canonical_form()

    def test_separates_leaf_placement(self):
        # both leaves on one vertex vs split across the two
        a = MarkedGraph(2, [(0, 1, "GG")], [(0, "E0"), (0, "E0")])
        b = MarkedGraph(2, [(0, 1, "GG")], [(0, "E0"), (1, "E0")])
        assert a.canonical_form() != b.canonical_form()


class TestAutomorphisms:
    def test_weight_anchors(self):
        # single trivalent vertex with three leaves: 3! leaf lifts
        v1 = MarkedGraph(1, [], [(0, "E0")] * 3)
        assert v1.automorphism_order() == 6
        # theta graph: 2 vertex swap x 3! parallel edges
        theta = MarkedGraph(2, [(0, 1, "GG")] * 3)
        assert theta.automorphism_order() == 12
        # dumbbell: 2 loops x (2 each) x vertex swap
        dumbbell = MarkedGraph(2, [(0, 0, "GG"), (1, 1, "GG"), (0, 1, "GG")])
        assert dumbbell.automorphism_order() == 8
        # single vertex, two loops: 2^2 x 2!
        twoloop = MarkedGraph(1, [(0, 0, "GG"), (0, 0, "GG")])
        assert twoloop.automorphism_order() == 8
        # handle vertex: IDLOOP and GG loop do not mix
        mixed = MarkedGraph(1, [(0, 0, "IDLOOP"), (0, 0, "GG")], [(0, "E1")])
        assert mixed.automorphism_order() == 4

    def test_matches_brute_force(self):
        rng = random.Random(47)
        checked = 0
        for _ in range(80):
            g = random_connected_graph(rng, 2, max_vertices=3)
            if g.n_vertices > 3:
                continue
            assert g.automorphism_order() == brute_automorphisms(g), repr(g)
            checked += 1
        assert checked >= 60


class TestValidity:
    def test_smooth(self):
        theta = MarkedGraph(2, [(0, 1, "GG")] * 3)
        ok, why = is_valid_smooth_graph(theta, 2)
        assert ok, why
        ok, _ = is_valid_smooth_graph(theta, 1)
        assert not ok
        bad_mark = MarkedGraph(2, [(0, 1, "GG"), (0, 1, "GG"), (0, 1, "ID")])
        assert not is_valid_smooth_graph(bad_mark, 2)[0]
        # a GG loop with one leaf is trivalent: the L=1 genus-1 class
        loop_leaf = MarkedGraph(1, [(0, 0, "GG")], [(0, "E0")])
        assert is_valid_smooth_graph(loop_leaf, 1)[0]
        bad_degree = MarkedGraph(1, [(0, 0, "GG")])
        assert not is_valid_smooth_graph(bad_degree, 1)[0]
        bad_leaf = MarkedGraph(1, [], [(0, "E0"), (0, "E0"), (0, "E1")])
        assert not is_valid_smooth_graph(bad_leaf, 0)[0]

    def test_descendant(self):
        # genus 1 via one handle: vertex with IDLOOP, arrow E1
        h = MarkedGraph(1, [(0, 0, "IDLOOP")], [(0, "E1")])
        ok, why = is_valid_descendant_graph(h, 1, 1)
        assert ok, why
        # no handles: the GG loop supplies the genus, the vertex carries
        # arrow + loop + one E0 (m' = 4 encodes level 0 - 3 + 4 = 1)
        loop = MarkedGraph(1, [(0, 0, "GG")], [(0, "E1"), (0, "E0")])
        ok, why = is_valid_descendant_graph(loop, 1, 1)
        assert ok, why
        # without the E0 the vertex encodes level 0, which is not a
        # descendant sum at all
        assert not is_valid_descendant_graph(
            MarkedGraph(1, [(0, 0, "GG")], [(0, "E1")]), 1, 1)[0]
        # wrong level encoding: handles=1 and m'=1 encodes level 1, not 2
        ok, _ = is_valid_descendant_graph(h, 1, 2)
        assert not ok
        # two arrows
        two = MarkedGraph(1, [(0, 0, "IDLOOP")], [(0, "E1"), (0, "E1")])
        assert not is_valid_descendant_graph(two, 1, 1)[0]
        # IDLOOP away from the arrow vertex
        away = MarkedGraph(2, [(1, 1, "IDLOOP"), (0, 1, "GG")],
                           [(0, "E1"), (0, "E0"), (1, "E0")])
        assert not is_valid_descendant_graph(away, 1, 1)[0]
        # n = 0 is never a descendant sum
        assert not is_valid_descendant_graph(h, 1, 0)[0]

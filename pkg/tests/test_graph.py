import random

import pytest

from hosim import (Graph, GraphFormatError, PathNotFoundError, SubgraphView,
                   UnknownNodeError, bfs_expand, clustering_coefficient,
                   connected_components, ego_network, load_edge_list,
                   shortest_path)
from oracles import bfs_distances, components_by_union_find, \
    random_connected_graph


def write(tmp_path, text):
    p = tmp_path / "g.txt"
    p.write_text(text)
    return p


class TestLoadEdgeList:
    def test_direct_parse(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 1\n1 2\n"))
        assert g.node_count == 3
        assert g.edge_count == 2

    def test_self_loop_and_duplicate_dropped(self, tmp_path):
        g = load_edge_list(write(tmp_path, "1 1\n1 2\n2 1\n"))
        assert g.node_count == 2
        assert g.edge_count == 1
        assert g.dropped_self_loops == 1
        assert g.dropped_duplicates == 1

    def test_comments_and_blank_lines(self, tmp_path):
        g = load_edge_list(write(tmp_path, "# header\n\na b\n# more\nb c\n"))
        assert g.node_count == 3
        assert g.edge_count == 2
        assert g.label(g.id_for("a")) == "a"

    def test_malformed_line_reports_number(self, tmp_path):
        with pytest.raises(GraphFormatError, match="line 2"):
            load_edge_list(write(tmp_path, "0 1\n0 1 2\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(GraphFormatError):
            load_edge_list(tmp_path / "nope.txt")

    def test_labels_round_trip(self, tmp_path):
        g = load_edge_list(write(tmp_path, "105 7\n7 alpha\n"))
        assert sorted(g.label(u) for u in g.nodes()) == ["105", "7", "alpha"]
        assert g.id_for("105") == 0
        with pytest.raises(UnknownNodeError):
            g.id_for("8")

    def test_symmetry_exhaustive(self, tmp_path):
        edges = random_connected_graph(60, 150, seed=5)
        text = "".join(f"{a} {b}\n" for a, b in edges)
        g = load_edge_list(write(tmp_path, text))
        for u in g.nodes():
            for v in g.neighbors(u):
                assert u in g.neighbors(v)
            assert g.degree(u) == len(g.neighbors(u))


class TestClusteringCoefficient:
    def test_triangle_node(self):
        g = Graph.from_edges([(0, 1), (0, 2), (1, 2)])
        assert clustering_coefficient(g, 0) == 1.0

    def test_star_center(self):
        g = Graph.from_edges([(0, 1), (0, 2), (0, 3)])
        assert clustering_coefficient(g, 0) == 0.0

    def test_square_with_diagonal(self):
        # B's neighbors {A, C} are adjacent through the diagonal
        a, b, c, d = 0, 1, 2, 3
        g = Graph.from_edges([(a, b), (b, c), (c, d), (d, a), (a, c)])
        assert clustering_coefficient(g, b) == 1.0

    def test_degree_below_two(self):
        g = Graph.from_edges([(0, 1)])
        assert clustering_coefficient(g, 0) == 0.0

    def test_range_and_clique_condition(self):
        g = Graph.from_edges(random_connected_graph(25, 40, seed=9))
        for u in g.nodes():
            cc = clustering_coefficient(g, u)
            assert 0.0 <= cc <= 1.0
            ns = g.neighbors(u)
            clique = all(g.adjacent(v, w) for i, v in enumerate(ns)
                         for w in ns[i + 1:])
            if g.degree(u) >= 2:
                assert (cc == 1.0) == clique


class TestEgoNetwork:
    def test_zero_hops(self):
        g = Graph.from_edges([(0, 1), (1, 2)])
        assert ego_network(g, 0, 0).members == {0}

    def test_one_hop_path(self):
        g = Graph.from_edges([(0, 1), (1, 2)])
        assert ego_network(g, 0, 1).members == {0, 1}

    def test_matches_bfs_distance_oracle(self):
        g = Graph.from_edges(random_connected_graph(30, 30, seed=3))
        dist = bfs_distances(g, 7)
        for l in range(4):
            expected = {u for u, d in dist.items() if d <= l}
            assert ego_network(g, 7, l).members == expected

    def test_view_is_induced(self):
        g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
        view = ego_network(g, 0, 1)
        assert view.members == {0, 1, 3}
        assert view.degree(1) == 1  # edge 1-2 is outside the view


class TestBfsExpand:
    def test_zero_rounds(self):
        g = Graph.from_edges([(0, 1), (1, 2)])
        assert bfs_expand(g, {0}, 0) == {0}

    def test_star_one_round(self):
        g = Graph.from_edges([(0, 1), (0, 2), (0, 3)])
        assert bfs_expand(g, {0}, 1) == {0, 1, 2, 3}

    def test_two_cliques_bridged(self):
        edges = [(a, b) for a in range(5) for b in range(a + 1, 5)]
        edges += [(a, b) for a in range(7, 12) for b in range(a + 1, 12)]
        edges += [(4, 5), (5, 6), (6, 7)]  # bridge path of length 3
        g = Graph.from_edges(edges)
        got = bfs_expand(g, set(range(5)), 2)
        assert got == set(range(5)) | {5, 6}

    def test_monotone_in_rounds(self):
        g = Graph.from_edges(random_connected_graph(40, 40, seed=11))
        prev = frozenset({3})
        for r in range(5):
            cur = bfs_expand(g, {3}, r)
            assert prev <= cur
            prev = cur

    def test_empty_seed_rejected(self):
        g = Graph.from_edges([(0, 1)])
        with pytest.raises(ValueError):
            bfs_expand(g, set(), 1)


class TestConnectedComponents:
    def test_connected_view(self):
        g = Graph.from_edges([(0, 1), (1, 2)])
        comps = connected_components(SubgraphView(g, {0, 1, 2}))
        assert comps == [frozenset({0, 1, 2})]

    def test_two_triangles(self):
        g = Graph.from_edges([(0, 1), (0, 2), (1, 2),
                              (3, 4), (3, 5), (4, 5)])
        comps = connected_components(SubgraphView(g, range(6)))
        assert [len(c) for c in comps] == [3, 3]
        assert comps[0] == frozenset({0, 1, 2})

    def test_matches_union_find_oracle(self):
        rng = random.Random(17)
        edges = [(a, b) for a, b in random_connected_graph(50, 20, seed=17)]
        g = Graph.from_edges(edges)
        members = frozenset(rng.sample(range(50), 30))
        view = SubgraphView(g, members)
        assert connected_components(view) == components_by_union_find(view)

    def test_is_partition(self):
        g = Graph.from_edges(random_connected_graph(40, 25, seed=23))
        view = SubgraphView(g, set(range(0, 40, 2)))
        comps = connected_components(view)
        union = set()
        for c in comps:
            assert not (union & c)
            union |= c
        assert union == set(view.members)


class TestShortestPath:
    def test_src_equals_dst(self):
        g = Graph.from_edges([(0, 1)])
        assert shortest_path(g, 0, 0) == [0]

    def test_path_graph(self):
        g = Graph.from_edges([(0, 1), (1, 2)])
        assert shortest_path(g, 0, 2) == [0, 1, 2]

    def test_grid_corner_to_corner(self):
        def nid(r, c):
            return 4 * r + c

        edges = []
        for r in range(4):
            for c in range(4):
                if c + 1 < 4:
                    edges.append((nid(r, c), nid(r, c + 1)))
                if r + 1 < 4:
                    edges.append((nid(r, c), nid(r + 1, c)))
        g = Graph.from_edges(edges)
        path = shortest_path(g, nid(0, 0), nid(3, 3))
        assert len(path) == 7
        for a, b in zip(path, path[1:]):
            assert g.adjacent(a, b)

    def test_length_matches_bfs_oracle(self):
        g = Graph.from_edges(random_connected_graph(35, 30, seed=29))
        dist = bfs_distances(g, 0)
        for dst in range(1, 35):
            assert len(shortest_path(g, 0, dst)) == dist[dst] + 1

    def test_unreachable_raises(self):
        g = Graph.from_edges([(0, 1), (2, 3)])
        view = SubgraphView(g, {0, 1, 2, 3})
        with pytest.raises(PathNotFoundError):
            shortest_path(view, 0, 3)


class TestGraphBasics:
    def test_no_self_loops_accepted(self):
        with pytest.raises(ValueError):
            Graph([[0]])

    def test_from_labeled_edges(self):
        g = Graph.from_labeled_edges([("x", "y"), ("y", "x"), ("x", "x")])
        assert g.node_count == 2
        assert g.edge_count == 1
        assert g.dropped_duplicates == 1
        assert g.dropped_self_loops == 1

    def test_view_volume(self):
        g = Graph.from_edges([(0, 1), (1, 2), (2, 0), (2, 3)])
        view = SubgraphView(g, {0, 1, 2})
        assert view.total_volume() == 6
        assert g.total_volume() == 8

from itertools import combinations

import networkx as nx
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.exceptions import InputError
from core.strategies import tournaments, vertex_subsets
from core.structures import Tournament
from core.utils import is_dipath, members, vertex_set
from toolkit.utils import random_tournament, rotational_qr, transitive

from .structures import DigraphView, FlowDeficit, PathSystem
from .utils import (
    is_k_connected,
    local_connectivity,
    matching_with_deficiency,
    max_disjoint_paths,
    min_vertex_cut,
    vertex_connectivity,
)


def three_cycle():
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


def to_networkx(D: DigraphView) -> nx.DiGraph:
    G = nx.DiGraph()
    alive = members(D.alive)
    G.add_nodes_from(alive)
    G.add_edges_from((u, v) for u in alive for v in members(D.out(u)))
    return G


def networkx_path_count(D: DigraphView, sources, sinks) -> int:
    G = to_networkx(D)
    G.add_nodes_from(("s", "t"))
    G.add_edges_from(("s", x) for x in sources)
    G.add_edges_from((y, "t") for y in sinks)
    return nx.node_connectivity(G, "s", "t")


def brute_connectivity(D: DigraphView) -> int:
    alive = members(D.alive)
    G = to_networkx(D)
    for size in range(len(alive) - 1):
        for removed in combinations(alive, size):
            if not nx.is_strongly_connected(G.subgraph(set(alive) - set(removed))):
                return size
    return len(alive) - 1


def assert_disjoint_system(test, T, system: PathSystem, deleted=0):
    seen = 0
    for (src, snk), path in zip(system.pairs, system.paths):
        test.assertTrue(is_dipath(T, path.vertices))
        test.assertEqual((path.source, path.sink), (src, snk))
        mask = vertex_set(path.vertices)
        test.assertEqual(mask & seen, 0)
        test.assertEqual(mask & deleted, 0)
        seen |= mask


class DigraphViewTests(SimpleTestCase):
    def test_deleted_vertices_have_no_arcs(self):
        view = DigraphView.of(transitive(5), deleted=vertex_set([2]))
        self.assertFalse(view.arc(1, 2))
        self.assertFalse(view.arc(2, 3))
        self.assertTrue(view.arc(1, 3))
        self.assertEqual(view.deleted, vertex_set([2]))
        self.assertEqual(view.delete(vertex_set([0])).order(), 3)
        self.assertEqual(view.out(2), 0)


class DisjointPathTests(SimpleTestCase):
    def test_direct_arcs(self):
        T = transitive(6)
        system = max_disjoint_paths(T, (0, 1, 2), (3, 4, 5), 3)
        self.assertIsInstance(system, PathSystem)
        self.assertEqual(len(system), 3)
        assert_disjoint_system(self, T, system)
        self.assertEqual(sorted(system.permutation), [0, 1, 2])
        self.assertEqual(sorted(system.permutation.values()), [0, 1, 2])

    def test_three_cycle_path(self):
        system = max_disjoint_paths(three_cycle(), (0,), (2,), 1)
        self.assertEqual(system.paths[0].vertices, (0, 1, 2))
        self.assertEqual(system.permutation, {0: 0})

    def test_unreachable_sink_reports_deficit(self):
        result = max_disjoint_paths(transitive(4), (3,), (0,), 1)
        self.assertIsInstance(result, FlowDeficit)
        self.assertEqual(result.count, 0)
        self.assertEqual(result.cut, 0)
        self.assertEqual(len(result.partial), 0)

    def test_deficit_cut_separates(self):
        # 0 and 1 only reach 4 through 2
        T = Tournament.from_arcs(5, [(0, 1), (0, 2), (1, 2), (2, 4), (3, 0), (3, 1), (2, 3), (4, 0), (4, 1), (4, 3)])
        result = max_disjoint_paths(T, (0, 1), (4,), 1)
        self.assertIsInstance(result, PathSystem)
        deficit = max_disjoint_paths(DigraphView.of(T, deleted=vertex_set([2])), (0, 1), (4, 3), 2)
        self.assertIsInstance(deficit, FlowDeficit)
        self.assertEqual(deficit.count, deficit.cut.bit_count())

    def test_bad_terminals_are_rejected(self):
        T = transitive(5)
        with self.assertRaises(InputError):
            max_disjoint_paths(T, (0, 1), (1, 2), 1)
        with self.assertRaises(InputError):
            max_disjoint_paths(T, (0,), (3, 4), 2)
        with self.assertRaises(InputError):
            max_disjoint_paths(DigraphView.of(T, deleted=1), (0,), (4,), 1)
        with self.assertRaises(InputError):
            max_disjoint_paths(T, (0, 0), (3, 4), 1)

    @given(st.data())
    @settings(deadline=None, max_examples=100)
    def test_count_matches_networkx_on_small_views(self, data):
        T = data.draw(tournaments(min_n=2, max_n=9))
        deleted = data.draw(vertex_subsets(T.n)) & ~1 & ~(1 << (T.n - 1))
        view = DigraphView.of(T, deleted=deleted)
        alive = members(view.alive)
        split = data.draw(st.integers(min_value=1, max_value=len(alive) - 1))
        sources, sinks = alive[:split], alive[split:]

        expected = networkx_path_count(view, sources, sinks)
        result = max_disjoint_paths(view, sources, sinks, min(len(sources), len(sinks)))
        if isinstance(result, PathSystem):
            self.assertEqual(len(result), min(len(sources), len(sinks)))
            self.assertEqual(expected, len(result))
            assert_disjoint_system(self, T, result, deleted=deleted)
        else:
            self.assertEqual(result.count, expected)
            self.assertEqual(result.cut.bit_count(), expected)
            assert_disjoint_system(self, T, result.partial, deleted=deleted)
            # the cut leaves no source-to-sink dipath
            self.assertEqual(networkx_path_count(view.delete(result.cut), [s for s in sources if not result.cut >> s & 1], [t for t in sinks if not result.cut >> t & 1]), 0)

    def test_min_vertex_cut_matches_flow_value(self):
        T = rotational_qr(7)
        cut = min_vertex_cut(T, (0,), (3,))
        self.assertEqual(cut.bit_count(), 1)
        cut = min_vertex_cut(T, (0, 1), (3, 5))
        self.assertEqual(cut.bit_count(), networkx_path_count(DigraphView.of(T), (0, 1), (3, 5)))


class ConnectivityTests(SimpleTestCase):
    def test_transitive_tournament_is_not_strong(self):
        result = vertex_connectivity(transitive(5))
        self.assertEqual(result.count, 0)
        self.assertEqual(result.separator, 0)
        self.assertEqual(result.pair, (1, 0))

    def test_three_cycle(self):
        result = vertex_connectivity(three_cycle())
        self.assertEqual(result.count, 1)
        self.assertEqual(result.separator.bit_count(), 1)
        self.assertTrue(is_k_connected(three_cycle(), 1))
        self.assertFalse(is_k_connected(three_cycle(), 2))

    def test_rotational_qr7(self):
        T = rotational_qr(7)
        result = vertex_connectivity(T)
        self.assertEqual(result.count, 3)
        self.assertEqual(result.separator.bit_count(), 3)
        rest = to_networkx(DigraphView.of(T, deleted=result.separator))
        self.assertFalse(nx.is_strongly_connected(rest))

    def test_single_vertex(self):
        result = vertex_connectivity(Tournament.from_matrix(["0"]))
        self.assertEqual(result.count, 0)
        self.assertTrue(is_k_connected(Tournament.from_matrix(["0"]), 0))
        self.assertFalse(is_k_connected(Tournament.from_matrix(["0"]), 1))

    def test_local_connectivity_of_an_arc(self):
        T = rotational_qr(7)
        self.assertEqual(local_connectivity(T, 0, 1).count, 6)
        result = local_connectivity(T, 0, 3)
        self.assertEqual(result.count, 3)
        self.assertEqual(result.separator.bit_count(), 3)
        self.assertEqual(local_connectivity(T, 0, 3, limit=2).count, 2)

    @given(tournaments(min_n=2, max_n=9))
    @settings(deadline=None, max_examples=100)
    def test_matches_networkx(self, T):
        result = vertex_connectivity(T)
        self.assertEqual(result.count, brute_connectivity(DigraphView.of(T)))
        for k in range(0, T.n + 1):
            self.assertEqual(is_k_connected(T, k), result.count >= k)

    @given(st.data())
    @settings(deadline=None)
    def test_deleting_a_vertex_never_increases_connectivity(self, data):
        T = data.draw(tournaments(min_n=3, max_n=9))
        v = data.draw(st.integers(min_value=0, max_value=T.n - 1))
        before = vertex_connectivity(T).count
        after = vertex_connectivity(DigraphView.of(T, deleted=1 << v)).count
        self.assertLessEqual(after, before)

    def test_k_connected_agrees_with_exact_connectivity(self):
        T = random_tournament(40, seed=11)
        kappa = vertex_connectivity(T).count
        self.assertTrue(is_k_connected(T, kappa))
        self.assertFalse(is_k_connected(T, kappa + 1))


class MatchingTests(SimpleTestCase):
    def test_star(self):
        result = matching_with_deficiency(3, 1, [(0, 0), (1, 0), (2, 0)])
        self.assertEqual(len(result.matching), 1)
        self.assertEqual(result.S, 0b111)
        self.assertEqual(result.neighborhood, 0b1)
        self.assertEqual(result.d, 2)

    def test_perfect_matching(self):
        result = matching_with_deficiency(4, 4, [(i, i) for i in range(4)])
        self.assertEqual(sorted(result.matching), [(i, i) for i in range(4)])
        self.assertEqual(result.d, 0)
        self.assertEqual(result.S, 0)

    def test_edges_out_of_range(self):
        with self.assertRaises(InputError):
            matching_with_deficiency(2, 2, [(0, 2)])

    @given(st.data())
    @settings(deadline=None, max_examples=100)
    def test_deficiency_is_maximum(self, data):
        x_size = data.draw(st.integers(min_value=1, max_value=10))
        z_size = data.draw(st.integers(min_value=1, max_value=10))
        edges = data.draw(st.sets(st.tuples(st.integers(0, x_size - 1), st.integers(0, z_size - 1))))
        result = matching_with_deficiency(x_size, z_size, sorted(edges))

        self.assertEqual(len(result.matching) + result.d, x_size)
        self.assertEqual(len({x for x, _ in result.matching}), len(result.matching))
        self.assertEqual(len({z for _, z in result.matching}), len(result.matching))
        self.assertTrue(set(result.matching) <= edges)

        neighbours = [0] * x_size
        for x, z in edges:
            neighbours[x] |= 1 << z
        best = 0
        for subset in range(1 << x_size):
            reach = 0
            for x in members(subset):
                reach |= neighbours[x]
            best = max(best, subset.bit_count() - reach.bit_count())
        self.assertEqual(result.d, best)

        partner = result.partner_of_z()
        for z in members(result.neighborhood):
            self.assertTrue(result.S >> partner[z] & 1)

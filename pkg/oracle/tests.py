from django.conf import settings as django_settings
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings, strategies as st

from core.exceptions import BudgetExceeded, InputError
from core.strategies import tournaments, vertex_subsets
from core.structures import Dipath, Tournament
from core.utils import members
from flow.structures import DigraphView, PathSystem
from flow.utils import matching_with_deficiency, max_disjoint_paths, vertex_connectivity
from ordering.utils import check_interval_domination, local_median_order
from toolkit.structures import BLOCKS, TRANSITIVE, GenSpec
from toolkit.utils import generate, random_tournament, rotational_qr, transitive

from .structures import DISJOINTNESS, ENDPOINT, MEMBERSHIP, MISSING_ARC
from .utils import (
    brute_force_anchors,
    brute_force_domination_pair,
    brute_force_is_k_linked,
    brute_force_linked,
    brute_force_max_deficiency,
    brute_force_max_disjoint_paths,
    brute_force_min_vertex_cut,
    brute_force_vertex_connectivity,
    exact_median_order,
    validate_path_system,
)


def three_cycle():
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


def system(*paths):
    return PathSystem(pairs=tuple((p[0], p[-1]) for p in paths), paths=tuple(Dipath(p) for p in paths))


class ValidatePathSystemTests(SimpleTestCase):
    def setUp(self):
        self.T = transitive(6)

    def test_correct_system(self):
        ps = system((0, 2, 4), (1, 3, 5))
        self.assertEqual(validate_path_system(self.T, [(0, 4), (1, 5)], ps), [])

    def test_shared_interior_vertex(self):
        ps = system((0, 2, 4), (1, 2, 5))
        violations = validate_path_system(self.T, [(0, 4), (1, 5)], ps)
        self.assertEqual([v.kind for v in violations], [DISJOINTNESS])

    def test_non_arc_hop(self):
        ps = system((0, 4, 2), (1, 5))
        violations = validate_path_system(self.T, [(0, 2), (1, 5)], ps)
        self.assertEqual([v.kind for v in violations], [MISSING_ARC])

    def test_wrong_endpoint_and_membership(self):
        ps = system((0, 2), (1, 9))
        kinds = sorted(v.kind for v in validate_path_system(self.T, [(0, 3), (1, 9)], ps))
        self.assertEqual(kinds, sorted([ENDPOINT, MEMBERSHIP]))

    def test_path_count_mismatch(self):
        violations = validate_path_system(self.T, [(0, 2), (1, 3)], system((0, 2)))
        self.assertEqual([v.kind for v in violations], [ENDPOINT])


class LinkageOracleTests(SimpleTestCase):
    def test_three_cycle_links(self):
        result = brute_force_linked(three_cycle(), (0,), (2,))
        self.assertEqual(result.paths[0].vertices, (0, 1, 2))

    def test_sink_cannot_reach_source(self):
        self.assertIsNone(brute_force_linked(transitive(4), (3,), (0,)))

    def test_rotational_qr7_is_not_two_linked(self):
        T = rotational_qr(7)
        # 0 leaves only through 4, and every route from 2 to 1 needs 4 or 6
        self.assertIsNone(brute_force_linked(T, (0, 2), (3, 1)))
        self.assertFalse(brute_force_is_k_linked(T, 2))
        self.assertTrue(brute_force_is_k_linked(T, 1))

    def test_k_linked_small_cases(self):
        self.assertTrue(brute_force_is_k_linked(three_cycle(), 1))
        self.assertFalse(brute_force_is_k_linked(transitive(4), 1))
        self.assertFalse(brute_force_is_k_linked(three_cycle(), 2))

    def test_budgets(self):
        with self.assertRaises(BudgetExceeded):
            brute_force_is_k_linked(random_tournament(11, seed=1), 1)
        with self.assertRaises(BudgetExceeded):
            brute_force_is_k_linked(rotational_qr(7), 3)
        with self.assertRaises(BudgetExceeded):
            brute_force_linked(transitive(15), (0,), (1,))
        with override_settings(ORACLE_EXHAUSTIVE_BUDGET=4):
            with self.assertRaises(BudgetExceeded):
                brute_force_linked(transitive(5), (0,), (1,))
        self.assertIsNotNone(brute_force_linked(transitive(15), (0,), (1,), budget=15))

    def test_bad_terminals(self):
        with self.assertRaises(InputError):
            brute_force_linked(transitive(5), (0, 1), (1, 2))
        with self.assertRaises(InputError):
            brute_force_linked(transitive(5), (0,), (1, 2))

    @given(st.integers(min_value=0, max_value=2**32), st.randoms(use_true_random=False))
    @settings(deadline=None, max_examples=30)
    def test_agrees_with_flow_on_identity_pairings(self, seed, rnd):
        T = random_tournament(10, seed)
        terminals = rnd.sample(range(10), 4)
        X, Y = tuple(terminals[:2]), tuple(terminals[2:])

        single = max_disjoint_paths(DigraphView.of(T, deleted=(1 << X[1]) | (1 << Y[1])), (X[0],), (Y[0],), 1)
        linked_single = brute_force_linked(T, X[:1], Y[:1], budget=10)
        if isinstance(single, PathSystem):
            self.assertIsNotNone(linked_single)

        flow = max_disjoint_paths(T, X, Y, 2)
        linked = brute_force_linked(T, X, Y)
        if isinstance(flow, PathSystem) and flow.permutation == {0: 0, 1: 1}:
            self.assertIsNotNone(linked)
        if linked is not None:
            self.assertEqual(validate_path_system(T, list(zip(X, Y)), linked), [])
            self.assertIsInstance(flow, PathSystem)


class AnchorOracleTests(SimpleTestCase):
    def test_domination_pair_anchors(self):
        T = generate(GenSpec(BLOCKS, 6, split=3, inner=TRANSITIVE))
        self.assertTrue(brute_force_anchors(T, (0, 1), (3, 4)))
        self.assertEqual(brute_force_domination_pair(T, 2), ((0, 1), (2, 3)))

    def test_overlap_is_rejected(self):
        with self.assertRaises(InputError):
            brute_force_anchors(transitive(6), (0, 1), (1, 2))

    def test_anchoring_fails_on_transitive_reversed(self):
        self.assertFalse(brute_force_anchors(transitive(6), (4, 5), (0, 1)))

    def test_k_budget(self):
        with self.assertRaises(BudgetExceeded):
            brute_force_anchors(transitive(12), (0, 1, 2, 3, 4), (7, 8, 9, 10, 11))

    def test_no_domination_pair_in_three_cycle(self):
        self.assertIsNone(brute_force_domination_pair(three_cycle(), 2))


class ConnectivityOracleTests(SimpleTestCase):
    def test_small_examples(self):
        self.assertEqual(brute_force_vertex_connectivity(three_cycle()), 1)
        self.assertEqual(brute_force_vertex_connectivity(transitive(4)), 0)
        self.assertEqual(brute_force_vertex_connectivity(rotational_qr(7)), 3)

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            brute_force_vertex_connectivity(transitive(13))

    @given(st.data())
    @settings(deadline=None, max_examples=100)
    def test_agrees_with_flow(self, data):
        T = data.draw(tournaments(min_n=1, max_n=9))
        deleted = data.draw(vertex_subsets(T.n)) & ~1
        view = DigraphView.of(T, deleted=deleted)
        self.assertEqual(brute_force_vertex_connectivity(view), vertex_connectivity(view).count)

    @given(st.data())
    @settings(deadline=None, max_examples=100)
    def test_menger_duality(self, data):
        T = data.draw(tournaments(min_n=2, max_n=8))
        deleted = data.draw(vertex_subsets(T.n)) & ~1 & ~(1 << (T.n - 1))
        view = DigraphView.of(T, deleted=deleted)
        alive = members(view.alive)
        split = data.draw(st.integers(min_value=1, max_value=len(alive) - 1))
        sources, sinks = alive[:split], alive[split:]

        paths = brute_force_max_disjoint_paths(view, sources, sinks)
        self.assertEqual(paths, brute_force_min_vertex_cut(view, sources, sinks))
        result = max_disjoint_paths(view, sources, sinks, min(len(sources), len(sinks)))
        self.assertEqual(len(result) if isinstance(result, PathSystem) else result.count, paths)


class MedianOracleTests(SimpleTestCase):
    def test_small_examples(self):
        order = exact_median_order(transitive(5))
        self.assertEqual(order.perm, (0, 1, 2, 3, 4))
        self.assertEqual(order.forward_arcs, 10)
        self.assertEqual(exact_median_order(three_cycle()).forward_arcs, 2)

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            exact_median_order(transitive(13))

    @given(tournaments(min_n=1, max_n=10))
    @settings(deadline=None, max_examples=django_settings.ACCEPTANCE_RANDOM_ROUNDS)
    def test_exact_dominates_local(self, T):
        exact = exact_median_order(T)
        local = local_median_order(T)
        self.assertGreaterEqual(exact.forward_arcs, local.forward_arcs)
        self.assertEqual(check_interval_domination(T, exact), [])
        self.assertEqual(check_interval_domination(T, local), [])


class DeficiencyOracleTests(SimpleTestCase):
    def test_star_and_diagonal(self):
        self.assertEqual(brute_force_max_deficiency(3, 1, [(0, 0), (1, 0), (2, 0)]), (2, 0b111))
        self.assertEqual(brute_force_max_deficiency(4, 4, [(i, i) for i in range(4)]), (0, 0))

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            brute_force_max_deficiency(13, 1, [])

    @given(st.data())
    @settings(deadline=None, max_examples=100)
    def test_agrees_with_matching(self, data):
        x_size = data.draw(st.integers(min_value=1, max_value=10))
        z_size = data.draw(st.integers(min_value=1, max_value=10))
        edges = sorted(data.draw(st.sets(st.tuples(st.integers(0, x_size - 1), st.integers(0, z_size - 1)))))
        d, _ = brute_force_max_deficiency(x_size, z_size, edges)
        result = matching_with_deficiency(x_size, z_size, edges)
        self.assertEqual(result.d, d)
        self.assertEqual(len(result.matching), x_size - d)

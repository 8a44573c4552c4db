from itertools import permutations

from django.conf import settings as django_settings
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.exceptions import InputError, PreconditionViolation
from core.structures import Tournament
from core.utils import vertex_set
from oracle.utils import brute_force_anchors, validate_path_system
from ordering.structures import Ordering
from ordering.utils import check_interval_domination
from toolkit.structures import BLOCKS, TRANSITIVE, GenSpec
from toolkit.utils import generate, random_tournament, transitive

from .structures import DOMINATION, MEDIAN, AnchorCertificate, Escalation, GreedyState, Stall
from .utils import (
    anchor_threshold,
    extract_domination_pair,
    find_anchored_candidate,
    greedy_short_path,
    route,
    route_all_permutations,
    route_with_escalation,
)

# Eight vertices ordered 0..7; every pair points forward except these
STALL_BACKWARD_ARCS = [(7, 0), (5, 0), (4, 0), (7, 2), (4, 2), (7, 3), (3, 1), (6, 1), (6, 4)]


def stall_tournament():
    backward = set(STALL_BACKWARD_ARCS)
    arcs = []
    for i in range(8):
        for j in range(i + 1, 8):
            arcs.append((j, i) if (j, i) in backward else (i, j))
    return Tournament.from_arcs(8, arcs)


def expected_pairs(cert, pi):
    return [(cert.A[i], cert.B[pi[i]]) for i in range(cert.k)]


class ThresholdTests(SimpleTestCase):
    def test_anchor_threshold(self):
        self.assertEqual([anchor_threshold(k) for k in (1, 2, 3, 4)], [3, 11, 20, 28])


class CandidateTests(SimpleTestCase):
    def test_transitive_candidate(self):
        cert = find_anchored_candidate(transitive(12), 2)
        self.assertEqual(cert.kind, MEDIAN)
        self.assertEqual(cert.A, (0, 1))
        self.assertEqual(cert.B, (11, 10))
        self.assertEqual(cert.Z, tuple(range(2, 10)))

    def test_below_threshold(self):
        with self.assertRaises(PreconditionViolation):
            find_anchored_candidate(transitive(10), 2)
        with self.assertRaises(InputError):
            find_anchored_candidate(transitive(10), 0)

    def test_k1_routes_or_escalates(self):
        for seed in range(10):
            T = random_tournament(3, seed)
            cert = find_anchored_candidate(T, 1)
            system, final, escalations = route_with_escalation(T, cert, (0,))
            self.assertLessEqual(escalations, 1)
            self.assertLessEqual(system.paths[0].length, 3)
            self.assertEqual(validate_path_system(T, expected_pairs(final, (0,)), system), [])

    def test_all_permutations_route_at_threshold(self):
        T = random_tournament(20, seed=5)
        cert = find_anchored_candidate(T, 3)
        final, systems = route_all_permutations(T, cert)
        self.assertEqual(len(systems), 6)
        for pi, system in zip(permutations(range(3)), systems):
            self.assertEqual(validate_path_system(T, expected_pairs(final, pi), system), [])


class GreedyShortPathTests(SimpleTestCase):
    def test_prefers_direct_arc(self):
        path = greedy_short_path(transitive(6), 0, 5, vertex_set([1, 2, 3]))
        self.assertEqual(path.vertices, (0, 5))

    def test_length_two_through_smallest(self):
        T = Tournament.from_arcs(4, [(0, 1), (1, 3), (0, 2), (2, 3), (3, 0), (1, 2)])
        self.assertEqual(greedy_short_path(T, 0, 3, vertex_set([1, 2])).vertices, (0, 1, 3))
        self.assertEqual(greedy_short_path(T, 0, 3, vertex_set([2])).vertices, (0, 2, 3))

    def test_no_path_through_the_pool(self):
        # the source dominates nothing
        T = transitive(6)
        self.assertIsNone(greedy_short_path(T, 5, 0, vertex_set([1, 2, 3, 4])))

    def test_pool_must_exclude_endpoints(self):
        with self.assertRaises(InputError):
            greedy_short_path(transitive(4), 0, 3, vertex_set([0, 1]))
        with self.assertRaises(InputError):
            greedy_short_path(transitive(4), 2, 2, 0)

    @given(st.integers(min_value=0, max_value=10**6), st.randoms(use_true_random=False))
    @settings(deadline=None, max_examples=50)
    def test_matches_exhaustive_short_search(self, seed, rnd):
        T = random_tournament(9, seed)
        src, dst = rnd.sample(range(9), 2)
        pool = vertex_set(v for v in range(9) if v not in (src, dst) and rnd.random() < 0.5)
        candidates = [(src, dst)] if T.out_masks[src] >> dst & 1 else []
        inner = [v for v in range(9) if pool >> v & 1]
        candidates += [(src, z, dst) for z in inner if T.out_masks[src] >> z & 1 and T.out_masks[z] >> dst & 1]
        candidates += [
            (src, a, b, dst)
            for a in inner
            for b in inner
            if a != b and T.out_masks[src] >> a & 1 and T.out_masks[a] >> b & 1 and T.out_masks[b] >> dst & 1
        ]
        path = greedy_short_path(T, src, dst, pool)
        if not candidates:
            self.assertIsNone(path)
        else:
            self.assertEqual(path.vertices, min(candidates, key=lambda c: (len(c), c)))


class RouteTests(SimpleTestCase):
    def test_domination_routes_by_direct_arcs(self):
        T = generate(GenSpec(BLOCKS, 6, split=3, inner=TRANSITIVE))
        cert = AnchorCertificate(kind=DOMINATION, A=(0, 1), B=(3, 4))
        for pi in permutations(range(2)):
            system = route(T, cert, pi)
            self.assertTrue(all(path.length == 1 for path in system.paths))
            self.assertEqual(validate_path_system(T, expected_pairs(cert, pi), system), [])

    def test_median_on_transitive(self):
        T = transitive(12)
        cert = find_anchored_candidate(T, 2)
        system = route(T, cert, (0, 1))
        self.assertEqual(validate_path_system(T, [(0, 11), (1, 10)], system), [])
        self.assertTrue(all(path.length <= 3 for path in system.paths))

    def test_malformed_permutation(self):
        cert = find_anchored_candidate(transitive(12), 2)
        with self.assertRaises(InputError):
            route(transitive(12), cert, (0, 0))

    def test_stall_escalates_to_domination(self):
        T = stall_tournament()
        identity = Ordering(tuple(range(8)), 0)
        self.assertEqual(check_interval_domination(T, identity), [])

        cert = find_anchored_candidate(T, 2, threshold=8, seed_order=identity)
        self.assertEqual((cert.A, cert.B, cert.Z), ((0, 1), (7, 6), (2, 3, 4, 5)))

        result = route(T, cert, (0, 1))
        self.assertIsInstance(result, Escalation)
        self.assertEqual(result.state.h, 1)
        self.assertEqual(result.state.paths[0].vertices, (0, 2, 5, 7))
        self.assertEqual((result.state.stall.source, result.state.stall.target), (1, 6))
        self.assertEqual((result.state.stall.X_star, result.state.stall.Y_star), (vertex_set([4]), vertex_set([3])))

        domination = result.certificate
        self.assertEqual(domination.kind, DOMINATION)
        self.assertEqual((domination.A, domination.B), ((3, 6), (1, 4)))
        for a in domination.A:
            for b in domination.B:
                self.assertTrue(T.out_masks[a] >> b & 1)
        self.assertTrue(brute_force_anchors(T, domination.A, domination.B))

        system, final, escalations = route_with_escalation(T, cert, (0, 1))
        self.assertEqual(escalations, 1)
        self.assertEqual(final, domination)
        self.assertEqual(validate_path_system(T, [(3, 1), (6, 4)], system), [])

    def test_route_all_permutations_restarts_after_escalation(self):
        T = stall_tournament()
        cert = find_anchored_candidate(T, 2, threshold=8, seed_order=Ordering(tuple(range(8)), 0))
        final, systems = route_all_permutations(T, cert)
        self.assertEqual(final.kind, DOMINATION)
        self.assertEqual(len(systems), 2)
        for pi, system in zip(permutations(range(2)), systems):
            self.assertEqual(validate_path_system(T, expected_pairs(final, pi), system), [])


class ExtractionTests(SimpleTestCase):
    def test_blocks_give_domination_pair(self):
        # block {0,1,2} dominates block {3,4,5}
        T = generate(GenSpec(BLOCKS, 6, split=3, inner=TRANSITIVE))
        pool = vertex_set([0, 1, 4, 5])
        state = GreedyState(0, (), 0, pool, Stall(3, 2, T.out_masks[3] & pool, T.in_masks[2] & pool))
        cert = extract_domination_pair(T, state, 2)
        self.assertEqual((cert.A, cert.B), ((0, 1), (3, 4)))

    def test_overlapping_stall_sets_are_rejected(self):
        T = transitive(6)
        pool = vertex_set([1, 2, 3, 4])
        state = GreedyState(0, (), 0, pool, Stall(0, 5, pool, pool))
        with self.assertRaisesRegex(PreconditionViolation, "share") as caught:
            extract_domination_pair(T, state, 2)
        self.assertEqual(caught.exception.inequality, "X* ∩ Y* = ∅")

    def test_small_sides_are_rejected(self):
        T = generate(GenSpec(BLOCKS, 6, split=3, inner=TRANSITIVE))
        pool = vertex_set([4])
        state = GreedyState(0, (), 0, pool, Stall(3, 2, T.out_masks[3] & pool, 0))
        with self.assertRaises(PreconditionViolation):
            extract_domination_pair(T, state, 2)

    def test_state_without_stall(self):
        with self.assertRaises(InputError):
            extract_domination_pair(transitive(6), GreedyState(0, (), 0, 0), 2)


class AnchorAtThresholdTests(SimpleTestCase):
    def test_random_tournaments_at_threshold(self):
        for k, n in ((2, 11), (3, 20)):
            for seed in range(django_settings.ACCEPTANCE_RANDOM_ROUNDS):
                T = random_tournament(n, seed)
                cert = find_anchored_candidate(T, k)
                final, systems = route_all_permutations(T, cert)
                for pi, system in zip(permutations(range(k)), systems):
                    self.assertEqual(validate_path_system(T, expected_pairs(final, pi), system), [])
                if k == 2:
                    self.assertTrue(brute_force_anchors(T, final.A, final.B))

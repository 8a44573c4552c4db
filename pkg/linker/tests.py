from unittest import mock

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase, override_settings

from anchor.structures import DOMINATION, AnchorCertificate, Escalation, GreedyState
from anchor.tests import stall_tournament
from anchor.utils import route
from core.exceptions import HypothesisViolation, InputError, PreconditionViolation
from core.structures import Tournament
from core.utils import vertex_set
from flow.structures import DeficiencyMatching, DigraphView
from flow.utils import is_k_connected, local_connectivity
from oracle.utils import brute_force_domination_pair, validate_path_system
from toolkit.structures import BLOCKS, GenSpec
from toolkit.utils import generate, random_tournament, transitive

from .structures import LinkerTrace, LinkOptions
from .utils import (
    build_shrunk_bipartite,
    check_hypotheses,
    forbidden_set,
    link,
    peel,
    select_successors,
    thresholds,
)


def terminals(n: int, k: int, seed: int):
    chosen = [int(v) for v in np.random.default_rng(seed).choice(n, 2 * k, replace=False)]
    return tuple(chosen[:k]), tuple(chosen[k:])


def planted_stall_tournament() -> Tournament:
    """
    x = 0, 1 and y = 2, 3; u_i = 3 + i and v_i = 11 + i for i = 1..8; bulk 20..59.
    Each u_i beats only v_i and the earlier u's, so peeling takes (u_i, v_i) in order
    and T[v_1..v_8] is the stalling tournament. y_1 beats v_7 and y_2 beats v_8.
    """
    U, V, bulk = range(4, 12), range(12, 20), range(20, 60)
    inner = stall_tournament()
    rest = random_tournament(40, seed=5)
    adj = np.zeros((60, 60), dtype=bool)
    for a in range(60):
        for b in range(a + 1, 60):
            if a in U and b in U:
                forward = False
            elif a in U:
                forward = b == a + 8
            elif b in U:
                forward = True
            elif a in V and b in V:
                forward = bool(inner.out_masks[a - 12] >> (b - 12) & 1)
            elif a in bulk:
                forward = bool(rest.out_masks[a - 20] >> (b - 20) & 1)
            elif a in (2, 3) and b in V:
                forward = (a, b) in ((2, 18), (3, 19))
            else:
                # terminals beat bulk except y's, x's beat v's, v's beat bulk
                forward = not (a in (2, 3) and b in bulk)
            adj[a, b], adj[b, a] = forward, not forward
    return Tournament(adj)


class ThresholdTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(thresholds(1), (7, 7, 3))
        self.assertEqual(thresholds(2), (19, 28, 11))
        self.assertEqual(thresholds(4), (44, 70, 28))

    def test_zero(self):
        with self.assertRaises(InputError):
            thresholds(0)


class PeelTests(SimpleTestCase):
    def test_records_follow_the_definition(self):
        T = random_tournament(120, seed=0)
        X0, Y0 = terminals(120, 2, seed=0)
        records = peel(T, X0, Y0, 11)
        self.assertEqual(len(records), 11)

        remaining = T.vertices & ~vertex_set(X0 + Y0)
        for record in records:
            degrees = {v: (T.out_masks[v] & remaining).bit_count() for v in range(T.n) if remaining >> v & 1}
            self.assertEqual(record.degree, min(degrees.values()))
            self.assertEqual(record.u, min(v for v, d in degrees.items() if d == record.degree))
            neighbourhood = T.out_masks[record.u] & remaining
            self.assertTrue(neighbourhood >> record.v & 1)
            self.assertEqual(record.A, T.out_masks[record.v] & neighbourhood)
            self.assertLessEqual(2 * record.A.bit_count(), record.degree - 1)
            remaining &= ~record.D

    def test_transitive_sink_stops_peeling(self):
        with self.assertRaises(PreconditionViolation) as caught:
            peel(transitive(40), (0, 1), (2, 3), 11)
        self.assertEqual(caught.exception.step, "peel")

    def test_floor(self):
        with self.assertRaises(PreconditionViolation):
            peel(random_tournament(40, seed=2), (0,), (1,), 3, floor=40)


class SuccessorTests(SimpleTestCase):
    def test_dominating_vertex_takes_smallest(self):
        T = transitive(10)
        self.assertEqual(select_successors(T, (0,), vertex_set([1, 2])), (3,))

    def test_overlapping_pools_still_distinct(self):
        # three sources sharing the same three available successors
        T = transitive(10)
        self.assertEqual(select_successors(T, (0, 1, 2), vertex_set(range(6, 10))), (3, 4, 5))

    def test_starved(self):
        with self.assertRaises(PreconditionViolation):
            select_successors(transitive(10), (9,), 0)


class ForbiddenSetTests(SimpleTestCase):
    def setUp(self):
        self.T = random_tournament(40, seed=3)
        self.X0, self.Y0 = (0, 1), (2, 3)
        self.peels = peel(self.T, self.X0, self.Y0, 5)
        self.U = vertex_set(r.u for r in self.peels)
        self.V = vertex_set(r.v for r in self.peels)
        self.X1 = select_successors(self.T, self.X0, vertex_set(self.X0 + self.Y0) | self.U | self.V)

    def trace(self, alpha, neighborhood=0):
        return LinkerTrace(
            k=2,
            k_star=5,
            X0=self.X0,
            Y0=self.Y0,
            peels=self.peels,
            U=self.U,
            V=self.V,
            alpha=alpha,
            X1=self.X1,
            matching=DeficiencyMatching(((1, 1),), S=0b01, neighborhood=neighborhood, d=1, x_size=2, z_size=2),
            assignment=(0, 1),
        )

    def test_first_peel_step(self):
        F = forbidden_set(self.T, self.trace((0, 3)), 0)
        expected = vertex_set(self.X0 + self.Y0) | (self.V & ~(1 << self.peels[0].v)) | vertex_set(self.X1) | self.peels[0].A
        self.assertEqual(F.mask, expected)
        self.assertEqual(F.tau, 0)
        self.assertLessEqual(F.gamma, 3)

    def test_later_step_and_matched_neighbourhood(self):
        F = forbidden_set(self.T, self.trace((2, 0), neighborhood=0b10), 0)
        before = self.peels[0].D | self.peels[1].D
        self.assertEqual(F.mask & before, before)
        self.assertTrue(F.mask >> self.peels[0].u & 1)
        self.assertFalse(F.mask >> self.peels[2].v & 1)
        self.assertEqual(F.mask & (1 << self.peels[3].v | 1 << self.peels[4].v), 1 << self.peels[3].v | 1 << self.peels[4].v)
        self.assertEqual(F.tau, (self.T.out_masks[self.X1[0]] & before).bit_count())


class LinkTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.T = random_tournament(120, seed=0)
        cls.X0, cls.Y0 = terminals(120, 2, seed=0)
        cls.system, cls.trace = link(cls.T, cls.X0, cls.Y0)

    def test_single_pair_by_search(self):
        T = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
        system, trace = link(T, (0,), (2,), LinkOptions(check_hypotheses=False))
        self.assertEqual(system.paths[0].vertices, (0, 1, 2))
        self.assertEqual(trace.peels, [])

    def test_random_instance(self):
        trace = self.trace
        self.assertEqual(validate_path_system(self.T, list(zip(self.X0, self.Y0)), self.system), [])
        self.assertTrue(trace.hypotheses["connectivity"]["holds"])
        self.assertGreaterEqual(trace.hypotheses["min_out_degree"]["observed"], 28)
        self.assertEqual(len(trace.peels), 11)
        self.assertTrue(all(q.length <= 4 for q in trace.Q))
        self.assertLessEqual(trace.B_set.bit_count(), 5 * 2 + (11 - 2 * 2))
        self.assertTrue(is_k_connected(DigraphView.of(self.T, deleted=trace.B_set), 2))
        self.assertLessEqual(trace.escalations, 1)
        self.assertEqual(sorted(trace.relabel), [0, 1])
        for i, ledger in trace.ledgers.items():
            free = self.T.out_masks[trace.X1[i]] & ~ledger.mask
            self.assertGreater(free.bit_count(), trace.d)

    def test_shrunk_bipartite_matches_arcs(self):
        trace = self.trace
        pairs = [(trace.peels[a].u, trace.peels[a].v) for a in trace.alpha]
        edges = set(build_shrunk_bipartite(self.T, trace.X1, pairs))
        for i, x in enumerate(trace.X1):
            for j, (u, v) in enumerate(pairs):
                dominates = bool(self.T.out_masks[x] >> u & 1 or self.T.out_masks[x] >> v & 1)
                self.assertEqual((i, j) in edges, dominates)
                if not dominates:
                    self.assertTrue(trace.peels[trace.alpha[j]].A >> x & 1)

    def test_deterministic(self):
        _, again = link(self.T, self.X0, self.Y0)
        self.assertEqual(again, self.trace)

    def assert_acceptance_instance(self, T, X0, Y0, system, trace):
        k = len(X0)
        _, _, k_star = thresholds(k)
        self.assertEqual(validate_path_system(T, list(zip(X0, Y0)), system), [])
        self.assertTrue(trace.hypotheses["connectivity"]["holds"])
        self.assertEqual(len(trace.peels), k_star)
        for record in trace.peels:
            self.assertLessEqual(2 * record.A.bit_count(), record.degree - 1)
        self.assertTrue(all(q.length <= 4 for q in trace.Q))
        self.assertLessEqual(trace.B_set.bit_count(), 5 * k + (k_star - 2 * k))
        self.assertTrue(is_k_connected(DigraphView.of(T, deleted=trace.B_set), k))

    def test_more_instances(self):
        # setUpClass covers seed 0
        for seed in range(1, settings.ACCEPTANCE_LINK_INSTANCES):
            T = random_tournament(120, seed)
            X0, Y0 = terminals(120, 2, seed)
            system, trace = link(T, X0, Y0)
            self.assert_acceptance_instance(T, X0, Y0, system, trace)

    def test_three_pairs(self):
        self.assertEqual(thresholds(3), (32, 49, 20))
        for seed in range(settings.ACCEPTANCE_THREE_PAIR_INSTANCES):
            T = random_tournament(170, seed)
            X0, Y0 = terminals(170, 3, seed)
            system, trace = link(T, X0, Y0)
            self.assert_acceptance_instance(T, X0, Y0, system, trace)

    def test_escalation_restarts_with_domination_pair(self):
        calls = []

        def stalling_route(sub, cert, pi):
            if not calls:
                calls.append(pi)
                A, B = brute_force_domination_pair(sub, cert.k, budget=sub.n)
                return Escalation(AnchorCertificate(kind=DOMINATION, A=A, B=B), GreedyState(0, (), 0, 0))
            return route(sub, cert, pi)

        with mock.patch("linker.utils.route", side_effect=stalling_route):
            system, trace = link(self.T, self.X0, self.Y0, LinkOptions(check_hypotheses=False))
        self.assertEqual(trace.escalations, 1)
        self.assertEqual(trace.certificate.kind, DOMINATION)
        self.assertEqual(validate_path_system(self.T, list(zip(self.X0, self.Y0)), system), [])


class StallRestartTests(SimpleTestCase):
    def test_stalled_anchor_restarts_with_extracted_domination_pair(self):
        T = planted_stall_tournament()
        options = LinkOptions(check_hypotheses=False, anchor_threshold=8)
        system, trace = link(T, (0, 1), (2, 3), options)

        self.assertEqual([(r.u, r.v) for r in trace.peels], [(3 + i, 11 + i) for i in range(1, 9)])
        self.assertEqual(trace.escalations, 1)
        self.assertEqual(trace.certificate.kind, DOMINATION)
        # local pair (3, 6) over (1, 4) of the stalling tournament, lifted onto v_1..v_8
        self.assertEqual((trace.certificate.A, trace.certificate.B), ((15, 18), (13, 16)))
        self.assertEqual(trace.alpha, (3, 6))
        self.assertEqual(validate_path_system(T, [(0, 2), (1, 3)], system), [])


class HypothesisGateTests(SimpleTestCase):
    def test_transitive_fails_both(self):
        with self.assertRaises(HypothesisViolation) as caught:
            check_hypotheses(transitive(30), 2)
        self.assertEqual(caught.exception.report["failed"], ["connectivity", "min_out_degree"])

    def test_report_names_observed_connectivity(self):
        with self.assertRaises(HypothesisViolation) as caught:
            check_hypotheses(transitive(30), 2)
        connectivity = caught.exception.report["connectivity"]
        self.assertEqual((connectivity["required"], connectivity["observed"]), (19, 0))
        self.assertEqual(connectivity["separator"], [])
        self.assertEqual(connectivity["pair"], [1, 0])
        self.assertIn("kappa(T) = 0 < 19", str(caught.exception))

    def test_report_on_blocks_carries_a_separator(self):
        T = generate(GenSpec(BLOCKS, 60, seed=1))
        with self.assertRaises(HypothesisViolation) as caught:
            check_hypotheses(T, 2)
        connectivity = caught.exception.report["connectivity"]
        # the first block dominates the second, so nothing leads back
        self.assertEqual((connectivity["observed"], connectivity["separator"]), (0, []))
        x, y = connectivity["pair"]
        self.assertEqual(local_connectivity(T, x, y).count, 0)

    def test_blocks_fail_connectivity(self):
        T = generate(GenSpec(BLOCKS, 60, seed=1))
        with self.assertRaises(HypothesisViolation) as caught:
            link(T, (0, 1), (40, 41), LinkOptions(check_hypotheses=True))
        self.assertIn("connectivity", caught.exception.report["failed"])

    @override_settings(HYPOTHESIS_CHECK_MAX_N=10)
    def test_large_inputs_skip_the_gate(self):
        with self.assertLogs("linker", level="WARNING"):
            _, trace = link(random_tournament(30, seed=4), (0,), (1,))
        self.assertIsNone(trace.hypotheses)

    def test_too_small_without_gate(self):
        with self.assertRaises(PreconditionViolation) as caught:
            link(random_tournament(20, seed=0), (0, 1), (2, 3), LinkOptions(check_hypotheses=False))
        self.assertEqual(caught.exception.step, "peel")

    def test_bad_terminals(self):
        with self.assertRaises(InputError):
            link(transitive(5), (0, 1), (1, 2))
        with self.assertRaises(InputError):
            link(transitive(5), (), ())

import numpy as np
from django.conf import settings as django_settings
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.exceptions import InputError
from core.strategies import tournaments
from core.structures import Tournament
from toolkit.utils import random_tournament, transitive

from .structures import DOMINATES, Ordering
from .utils import check_interval_domination, count_forward_arcs, local_median_order, restrict


class LocalMedianOrderTests(SimpleTestCase):
    def test_transitive_tournament_keeps_identity(self):
        order = local_median_order(transitive(6))
        self.assertEqual(order.perm, tuple(range(6)))
        self.assertEqual(order.forward_arcs, 15)

    def test_reversed_seed_on_transitive_is_repaired(self):
        order = local_median_order(transitive(6), seed_order=Ordering(tuple(range(5, -1, -1)), 0))
        self.assertEqual(order.perm, tuple(range(6)))
        self.assertEqual(order.forward_arcs, 15)

    def test_three_cycle_has_one_backward_arc(self):
        T = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
        self.assertEqual(local_median_order(T).forward_arcs, 2)

    def test_random_tournament_has_no_violations(self):
        T = random_tournament(20, seed=7)
        order = local_median_order(T)
        self.assertEqual(check_interval_domination(T, order), [])
        self.assertEqual(order.forward_arcs, count_forward_arcs(T, order.perm))

    def test_bad_seed_order_is_rejected(self):
        with self.assertRaises(InputError):
            local_median_order(transitive(4), seed_order=Ordering((0, 1, 1, 3), 0))

    @given(tournaments(min_n=1, max_n=30))
    @settings(deadline=None, max_examples=100)
    def test_output_satisfies_interval_domination(self, T):
        order = local_median_order(T)
        self.assertEqual(sorted(order.perm), list(range(T.n)))
        self.assertEqual(check_interval_domination(T, order), [])
        self.assertEqual(order.forward_arcs, count_forward_arcs(T, order.perm))

    def test_random_tournaments_up_to_sixty(self):
        rng = np.random.default_rng(2024)
        for seed in range(django_settings.ACCEPTANCE_ORDER_ROUNDS):
            T = random_tournament(int(rng.integers(5, 61)), seed)
            order = local_median_order(T)
            self.assertEqual(check_interval_domination(T, order), [], f"seed {seed}, n={T.n}")

    @given(tournaments(min_n=2, max_n=15), st.randoms(use_true_random=False))
    @settings(deadline=None)
    def test_repairs_never_lose_forward_arcs(self, T, rnd):
        perm = list(range(T.n))
        rnd.shuffle(perm)
        seed = Ordering(tuple(perm), count_forward_arcs(T, perm))
        order = local_median_order(T, seed_order=seed)
        self.assertGreaterEqual(order.forward_arcs, seed.forward_arcs)
        self.assertEqual(order, local_median_order(T, seed_order=seed))

    @given(st.data())
    @settings(deadline=None)
    def test_intervals_restrict_to_valid_orders(self, data):
        T = data.draw(tournaments(min_n=2, max_n=20))
        order = local_median_order(T)
        i = data.draw(st.integers(min_value=0, max_value=T.n - 1))
        j = data.draw(st.integers(min_value=i, max_value=T.n - 1))
        sub, sub_order = restrict(T, order, i, j)
        self.assertEqual(sub.n, j - i + 1)
        self.assertEqual(check_interval_domination(sub, sub_order), [])


class IntervalDominationTests(SimpleTestCase):
    def test_identity_on_transitive_is_clean(self):
        T = transitive(6)
        self.assertEqual(check_interval_domination(T, Ordering(tuple(range(6)), 15)), [])

    def test_reversed_transitive_fails_at_position_zero(self):
        T = transitive(6)
        violations = check_interval_domination(T, Ordering(tuple(range(5, -1, -1)), 0))
        self.assertTrue(violations)
        first = violations[0]
        self.assertEqual((first.i, first.j, first.clause), (0, 1, DOMINATES))
        self.assertEqual((first.count, first.required), (0, 1))

    def test_non_permutation_is_rejected(self):
        with self.assertRaises(InputError):
            check_interval_domination(transitive(3), Ordering((0, 1), 0))

    def test_restrict_rejects_bad_interval(self):
        with self.assertRaises(InputError):
            restrict(transitive(4), Ordering((0, 1, 2, 3), 6), 2, 4)

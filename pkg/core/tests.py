import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from toolkit.utils import random_tournament, rotational_qr, transitive

from .exceptions import InputError, PreconditionViolation
from .strategies import tournaments, vertex_subsets
from .structures import Dipath, Tournament
from .utils import (
    arc,
    degree_sequence,
    image,
    in_degree_within,
    induced,
    is_dipath,
    members,
    min_out_degree,
    min_out_degree_within,
    out_degree_within,
    smallest,
    vertex_set,
)


def three_cycle():
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


class TournamentTests(SimpleTestCase):
    def test_arcs_of_transitive_and_cyclic_tournaments(self):
        T5 = transitive(5)
        self.assertTrue(arc(T5, 1, 3))
        self.assertFalse(arc(T5, 3, 1))
        self.assertTrue(arc(three_cycle(), 2, 0))

    def test_arc_rejects_bad_vertices(self):
        T5 = transitive(5)
        with self.assertRaises(InputError):
            arc(T5, 2, 2)
        with self.assertRaises(InputError):
            arc(T5, 0, 5)

    def test_loop_is_rejected(self):
        matrix = np.array([[1, 1], [0, 0]], dtype=bool)
        with self.assertRaisesRegex(InputError, "loop at vertex 0"):
            Tournament(matrix)

    def test_complementarity_is_checked(self):
        with self.assertRaisesRegex(InputError, r"complementarity violated at \(1,0\)"):
            Tournament.from_matrix(["01", "10"])
        with self.assertRaisesRegex(InputError, r"complementarity violated at \(2,0\)"):
            Tournament.from_matrix(["010", "001", "000"])

    def test_non_square_matrix_is_rejected(self):
        with self.assertRaises(InputError):
            Tournament.from_matrix(["01", "0"])

    def test_non_digit_entry_is_rejected(self):
        with self.assertRaisesRegex(InputError, "0/1"):
            Tournament.from_matrix(["0x", "00"])
        with self.assertRaises(InputError):
            Tournament.from_matrix([[0, None], [0, 0]])

    def test_tournament_is_immutable(self):
        T = three_cycle()
        with self.assertRaises(AttributeError):
            T.n = 4
        with self.assertRaises(ValueError):
            T.adj[0, 1] = False

    def test_provenance_is_not_part_of_equality(self):
        a = Tournament.from_matrix(["01", "00"], provenance="a")
        b = Tournament.from_matrix(["01", "00"], provenance="b")
        self.assertEqual(a, b)
        self.assertEqual(hash(a), hash(b))

    @given(tournaments(min_n=1, max_n=12))
    @settings(deadline=None)
    def test_degree_sum_and_minimum_out_degree(self, T):
        self.assertEqual(sum(degree_sequence(T)), T.n * (T.n - 1) // 2)
        v, d = min_out_degree(T)
        self.assertLessEqual(2 * d, T.n - 1)
        self.assertEqual(d, min(degree_sequence(T)))
        self.assertEqual(v, degree_sequence(T).index(d))


class DegreeTests(SimpleTestCase):
    def test_out_degree_within(self):
        T5 = transitive(5)
        self.assertEqual(out_degree_within(T5, 0, vertex_set([1, 2, 3, 4])), 4)
        self.assertEqual(out_degree_within(T5, 4, vertex_set([0, 1, 2, 3])), 0)
        self.assertEqual(out_degree_within(three_cycle(), 0, vertex_set([1, 2])), 1)

    def test_vertex_never_counts_itself(self):
        T5 = transitive(5)
        self.assertEqual(out_degree_within(T5, 0, T5.vertices), 4)
        self.assertEqual(in_degree_within(T5, 4, T5.vertices), 4)

    def test_min_out_degree_examples(self):
        self.assertEqual(min_out_degree(transitive(5)), (4, 0))
        self.assertEqual(min_out_degree(three_cycle()), (0, 1))
        self.assertEqual(min_out_degree(rotational_qr(7)), (0, 3))

    def test_min_out_degree_within_breaks_ties_by_id(self):
        self.assertEqual(min_out_degree_within(three_cycle(), vertex_set([0, 1, 2])), (0, 1))
        self.assertEqual(min_out_degree_within(transitive(5), vertex_set([1, 3])), (3, 0))
        self.assertIsNone(min_out_degree_within(transitive(5), 0))


class InducedTests(SimpleTestCase):
    def test_induced_transitive_is_transitive(self):
        sub, index_map = induced(transitive(5), vertex_set([1, 3, 4]))
        self.assertEqual(sub, transitive(3))
        self.assertEqual(index_map, (1, 3, 4))

    def test_induced_on_everything_is_identity(self):
        T = random_tournament(9, seed=3)
        sub, index_map = induced(T, T.vertices)
        self.assertEqual(sub, T)
        self.assertEqual(index_map, tuple(range(9)))

    def test_induced_pair_of_three_cycle(self):
        sub, _ = induced(three_cycle(), vertex_set([0, 1]))
        self.assertTrue(arc(sub, 0, 1))

    def test_empty_vertex_set_is_rejected(self):
        with self.assertRaises(InputError):
            induced(three_cycle(), 0)

    @given(st.data())
    @settings(deadline=None)
    def test_induced_is_functorial(self, data):
        T = data.draw(tournaments(min_n=2, max_n=10))
        W = data.draw(vertex_subsets(T.n, min_size=1))
        sub, index_map = induced(T, W)
        W_local = data.draw(vertex_subsets(sub.n, min_size=1))
        twice, _ = induced(sub, W_local)
        once, _ = induced(T, image(index_map, W_local))
        self.assertEqual(twice, once)


class VertexSetTests(SimpleTestCase):
    def test_members_are_ascending(self):
        self.assertEqual(members(vertex_set([5, 0, 3])), (0, 3, 5))
        self.assertEqual(smallest(vertex_set([5, 0, 3]), 2), (0, 3))
        self.assertEqual(members(0), ())


class DipathTests(SimpleTestCase):
    def test_dipath_rejects_repeats_and_empty(self):
        with self.assertRaises(InputError):
            Dipath((0, 1, 0))
        with self.assertRaises(InputError):
            Dipath(())

    def test_concatenation(self):
        path = Dipath((0, 1)).then(Dipath((1, 2, 3)))
        self.assertEqual(path.vertices, (0, 1, 2, 3))
        self.assertEqual(path.length, 3)
        self.assertEqual(path.interior, (1, 2))
        with self.assertRaises(InputError):
            Dipath((0, 1)).then(Dipath((2, 3)))

    def test_is_dipath(self):
        T = three_cycle()
        self.assertTrue(is_dipath(T, (0, 1, 2)))
        self.assertFalse(is_dipath(T, (0, 2)))
        self.assertFalse(is_dipath(T, (0, 1, 0)))
        self.assertFalse(is_dipath(T, (0, 3)))


class PreconditionTests(SimpleTestCase):
    def test_precondition_violation_carries_step_and_inequality(self):
        error = PreconditionViolation("too small", step="peel", inequality="delta+ > 0")
        self.assertEqual(error.step, "peel")
        self.assertEqual(error.inequality, "delta+ > 0")

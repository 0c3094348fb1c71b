from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from threelie.algebras import ThreeLieAlgebra
from threelie.representations import adjoint_representation

from .decorators import degree_bound_required
from .exceptions import ComplexInconsistency, DimensionMismatch, PreconditionFailed
from .linalg import Matrix, infeasibility_certificate, kernel_basis, quotient_dim, rank, solve_affine
from .multilinear import (
    Cochain, PreCochain, Splitting, admissible_coordinates, admissible_dimension, bidegree, compose,
    endomorphism_cochain, from_admissible_coordinates, insertion_sum, is_admissible, lift, lift_action,
    nr_bracket, pre_keys, restrict_to_base,
)
from .utils import canonical_pair, format_scalar, parse_scalar, random_scalar, seeded_rng, shuffles, sort_with_sign
from .verdicts import Verdict, Violation


def unit(dim, i):
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))


def random_precochain(rng, weight, dim):
    values = {}
    for key in pre_keys(weight, dim):
        if rng.random() < 0.3:
            values[key] = tuple(random_scalar(rng) for _ in range(dim))
    return PreCochain(weight, dim, dim, values)


class ScalarUtilsTests(SimpleTestCase):
    def test_parse_scalar_forms(self):
        self.assertEqual(parse_scalar('3/6'), Fraction(1, 2))
        self.assertEqual(parse_scalar('-4'), Fraction(-4))
        self.assertEqual(parse_scalar(7), Fraction(7))

    def test_parse_scalar_rejects_inexact_and_malformed(self):
        for bad in ('1/0', '1.5', 'x', '', 1.5, True, None):
            with self.assertRaises(ValueError):
                parse_scalar(bad)

    def test_format_scalar(self):
        self.assertEqual(format_scalar(Fraction(-2, 4)), '-1/2')
        self.assertEqual(format_scalar(Fraction(6, 3)), '2')

    def test_sort_with_sign(self):
        self.assertEqual(sort_with_sign((2, 1, 3)), (-1, (1, 2, 3)))
        self.assertEqual(sort_with_sign((3, 1, 2)), (1, (1, 2, 3)))
        self.assertEqual(sort_with_sign((1, 1, 2)), (0, None))
        self.assertEqual(canonical_pair(4, 2), (-1, (2, 4)))

    def test_shuffle_signs(self):
        signs = {tuple(chosen): sign for sign, chosen, _ in shuffles(['a', 'b', 'c'], 1)}
        self.assertEqual(signs, {('a',): 1, ('b',): -1, ('c',): 1})
        self.assertEqual(len(list(shuffles(list(range(4)), 2))), 6)


class LinalgTests(SimpleTestCase):
    def test_rank_and_kernel(self):
        m = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        self.assertEqual(rank(m), 2)
        kernel = kernel_basis(m)
        self.assertEqual(len(kernel), 1)
        self.assertEqual(m.apply(kernel[0]), (0, 0, 0))

    def test_solve_affine_consistent(self):
        m = Matrix.from_rows([[1, 1], [1, -1]])
        solution = solve_affine(m, [3, 1])
        self.assertEqual(solution.particular, (2, 1))
        self.assertEqual(solution.kernel, [])

    def test_inconsistent_system_has_certificate(self):
        m = Matrix.from_rows([[1, 2], [2, 4]])
        b = (1, 3)
        self.assertIsNone(solve_affine(m, b))
        y = infeasibility_certificate(m, b)
        self.assertTrue(m.transpose().apply(y) == (0, 0))
        self.assertNotEqual(sum(yi * bi for yi, bi in zip(y, b)), 0)

    def test_certificate_absent_for_solvable_system(self):
        m = Matrix.from_rows([[1, 2], [2, 4]])
        self.assertIsNone(infeasibility_certificate(m, (1, 2)))

    def test_large_product_matches_entrywise_product(self):
        rng = seeded_rng(7)
        a = Matrix.from_rows([[random_scalar(rng) for _ in range(20)] for _ in range(20)])
        b = Matrix.from_rows([[random_scalar(rng) for _ in range(20)] for _ in range(20)])
        product = a @ b
        for i in (0, 7, 19):
            for j in (0, 11, 19):
                self.assertEqual(product[i, j], sum(a[i, k] * b[k, j] for k in range(20)))

    def test_quotient_dim_rejects_inconsistent_complex(self):
        self.assertEqual(quotient_dim(5, 2), 3)
        with self.assertRaises(ComplexInconsistency):
            quotient_dim(2, 3)

    def test_shape_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            Matrix.identity(2) + Matrix.identity(3)


class CochainTests(SimpleTestCase):
    def test_admissible_cochain_is_skew_in_last_three_arguments(self):
        c = Cochain.from_admissible(1, 3, 3, {((), (0, 1, 2)): unit(3, 0)})
        self.assertEqual(c.eval([0, 1, 2]), (1, 0, 0))
        self.assertEqual(c.eval([1, 0, 2]), (-1, 0, 0))
        self.assertEqual(c.eval([2, 0, 1]), (1, 0, 0))
        self.assertEqual(c.eval([0, 0, 2]), (0, 0, 0))

    def test_non_admissible_precochain_is_detected(self):
        c = PreCochain(1, 3, 3, {(((0, 1),), 2): unit(3, 0)})
        ok, witness = is_admissible(c)
        self.assertFalse(ok)
        self.assertIsNotNone(witness)
        with self.assertRaises(DimensionMismatch):
            c.admissible()

    def test_admissible_dimensions(self):
        self.assertEqual(admissible_dimension(0, 3, 3), 9)
        self.assertEqual(admissible_dimension(1, 3, 3), 3)
        self.assertEqual(admissible_dimension(2, 4, 4), 96)

    def test_coordinates_round_trip(self):
        rng = seeded_rng(3)
        coords = tuple(random_scalar(rng) for _ in range(admissible_dimension(2, 3, 2)))
        c = from_admissible_coordinates(coords, 2, 3, 2)
        self.assertEqual(admissible_coordinates(c), coords)

    def test_zero_vectors_are_dropped(self):
        c = PreCochain(0, 2, 2, {((), 0): (0, 0), ((), 1): (1, 0)})
        self.assertEqual(list(c.values), [((), 1)])

    def test_graded_antisymmetry(self):
        rng = seeded_rng(11)
        for p, q in ((0, 1), (1, 1), (1, 2)):
            first, second = random_precochain(rng, p, 3), random_precochain(rng, q, 3)
            sign = -1 if p * q % 2 else 1
            self.assertEqual(nr_bracket(first, second), nr_bracket(second, first).scale(-sign))

    def test_graded_jacobi(self):
        rng = seeded_rng(12)
        sign = lambda x, y: -1 if x * y % 2 else 1
        for p, q, r in ((0, 1, 1), (1, 1, 1)):
            a, b, c = (random_precochain(rng, w, 3) for w in (p, q, r))
            total = (
                nr_bracket(a, nr_bracket(b, c)).scale(sign(p, r))
                + nr_bracket(b, nr_bracket(c, a)).scale(sign(q, p))
                + nr_bracket(c, nr_bracket(a, b)).scale(sign(r, q))
            )
            self.assertTrue(total.is_zero())

    def test_bracket_of_admissible_cochains_is_admissible(self):
        rng = seeded_rng(19)
        for p, q, dim in ((0, 1, 4), (1, 1, 4), (0, 2, 3), (1, 2, 3), (2, 2, 3)):
            first, second = (
                from_admissible_coordinates(
                    tuple(random_scalar(rng) for _ in range(admissible_dimension(w, dim, dim))), w, dim, dim,
                )
                for w in (p, q)
            )
            ok, witness = is_admissible(nr_bracket(first, second))
            self.assertTrue(ok, f'weights {(p, q)} in dimension {dim} break at {witness}')

    def test_bracket_with_endomorphism_is_insertion_minus_composition(self):
        pi = Cochain.from_admissible(1, 3, 3, {((), (0, 1, 2)): unit(3, 0)})
        n = Matrix.from_rows([[1, 2, 0], [0, 3, 1], [1, 0, 2]])
        self.assertEqual(
            nr_bracket(pi, endomorphism_cochain(n)),
            insertion_sum(pi, n, 1) - compose(n, pi),
        )

    def test_mismatched_spaces(self):
        with self.assertRaises(DimensionMismatch):
            PreCochain.zero(1, 3, 3) + PreCochain.zero(1, 4, 4)


class BidegreeTests(SimpleTestCase):
    def setUp(self):
        self.algebra = ThreeLieAlgebra.from_brackets(4, {(0, 1, 2): unit(4, 0)})
        self.rep = adjoint_representation(self.algebra)
        self.split = Splitting(4, 4)

    def test_lifted_structure_and_action(self):
        self.assertEqual(bidegree(lift(self.algebra.structure, self.split, 'g'), self.split), (2, 0))
        self.assertEqual(bidegree(lift_action(self.rep.action, self.split), self.split), (2, 0))

    def test_lifted_cocycle_candidate(self):
        omega = Cochain.from_admissible(1, 4, 4, {((), (0, 1, 3)): unit(4, 1)})
        self.assertEqual(bidegree(lift(omega, self.split, 'v'), self.split), (3, -1))

    def test_bidegree_is_additive(self):
        structure = lift(self.algebra.structure, self.split, 'g') + lift_action(self.rep.action, self.split)
        omega = lift(Cochain.from_admissible(1, 4, 4, {((), (0, 1, 3)): unit(4, 1)}), self.split, 'v')
        bracket = nr_bracket(structure, omega)
        self.assertFalse(bracket.is_zero())
        self.assertEqual(bidegree(bracket, self.split), (5, -1))

    def test_restriction_of_a_lift(self):
        omega = Cochain.from_admissible(1, 4, 4, {((), (0, 1, 3)): unit(4, 1)})
        self.assertEqual(restrict_to_base(lift(omega, self.split, 'v'), self.split, 'v'), omega)

    def test_zero_and_mixed_cochains_have_no_bidegree(self):
        self.assertIsNone(bidegree(PreCochain.zero(1, 8, 8), self.split))
        mixed = lift(self.algebra.structure, self.split, 'g') + lift(
            Cochain.from_admissible(1, 4, 4, {((), (0, 1, 3)): unit(4, 1)}), self.split, 'v'
        )
        self.assertIsNone(bidegree(mixed, self.split))


class VerdictTests(SimpleTestCase):
    def test_verdict_truthiness_and_labels(self):
        self.assertTrue(Verdict.from_violations([]))
        failing = Verdict.from_violations(
            [Violation('b', (0,), (1,), (0,)), Violation('a', (1,), (0,), (1,))], note=1
        )
        self.assertFalse(failing)
        self.assertEqual(failing.labels(), ['a', 'b'])
        self.assertEqual(failing.details, {'note': 1})


class DecoratorTests(SimpleTestCase):
    @override_settings(TRILIE_MAX_DEGREE=2)
    def test_degree_bound(self):
        @degree_bound_required
        def degrees(*, max_degree):
            return max_degree

        self.assertEqual(degrees(max_degree=2), 2)
        with self.assertRaises(PreconditionFailed):
            degrees(max_degree=3)
        with self.assertRaises(PreconditionFailed):
            degrees(max_degree=0)

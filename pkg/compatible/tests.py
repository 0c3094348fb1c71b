from fractions import Fraction

from django.test import SimpleTestCase

from core.exceptions import PreconditionFailed
from core.linalg import Matrix
from core.multilinear import Cochain, admissible_coordinates, endomorphism_cochain, nr_bracket
from core.utils import random_scalar, seeded_rng
from threelie.algebras import ThreeLieAlgebra
from threelie.representations import Representation, adjoint_representation

from .bicomplex import BicochainTuple, bicomplex_delta, bicomplex_matrix, compatible_cohomology, pair_derivations
from .deformations import (
    DeformationData, deformed_pair_at, infinitesimal_check, infinitesimal_equivalent, order2_by_evaluation,
    order2_check, triviality_check,
)
from .nijenhuis import (
    compatible_nijenhuis_check, deformed_compatible_pair, nijenhuis_deformation_pair,
    trivial_deformation_from_nijenhuis,
)
from .pairs import (
    CompatiblePair, compatible_mc_check, deformation_mc_check, is_pair_homomorphism, pencil_check, random_grid,
    validate_compatible,
)
from .representations import (
    CompatibleRepresentation, adjoint_pair, dual_compatible_representation, semidirect_mc_check,
    validate_compatible_representation,
)


def single(dim, triple, target, coeff=1):
    """Weight-1 cochain with one canonical bracket triple (0-based) sent to coeff·e_target"""
    vector = tuple(Fraction(coeff) if i == target else Fraction(0) for i in range(dim))
    return Cochain.from_admissible(1, dim, dim, {((), triple): vector})


def example_pair():
    return CompatiblePair.from_structures(single(4, (0, 1, 2), 0), single(4, (1, 2, 3), 0))


def noncompatible_pair():
    return CompatiblePair.from_structures(single(4, (0, 1, 2), 0), single(4, (0, 1, 3), 1))


def diagonal(*entries):
    n = len(entries)
    return Matrix.from_rows([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


RANK_ONE = Matrix.from_rows([[3, 1, 0, -2], [0, 3, 0, 0], [0, 0, 3, 0], [0, 0, 0, 3]])


def random_pair3(rng):
    """Two random brackets on a 3-dimensional space; every such pair is compatible"""
    first, second = (
        Cochain.from_admissible(1, 3, 3, {((), (0, 1, 2)): tuple(random_scalar(rng) for _ in range(3))})
        for _ in range(2)
    )
    return CompatiblePair.from_structures(first, second)


class CompatibilityTests(SimpleTestCase):
    def test_example_pair_is_compatible_every_way(self):
        pair = example_pair()
        verdict = validate_compatible(pair)
        self.assertTrue(verdict)
        self.assertEqual(verdict.details, {'bracket1_fi': True, 'bracket2_fi': True, 'compatibility': True})
        self.assertTrue(compatible_mc_check(pair.pi1, pair.pi2).ok)
        self.assertTrue(pencil_check(pair))
        self.assertTrue(pencil_check(pair, grid='random', seed=17))

    def test_noncompatible_pair_fails_only_the_mixed_identity(self):
        pair = noncompatible_pair()
        verdict = validate_compatible(pair)
        self.assertFalse(verdict)
        self.assertTrue(verdict.details['bracket1_fi'])
        self.assertTrue(verdict.details['bracket2_fi'])
        self.assertEqual(verdict.labels(), ['compatibility'])
        self.assertEqual(tuple(compatible_mc_check(pair.pi1, pair.pi2)), (True, False, True))
        self.assertFalse(pencil_check(pair))
        self.assertFalse(pair.is_compatible)

    def test_pencil_reports_every_sample(self):
        samples = [(1, 0), (0, 1), (1, 1)]
        verdict = pencil_check(noncompatible_pair(), samples=samples)
        self.assertEqual(
            [point['fundamental_identity'] for point in verdict.details['samples']],
            [True, True, False],
        )

    def test_random_grid_is_seeded(self):
        grid = random_grid(3)
        self.assertEqual(grid, random_grid(3))
        self.assertEqual(len(set(grid)), 9)
        self.assertNotIn((0, 0), grid)

    def test_abelian_pair(self):
        self.assertTrue(validate_compatible(CompatiblePair.abelian(3)))

    def test_pair_homomorphism(self):
        pair = example_pair()
        self.assertTrue(is_pair_homomorphism(Matrix.identity(4), pair, pair))
        self.assertFalse(is_pair_homomorphism(diagonal(1, 1, 1, 2), pair, pair))


class BicomplexTests(SimpleTestCase):
    def test_abelian_cohomology(self):
        report = compatible_cohomology(CompatiblePair.abelian(3), max_degree=2)
        self.assertEqual(report.cohomology_dim(1), 9)
        self.assertEqual(report.cohomology_dim(2), 6)

    def test_first_cohomology_is_common_derivations(self):
        pair = example_pair()
        report = compatible_cohomology(pair, max_degree=1)
        self.assertEqual(report.cohomology_dim(1), len(pair_derivations(pair)))

    def test_first_cohomology_of_random_pairs(self):
        rng = seeded_rng(73)
        pairs = [random_pair3(rng), random_pair3(rng)]
        pairs.append(nijenhuis_deformation_pair(ThreeLieAlgebra(4, single(4, (0, 1, 2), 0)), diagonal(2, 2, 3, 5)))
        for pair in pairs:
            self.assertTrue(validate_compatible(pair))
            report = compatible_cohomology(pair, max_degree=1)
            self.assertEqual(report.cohomology_dim(1), len(pair_derivations(pair)))

    def test_self_coefficients_match_adjoint_pair(self):
        pair = example_pair()
        self.assertEqual(
            compatible_cohomology(pair, max_degree=2),
            compatible_cohomology(pair, adjoint_pair(pair), max_degree=2),
        )

    def test_delta_squares_to_zero(self):
        pair = example_pair()
        for coeffs in (None, dual_compatible_representation(adjoint_pair(pair))):
            product = bicomplex_matrix(pair, coeffs, 2) @ bicomplex_matrix(pair, coeffs, 1)
            self.assertTrue(product.is_zero())

    def test_delta_squares_to_zero_through_degree_three(self):
        pair = CompatiblePair.from_structures(single(3, (0, 1, 2), 0), single(3, (0, 1, 2), 1))
        for coeffs in (None, dual_compatible_representation(adjoint_pair(pair))):
            for n in (1, 2, 3):
                product = bicomplex_matrix(pair, coeffs, n + 1) @ bicomplex_matrix(pair, coeffs, n)
                self.assertTrue(product.is_zero())

    def test_delta_of_an_endomorphism(self):
        pair = example_pair()
        unit = Matrix.from_rows([[1 if (r, c) == (0, 0) else 0 for c in range(4)] for r in range(4)])
        image = bicomplex_delta(pair, None, BicochainTuple(1, (endomorphism_cochain(unit),)))
        self.assertEqual(image.ce_degree, 2)
        self.assertTrue(image.components[0].is_zero())
        self.assertEqual(
            admissible_coordinates(image.components[1]),
            admissible_coordinates(single(4, (1, 2, 3), 0, -1)),
        )

    def test_cohomology_needs_a_compatible_pair(self):
        with self.assertRaises(PreconditionFailed):
            compatible_cohomology(noncompatible_pair(), max_degree=1)


class RepresentationTests(SimpleTestCase):
    def test_adjoint_and_coadjoint_pairs(self):
        pair = example_pair()
        rep = adjoint_pair(pair)
        self.assertTrue(validate_compatible_representation(pair, rep))
        self.assertTrue(validate_compatible_representation(pair, dual_compatible_representation(rep)))
        self.assertEqual(semidirect_mc_check(pair, rep), (True, True, True))

    def test_missing_second_action_breaks_the_mixed_identities(self):
        pair = example_pair()
        rep = CompatibleRepresentation(adjoint_representation(pair.bracket1), Representation.zero(4, 4))
        verdict = validate_compatible_representation(pair, rep)
        self.assertFalse(verdict)
        self.assertIn('mixed commutator identity', verdict.labels())
        self.assertFalse(all(semidirect_mc_check(pair, rep)))


class DeformationTests(SimpleTestCase):
    def setUp(self):
        self.pair = example_pair()
        self.zero = Cochain.zero(1, 4, 4)

    def test_structures_are_an_infinitesimal_deformation(self):
        self.assertTrue(infinitesimal_check(self.pair, DeformationData(self.pair.pi1, self.pair.pi2)))

    def test_non_cocycle(self):
        verdict = infinitesimal_check(self.pair, DeformationData(single(4, (0, 1, 3), 1), self.zero))
        self.assertFalse(verdict)
        self.assertFalse(verdict.details['equations']['[pi1, omega1] = 0'])
        self.assertTrue(verdict.details['equations']['[pi2, omega2] = 0'])

    def test_equivalent_deformations_have_a_witness(self):
        first = DeformationData(self.pair.pi1, self.pair.pi2)
        second = DeformationData(self.pair.pi1, self.zero)
        result = infinitesimal_equivalent(self.pair, first, second)
        self.assertTrue(result.equivalent)
        self.assertIsNone(result.certificate)
        witness = endomorphism_cochain(result.witness)
        self.assertTrue(nr_bracket(self.pair.pi1, witness).is_zero())
        self.assertEqual(
            admissible_coordinates(nr_bracket(self.pair.pi2, witness)),
            admissible_coordinates(self.pair.pi2),
        )

    def test_inequivalent_deformations_have_a_certificate(self):
        pair = CompatiblePair.abelian(3)
        zero = Cochain.zero(1, 3, 3)
        result = infinitesimal_equivalent(
            pair, DeformationData(single(3, (0, 1, 2), 1), zero), DeformationData(zero, zero),
        )
        self.assertFalse(result.equivalent)
        self.assertIsNone(result.witness)
        self.assertTrue(any(result.certificate))

    def test_equivalence_needs_cocycles(self):
        with self.assertRaises(PreconditionFailed):
            infinitesimal_equivalent(
                self.pair,
                DeformationData(single(4, (0, 1, 3), 1), self.zero),
                DeformationData(self.zero, self.zero),
            )

    def test_order_two_deformation_from_nijenhuis_operator(self):
        data = trivial_deformation_from_nijenhuis(self.pair, diagonal(2, 2, 3, 5))
        self.assertEqual(data.omega1, single(4, (0, 1, 2), 0, 5))
        self.assertEqual(data.omega2, single(4, (1, 2, 3), 0, 8))
        self.assertEqual(data.omega1_tilde, single(4, (0, 1, 2), 0, 6))
        self.assertEqual(data.omega2_tilde, single(4, (1, 2, 3), 0, 15))
        verdict = order2_check(self.pair, data)
        self.assertTrue(verdict)
        self.assertEqual(verdict.details['blocks'], {'block1': True, 'block2': True, 'block3': True, 'block4': True})
        self.assertTrue(order2_by_evaluation(self.pair, data))
        self.assertTrue(triviality_check(self.pair, data, diagonal(2, 2, 3, 5)))

    def test_wrong_operator_is_not_a_triviality_witness(self):
        data = trivial_deformation_from_nijenhuis(self.pair, diagonal(2, 2, 3, 5))
        self.assertFalse(triviality_check(self.pair, data, diagonal(2, 2, 3, 4)))

    def test_order_two_failure_is_reported_by_block(self):
        data = DeformationData(self.pair.pi1, self.pair.pi2, single(4, (0, 1, 3), 1), self.zero)
        verdict = order2_check(self.pair, data)
        self.assertFalse(verdict)
        self.assertTrue(verdict.details['blocks']['block1'])
        self.assertFalse(verdict.details['blocks']['block2'])
        self.assertFalse(order2_by_evaluation(self.pair, data))

    def test_deformed_pair_at_zero_is_the_pair(self):
        data = DeformationData(self.pair.pi1, self.pair.pi2)
        self.assertEqual(deformed_pair_at(self.pair, data, 0), self.pair)
        self.assertEqual(deformed_pair_at(self.pair, data, 1).bracket1.bracket(0, 1, 2), (2, 0, 0, 0))

    def test_maurer_cartan_deformation(self):
        self.assertTrue(deformation_mc_check(self.pair, self.pair.pi1, self.pair.pi2))
        self.assertFalse(deformation_mc_check(self.pair, single(4, (0, 1, 3), 1), self.zero))


class NijenhuisTests(SimpleTestCase):
    def setUp(self):
        self.pair = example_pair()

    def test_diagonal_and_rank_one_operators(self):
        for operator in (diagonal(2, 2, 3, 5), RANK_ONE):
            verdict = compatible_nijenhuis_check(self.pair, operator)
            self.assertTrue(verdict)
            self.assertTrue(verdict.details['pencil_nijenhuis'])

    def test_operator_nijenhuis_for_one_bracket_only(self):
        verdict = compatible_nijenhuis_check(self.pair, diagonal(1, 2, 3, 4))
        self.assertFalse(verdict)
        self.assertTrue(verdict.details['bracket1_nijenhuis'])
        self.assertFalse(verdict.details['bracket2_nijenhuis'])

    def test_deformed_compatible_pair(self):
        deformed = deformed_compatible_pair(self.pair, diagonal(2, 2, 3, 5))
        self.assertEqual(deformed.bracket1.bracket(0, 1, 2), (6, 0, 0, 0))
        self.assertEqual(deformed.bracket2.bracket(1, 2, 3), (15, 0, 0, 0))
        self.assertTrue(validate_compatible(deformed))

    def test_deformed_pair_needs_nijenhuis_operator(self):
        with self.assertRaises(PreconditionFailed):
            deformed_compatible_pair(self.pair, diagonal(1, 2, 3, 4))

    def test_nijenhuis_deformation_pair(self):
        algebra = ThreeLieAlgebra(4, single(4, (0, 1, 2), 0))
        pair = nijenhuis_deformation_pair(algebra, diagonal(2, 2, 3, 5))
        self.assertEqual(pair.bracket1, algebra)
        self.assertEqual(pair.bracket2.bracket(0, 1, 2), (6, 0, 0, 0))
        self.assertTrue(pair.is_compatible)

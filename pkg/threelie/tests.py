from fractions import Fraction

from django.conf import settings
from django.test import SimpleTestCase, override_settings

from cli.serializers import parse_algebra
from core.exceptions import DimensionMismatch, PreconditionFailed
from core.linalg import Matrix
from core.multilinear import Cochain, admissible_basis, nr_bracket
from core.utils import canonical_triples, random_scalar, seeded_rng

from .algebras import (
    ThreeLieAlgebra, derivation_space, homomorphism_defect, is_homomorphism, validate_fi, validate_fi_via_mc,
)
from .cohomology import coboundary, coboundary_by_lift, coboundary_explicit, coboundary_matrix, cohomology
from .nijenhuis import (
    deformed_bracket, deformed_structure_by_bracket, deformed_structure_explicit, is_nijenhuis,
    nijenhuis_pair_compatibility, nijenhuis_torsion, search_nijenhuis, torsion_by_bracket, torsion_explicit,
)
from .representations import (
    Representation, adjoint_representation, dual_representation, semidirect, validate_representation,
)


def unit(dim, i):
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))


def diagonal(*entries):
    n = len(entries)
    return Matrix.from_rows([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def simple_d3():
    """[e1, e2, e3] = e1"""
    return ThreeLieAlgebra.from_brackets(3, {(0, 1, 2): unit(3, 0)})


def example_brackets():
    """[e1, e2, e3] = e1 and {e2, e3, e4} = e1 on a 4-dimensional space"""
    return (
        ThreeLieAlgebra.from_brackets(4, {(0, 1, 2): unit(4, 0)}),
        ThreeLieAlgebra.from_brackets(4, {(1, 2, 3): unit(4, 0)}),
    )


def fi_violating():
    return ThreeLieAlgebra.from_brackets(4, {(0, 1, 2): unit(4, 0), (0, 1, 3): unit(4, 1)})


def quotient_representation():
    """ρ(e2, e3) = M and zero elsewhere, pulled back along d3 → d3 / [d3, d3, d3]"""
    return Representation(3, 2, {(1, 2): Matrix.from_rows([[1, 2], [0, 3]])})


def d3_representations():
    algebra = simple_d3()
    adjoint = adjoint_representation(algebra)
    return algebra, (adjoint, dual_representation(adjoint), quotient_representation())


def random_candidate(rng, dim):
    brackets = {}
    for triple in canonical_triples(dim):
        if rng.random() < 0.5:
            brackets[triple] = tuple(random_scalar(rng) for _ in range(dim))
    return ThreeLieAlgebra.from_brackets(dim, brackets)


class AlgebraTests(SimpleTestCase):
    def test_sign_absorption(self):
        algebra = ThreeLieAlgebra.from_brackets(3, {(1, 0, 2): unit(3, 0)})
        self.assertEqual(algebra.bracket(0, 1, 2), (-1, 0, 0))
        self.assertEqual(algebra.bracket(2, 1, 0), (1, 0, 0))

    def test_duplicate_and_out_of_range_triples(self):
        with self.assertRaises(DimensionMismatch):
            ThreeLieAlgebra.from_brackets(3, {(0, 1, 2): unit(3, 0), (1, 0, 2): unit(3, 0)})
        with self.assertRaises(DimensionMismatch):
            ThreeLieAlgebra.from_brackets(3, {(0, 1, 3): unit(3, 0)})

    def test_example_brackets_satisfy_fundamental_identity(self):
        for algebra in example_brackets() + (simple_d3(),):
            self.assertTrue(validate_fi(algebra))
            self.assertTrue(validate_fi_via_mc(algebra))

    def test_fundamental_identity_violation_is_located(self):
        verdict = validate_fi(fi_violating())
        self.assertFalse(verdict)
        self.assertFalse(validate_fi_via_mc(fi_violating()))
        located = [v for v in verdict.violations if v.where == (1, 2, 0, 1, 3)]
        self.assertEqual(len(located), 1)
        self.assertEqual(located[0].lhs, (0, 0, 0, 0))
        self.assertEqual(located[0].rhs, (0, 1, 0, 0))

    def test_shipped_violator_fails_both_checks(self):
        algebra = parse_algebra(settings.TRILIE_CORPUS_DIR / 'fi_violating.algebra.json')
        self.assertEqual(algebra, fi_violating())
        verdict = validate_fi(algebra)
        self.assertFalse(verdict)
        self.assertIn((1, 2, 0, 1, 3), [v.where for v in verdict.violations])
        self.assertFalse(validate_fi_via_mc(algebra))

    def test_basis_check_agrees_with_maurer_cartan(self):
        rng = seeded_rng(2024)
        for i in range(200):
            algebra = random_candidate(rng, 3 + i % 2)
            self.assertEqual(validate_fi(algebra).ok, validate_fi_via_mc(algebra))

    def test_derivations_of_abelian_algebra(self):
        self.assertEqual(len(derivation_space(ThreeLieAlgebra.abelian(3))), 9)

    def test_derivations_match_first_cohomology(self):
        for algebra in example_brackets() + (simple_d3(),):
            report = cohomology(algebra, adjoint_representation(algebra), max_degree=1)
            self.assertEqual(report.cohomology_dim(1), len(derivation_space(algebra)))

    def test_homomorphisms(self):
        algebra = simple_d3()
        self.assertTrue(is_homomorphism(Matrix.identity(3), algebra, algebra))
        self.assertTrue(homomorphism_defect(Matrix.identity(3), algebra, algebra).is_zero())
        self.assertFalse(is_homomorphism(Matrix.scalar(3, 2), algebra, algebra))


class RepresentationTests(SimpleTestCase):
    def test_adjoint_matrices(self):
        rep = adjoint_representation(example_brackets()[0])
        self.assertEqual(rep.action(0, 1)[0, 2], 1)
        self.assertEqual(rep.action(1, 2)[0, 0], 1)
        self.assertEqual(rep.action(0, 2)[0, 1], -1)
        self.assertEqual(rep.action(1, 0)[0, 2], -1)

    def test_adjoint_and_coadjoint_are_representations(self):
        for algebra in example_brackets() + (simple_d3(),):
            rep = adjoint_representation(algebra)
            self.assertTrue(validate_representation(algebra, rep))
            self.assertTrue(validate_representation(algebra, dual_representation(rep)))

    def test_corrupted_action_fails(self):
        algebra = simple_d3()
        rep = Representation(3, 1, {(0, 1): Matrix.from_rows([[1]])})
        verdict = validate_representation(algebra, rep)
        self.assertFalse(verdict)
        self.assertTrue(verdict.labels())

    def test_pulled_back_action_is_a_representation(self):
        algebra, reps = d3_representations()
        self.assertTrue(validate_representation(algebra, reps[2]))

    def test_semidirect_product_is_three_lie(self):
        algebra = simple_d3()
        product = semidirect(algebra, adjoint_representation(algebra))
        self.assertEqual(product.dim, 6)
        self.assertTrue(validate_fi(product))

    def test_semidirect_product_with_a_corrupted_action_fails(self):
        rep = Representation(3, 1, {(0, 1): Matrix.from_rows([[1]])})
        self.assertFalse(validate_fi(semidirect(simple_d3(), rep)))


class CoboundaryTests(SimpleTestCase):
    def test_two_paths_agree_on_basis_cochains(self):
        algebra, reps = d3_representations()
        cases = [(algebra, rep, (1, 2, 3)) for rep in reps]
        second = example_brackets()[1]
        adjoint = adjoint_representation(second)
        cases += [(second, adjoint, (1, 2)), (second, dual_representation(adjoint), (1, 2))]
        for algebra, rep, degrees in cases:
            for n in degrees:
                for f in admissible_basis(n - 1, algebra.dim, rep.module_dim):
                    self.assertEqual(
                        coboundary_explicit(algebra, rep, f, n),
                        coboundary_by_lift(algebra, rep, f, n),
                    )

    def test_coboundary_of_structure_vanishes_for_adjoint(self):
        algebra = simple_d3()
        self.assertTrue(coboundary(algebra, adjoint_representation(algebra), algebra.structure, 2).is_zero())

    def test_coboundary_squares_to_zero(self):
        algebra, reps = d3_representations()
        for rep in reps:
            for n in (1, 2, 3):
                product = coboundary_matrix(algebra, rep, n + 1) @ coboundary_matrix(algebra, rep, n)
                self.assertTrue(product.is_zero())
        first = example_brackets()[0]
        adjoint = adjoint_representation(first)
        for rep in (adjoint, dual_representation(adjoint)):
            for n in (1, 2):
                product = coboundary_matrix(first, rep, n + 1) @ coboundary_matrix(first, rep, n)
                self.assertTrue(product.is_zero())

    def test_raw_complex_squares_to_zero(self):
        algebra = simple_d3()
        rep = adjoint_representation(algebra)
        product = coboundary_matrix(algebra, rep, 2, raw=True) @ coboundary_matrix(algebra, rep, 1, raw=True)
        self.assertTrue(product.is_zero())

    def test_abelian_cohomology_counts_cochains(self):
        algebra = ThreeLieAlgebra.abelian(3)
        report = cohomology(algebra, adjoint_representation(algebra), max_degree=3)
        self.assertEqual([row.cohomology_dim for row in report.degrees], [9, 3, 9])

    def test_invalid_representation_is_a_precondition_failure(self):
        algebra = simple_d3()
        rep = Representation(3, 1, {(0, 1): Matrix.from_rows([[1]])})
        with self.assertRaises(PreconditionFailed):
            cohomology(algebra, rep, max_degree=1)

    @override_settings(TRILIE_MAX_DEGREE=1)
    def test_degree_bound_from_settings(self):
        algebra = simple_d3()
        with self.assertRaises(PreconditionFailed):
            cohomology(algebra, adjoint_representation(algebra), max_degree=2)


class NijenhuisTests(SimpleTestCase):
    def test_every_operator_is_nijenhuis_in_dimension_three(self):
        algebra = simple_d3()
        operator = Matrix.from_rows([[1, 2, 0], [0, 3, 1], [1, 0, 2]])
        self.assertTrue(is_nijenhuis(algebra, operator))
        self.assertTrue(validate_fi(deformed_bracket(algebra, operator)))

    def test_trivial_operators(self):
        for algebra in example_brackets():
            for operator in (Matrix.zeros(4, 4), Matrix.identity(4), Matrix.scalar(4, Fraction(-5, 3))):
                self.assertTrue(is_nijenhuis(algebra, operator))

    def test_diagonal_operators_on_the_example(self):
        first, second = example_brackets()
        self.assertTrue(is_nijenhuis(first, diagonal(1, 2, 3, 4)))
        self.assertFalse(is_nijenhuis(second, diagonal(1, 2, 3, 4)))
        self.assertTrue(is_nijenhuis(second, diagonal(2, 2, 3, 5)))
        self.assertTrue(is_nijenhuis(second, diagonal(-1, 2, -1, 4)))

    def test_torsion_paths_agree(self):
        second = example_brackets()[1]
        operator = diagonal(1, 2, 3, 4)
        self.assertEqual(torsion_by_bracket(second.structure, operator), torsion_explicit(second.structure, operator))
        self.assertFalse(nijenhuis_torsion(second, operator).is_zero())

    def test_deformed_bracket_paths_agree(self):
        second = example_brackets()[1]
        operator = Matrix.from_rows([[3, 1, 0, -2], [0, 3, 0, 0], [0, 0, 3, 0], [0, 0, 0, 3]])
        self.assertEqual(
            deformed_structure_explicit(second.structure, operator),
            deformed_structure_by_bracket(second.structure, operator),
        )

    def test_nijenhuis_operator_is_a_homomorphism_from_the_deformed_bracket(self):
        first = example_brackets()[0]
        operator = diagonal(2, 2, 3, 5)
        deformed = deformed_bracket(first, operator)
        self.assertTrue(is_homomorphism(operator, deformed, first))

    def test_pair_compatibility_identity(self):
        first = example_brackets()[0]
        verdict = nijenhuis_pair_compatibility(first, diagonal(2, 2, 3, 5))
        self.assertTrue(verdict)
        self.assertTrue(verdict.details['identity_holds'])

    def test_pair_compatibility_needs_a_nijenhuis_operator(self):
        with self.assertRaises(PreconditionFailed):
            nijenhuis_pair_compatibility(example_brackets()[1], diagonal(1, 2, 3, 4))

    def test_search_finds_nijenhuis_operators(self):
        algebras = example_brackets()
        found = search_nijenhuis(algebras, seed=5, count=2, attempts=200)
        self.assertEqual(found, search_nijenhuis(algebras, seed=5, count=2, attempts=200))
        for operator in found:
            self.assertTrue(all(is_nijenhuis(a, operator) for a in algebras))

    def test_torsion_is_an_admissible_weight_one_cochain(self):
        torsion = nijenhuis_torsion(simple_d3(), Matrix.identity(3))
        self.assertIsInstance(torsion, Cochain)
        self.assertEqual(torsion.weight, 1)
        self.assertTrue(nr_bracket(simple_d3().structure, simple_d3().structure).is_zero())

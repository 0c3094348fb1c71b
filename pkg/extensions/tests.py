from fractions import Fraction

from django.test import SimpleTestCase

from compatible.pairs import CompatiblePair, is_pair_homomorphism, validate_compatible
from compatible.representations import CompatibleRepresentation, adjoint_pair
from core.exceptions import DimensionMismatch, PathDisagreement, PreconditionFailed
from core.linalg import Matrix
from core.multilinear import Cochain, Splitting
from core.utils import random_scalar, seeded_rng
from threelie.algebras import ThreeLieAlgebra
from threelie.representations import Representation, adjoint_representation

from .abelian import (
    AbelianExtension, Section, build_extension, classify, cocycle_class_equal, extract_cocycle,
    induced_representation, section_shift, transferred_bracket,
)


def single(dim, target_dim, triple, target, coeff=1):
    vector = tuple(Fraction(coeff) if i == target else Fraction(0) for i in range(target_dim))
    return Cochain.from_admissible(1, dim, target_dim, {((), triple): vector})


def example_pair():
    return CompatiblePair.from_structures(single(4, 4, (0, 1, 2), 0), single(4, 4, (1, 2, 3), 0))


def d3_pair():
    """[e1, e2, e3] = e1 paired with the zero bracket"""
    return CompatiblePair(3, ThreeLieAlgebra(3, single(3, 3, (0, 1, 2), 0)), ThreeLieAlgebra.abelian(3))


def random_tau(rng, module_dim, base_dim):
    return Matrix.from_rows([[random_scalar(rng) for _ in range(base_dim)] for _ in range(module_dim)], base_dim)


class BuildTests(SimpleTestCase):
    def test_abelian_base_round_trip(self):
        base = CompatiblePair.abelian(3)
        rep = CompatibleRepresentation.zero(3, 1)
        omega1, omega2 = single(3, 1, (0, 1, 2), 0), Cochain.zero(1, 3, 1)
        result = build_extension(base, rep, omega1, omega2)
        self.assertTrue(result.ok)
        ext = result.extension
        self.assertEqual(ext.total.dim, 4)
        self.assertEqual(ext.total.bracket1.bracket(0, 1, 2), (0, 0, 0, 1))
        canonical = Section.canonical(3, 1)
        self.assertEqual(extract_cocycle(ext, canonical), (omega1, omega2))
        self.assertEqual(induced_representation(ext, canonical), rep)

    def test_self_coefficient_extension(self):
        pair = d3_pair()
        result = build_extension(pair, adjoint_pair(pair), pair.pi1, pair.pi2)
        self.assertTrue(result.ok)
        self.assertEqual(result.extension.total.dim, 6)
        self.assertTrue(validate_compatible(result.extension.total))

    def test_non_cocycle_is_rejected_with_the_failing_equation(self):
        pair = example_pair()
        result = build_extension(pair, adjoint_pair(pair), single(4, 4, (0, 1, 3), 1), Cochain.zero(1, 4, 4))
        self.assertFalse(result.ok)
        self.assertIsNone(result.extension)
        self.assertFalse(result.verdict.details['equations']['d(pi1+rho) omega1 = 0'])

    def test_invalid_coefficients(self):
        pair = example_pair()
        rep = CompatibleRepresentation(
            adjoint_representation(pair.bracket1), CompatibleRepresentation.zero(4, 4).mu,
        )
        with self.assertRaises(PreconditionFailed):
            build_extension(pair, rep, Cochain.zero(1, 4, 4), Cochain.zero(1, 4, 4))

    def test_cocycle_shape(self):
        with self.assertRaises(DimensionMismatch):
            build_extension(
                CompatiblePair.abelian(3), CompatibleRepresentation.zero(3, 1),
                Cochain.zero(1, 3, 2), Cochain.zero(1, 3, 1),
            )


class SectionTests(SimpleTestCase):
    def test_tau_round_trip(self):
        tau = Matrix.from_rows([[1, 0, 2]])
        section = Section.from_tau(tau)
        self.assertEqual(section.tau, tau)
        self.assertEqual(section.image(2), (0, 0, 1, 2))

    def test_section_must_split_the_projection(self):
        with self.assertRaises(DimensionMismatch):
            Section(Matrix.from_rows([[1, 0], [1, 1], [0, 3]]), 2)

    def test_shift_changes_the_cocycle_by_a_coboundary(self):
        pair = d3_pair()
        ext = build_extension(pair, adjoint_pair(pair), pair.pi1, pair.pi2).extension
        rng = seeded_rng(41)
        canonical = Section.canonical(3, 3)
        for _ in range(3):
            shifted = Section.from_tau(random_tau(rng, 3, 3))
            self.assertTrue(cocycle_class_equal(ext, canonical, shifted))
            self.assertEqual(induced_representation(ext, shifted), adjoint_pair(pair))

    def test_extension_that_is_not_abelian(self):
        ext = AbelianExtension(
            CompatiblePair.abelian(3), CompatibleRepresentation.zero(3, 1),
            Cochain.zero(1, 3, 1), Cochain.zero(1, 3, 1), example_pair(),
        )
        with self.assertRaises(PreconditionFailed):
            induced_representation(ext, Section.canonical(3, 1))


class ClassificationTests(SimpleTestCase):
    def test_distinct_classes_have_a_certificate(self):
        base, rep = CompatiblePair.abelian(3), CompatibleRepresentation.zero(3, 1)
        zero = Cochain.zero(1, 3, 1)
        first = build_extension(base, rep, single(3, 1, (0, 1, 2), 0), zero).extension
        trivial = build_extension(base, rep, zero, zero).extension
        result = classify(first, trivial)
        self.assertFalse(result.isomorphic)
        self.assertIsNone(result.theta)
        self.assertTrue(any(result.certificate))

    def test_shifted_cocycles_are_isomorphic(self):
        pair = d3_pair()
        rep = adjoint_pair(pair)
        ext = build_extension(pair, rep, pair.pi1, pair.pi2).extension
        shift1, shift2 = section_shift(ext, random_tau(seeded_rng(9), 3, 3))
        moved = build_extension(
            pair, rep, (pair.pi1 + shift1).admissible(), (pair.pi2 + shift2).admissible(),
        ).extension
        result = classify(ext, moved)
        self.assertTrue(result.isomorphic)
        self.assertIsNone(result.certificate)
        self.assertTrue(is_pair_homomorphism(result.theta, ext.total, moved.total))

    def test_an_extension_is_isomorphic_to_itself(self):
        pair = d3_pair()
        ext = build_extension(pair, adjoint_pair(pair), pair.pi1, pair.pi2).extension
        result = classify(ext, ext)
        self.assertTrue(result.isomorphic)
        self.assertEqual(result.theta, Matrix.identity(6))

    def test_classification_needs_a_common_representation(self):
        base = CompatiblePair.abelian(3)
        zero = Cochain.zero(1, 3, 1)
        first = build_extension(base, CompatibleRepresentation.zero(3, 1), zero, zero).extension
        other = build_extension(base, CompatibleRepresentation.zero(3, 2), Cochain.zero(1, 3, 2), Cochain.zero(1, 3, 2))
        with self.assertRaises(PreconditionFailed):
            classify(first, other.extension)


class ReadOffTests(SimpleTestCase):
    def hand_built(self, base, rep, omega1, omega2):
        """An extension assembled without the cocycle check of build_extension"""
        split = Splitting(base.dim, rep.module_dim)
        total = CompatiblePair(
            split.total,
            transferred_bracket(base.bracket1, rep.rho, omega1, split),
            transferred_bracket(base.bracket2, rep.mu, omega2, split),
        )
        return AbelianExtension(base, rep, omega1, omega2, total)

    def test_induced_maps_must_be_a_representation(self):
        bad = Representation(3, 1, {(0, 1): Matrix.from_rows([[1]])})
        rep = CompatibleRepresentation(bad, Representation.zero(3, 1))
        zero = Cochain.zero(1, 3, 1)
        ext = self.hand_built(d3_pair(), rep, zero, zero)
        with self.assertRaises(PathDisagreement):
            induced_representation(ext, Section.canonical(3, 1))

    def test_extracted_cochains_must_be_a_cocycle(self):
        pair = example_pair()
        ext = self.hand_built(pair, adjoint_pair(pair), single(4, 4, (0, 1, 3), 1), Cochain.zero(1, 4, 4))
        self.assertEqual(induced_representation(ext, Section.canonical(4, 4)), adjoint_pair(pair))
        with self.assertRaises(PathDisagreement):
            extract_cocycle(ext, Section.canonical(4, 4))

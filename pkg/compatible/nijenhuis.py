from fractions import Fraction
import logging

from django.conf import settings

from core.decorators import compatible_pair_required, nijenhuis_required
from core.exceptions import PathDisagreement, PreconditionFailed
from core.multilinear import compose, insertion_sum, nr_bracket, endomorphism_cochain
from core.verdicts import Verdict
from threelie.algebras import homomorphism_defect
from threelie.nijenhuis import (
    deformed_bracket, deformed_structure_explicit, nijenhuis_pair_compatibility, nijenhuis_torsion,
)

from .deformations import DeformationData, order2_check, triviality_check
from .pairs import CompatiblePair, is_pair_homomorphism, validate_compatible


logger = logging.getLogger(__name__)


def homomorphism_gap(pi, operator):
    """N∘π_N − π(N·, N·, N·)"""
    return compose(operator, deformed_structure_explicit(pi, operator)) - insertion_sum(pi, operator, 3)


@compatible_pair_required
def compatible_nijenhuis_check(pair, operator, samples=None):
    """N is Nijenhuis for both brackets; the pencil form is checked on the grid"""
    if samples is None:
        samples = settings.TRILIE_PENCIL_GRID
    torsion1 = nijenhuis_torsion(pair.bracket1, operator)
    torsion2 = nijenhuis_torsion(pair.bracket2, operator)
    nijenhuis = torsion1.is_zero() and torsion2.is_zero()
    gap1 = homomorphism_gap(pair.pi1, operator)
    gap2 = homomorphism_gap(pair.pi2, operator)
    grid = []
    for k1, k2 in samples:
        k1, k2 = Fraction(k1), Fraction(k2)
        pencil = pair.pencil(k1, k2)
        if homomorphism_gap(pencil.structure, operator) != gap1.scale(k1) + gap2.scale(k2):
            raise PathDisagreement('compatible Nijenhuis operator', f'pencil expansion fails at ({k1}, {k2})')
        grid.append({'k1': k1, 'k2': k2, 'nijenhuis': nijenhuis_torsion(pencil, operator).is_zero()})
    if nijenhuis and not all(point['nijenhuis'] for point in grid):
        raise PathDisagreement('compatible Nijenhuis operator', 'Nijenhuis for both brackets but not for the pencil')
    return Verdict(
        nijenhuis,
        details={
            'bracket1_nijenhuis': torsion1.is_zero(),
            'bracket2_nijenhuis': torsion2.is_zero(),
            'pencil': grid,
            'pencil_nijenhuis': all(point['nijenhuis'] for point in grid),
        },
    )


@compatible_pair_required
@nijenhuis_required
def deformed_compatible_pair(pair, operator):
    """(g, [·,·,·]_N, {·,·,·}_N), validated and with N checked as a homomorphism to the pair"""
    deformed = CompatiblePair(pair.dim, deformed_bracket(pair.bracket1, operator), deformed_bracket(pair.bracket2, operator))
    if not validate_compatible(deformed):
        raise PathDisagreement('deformed compatible pair', 'the deformed brackets are not compatible')
    if not is_pair_homomorphism(operator, deformed, pair):
        raise PathDisagreement('deformed compatible pair', 'N is not a homomorphism to the original pair')
    return deformed


@compatible_pair_required
@nijenhuis_required
def trivial_deformation_from_nijenhuis(pair, operator):
    """ωᵢ = [πᵢ, N] and ω̃ᵢ = (πᵢ)_N, a trivial 2-order deformation"""
    n = endomorphism_cochain(operator)
    data = DeformationData(
        nr_bracket(pair.pi1, n).admissible(),
        nr_bracket(pair.pi2, n).admissible(),
        deformed_structure_explicit(pair.pi1, operator).admissible(),
        deformed_structure_explicit(pair.pi2, operator).admissible(),
    )
    if not order2_check(pair, data):
        raise PathDisagreement('trivial deformation', 'Nijenhuis data fails the order-2 equations')
    if not triviality_check(pair, data, operator):
        raise PathDisagreement('trivial deformation', 'Nijenhuis data fails the triviality equations')
    return data


def nijenhuis_deformation_pair(algebra, operator):
    """(g, π, π_N) as a compatible pair, when [π, N] is itself a 3-Lie structure"""
    if not nijenhuis_pair_compatibility(algebra, operator):
        raise PreconditionFailed('[π, N] is not a 3-Lie structure, so (π, π_N) is not compatible')
    pair = CompatiblePair(algebra.dim, algebra, deformed_bracket(algebra, operator))
    if not validate_compatible(pair):
        raise PathDisagreement('Nijenhuis deformation pair', 'the compatibility verdicts differ')
    return pair

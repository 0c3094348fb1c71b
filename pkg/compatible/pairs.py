from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from django.conf import settings

from core.decorators import compatible_pair_required
from core.exceptions import DimensionMismatch, PathDisagreement
from core.multilinear import nr_bracket
from core.utils import seeded_rng
from core.verdicts import Verdict, Violation
from threelie.algebras import ThreeLieAlgebra, fi_sides, fi_tuples, is_homomorphism, validate_fi


@dataclass(frozen=True, eq=False)
class CompatiblePair:
    """Two brackets [·,·,·] and {·,·,·} on one d-dimensional space"""

    dim: int
    bracket1: ThreeLieAlgebra
    bracket2: ThreeLieAlgebra

    def __post_init__(self):
        if not self.bracket1.dim == self.bracket2.dim == self.dim:
            raise DimensionMismatch('both brackets must live on the pair dimension')

    @classmethod
    def from_structures(cls, pi1, pi2):
        return cls(pi1.ambient_dim, ThreeLieAlgebra(pi1.ambient_dim, pi1), ThreeLieAlgebra(pi2.ambient_dim, pi2))

    @classmethod
    def abelian(cls, dim):
        return cls(dim, ThreeLieAlgebra.abelian(dim), ThreeLieAlgebra.abelian(dim))

    @property
    def pi1(self):
        return self.bracket1.structure

    @property
    def pi2(self):
        return self.bracket2.structure

    @property
    def brackets(self):
        return self.bracket1, self.bracket2

    def pencil(self, k1, k2):
        """The bracket k1·[·,·,·] + k2·{·,·,·}"""
        return self.bracket1.scale(k1) + self.bracket2.scale(k2)

    @cached_property
    def is_compatible(self):
        return validate_compatible(self).ok

    def __eq__(self, other):
        if not isinstance(other, CompatiblePair):
            return NotImplemented
        return self.dim == other.dim and self.bracket1 == other.bracket1 and self.bracket2 == other.bracket2

    __hash__ = None


def _relabel(violations, label):
    return [replace(v, label=label) for v in violations]


def compatibility_violations(pair):
    """Violations of [x1,x2,{x3,x4,x5}] + {x1,x2,[x3,x4,x5]} = the six mixed terms"""
    violations = []
    for args in fi_tuples(pair.dim):
        lhs12, rhs12 = fi_sides(pair.pi1, pair.pi2, args)
        lhs21, rhs21 = fi_sides(pair.pi2, pair.pi1, args)
        lhs = tuple(a + b for a, b in zip(lhs12, lhs21))
        rhs = tuple(a + b for a, b in zip(rhs12, rhs21))
        if lhs != rhs:
            violations.append(Violation('compatibility', args, lhs, rhs))
    return violations


def validate_compatible(pair):
    """Fundamental Identity for both brackets plus compatibility, the latter checked two ways"""
    fi1 = validate_fi(pair.bracket1)
    fi2 = validate_fi(pair.bracket2)
    mixed = compatibility_violations(pair)
    by_bracket = nr_bracket(pair.pi1, pair.pi2).is_zero()
    if by_bracket != (not mixed):
        raise PathDisagreement('compatibility', 'mixed identity and [π1, π2] = 0 differ')
    violations = (
        _relabel(fi1.violations, 'fundamental identity (bracket1)')
        + _relabel(fi2.violations, 'fundamental identity (bracket2)')
        + mixed
    )
    return Verdict.from_violations(
        violations,
        bracket1_fi=fi1.ok,
        bracket2_fi=fi2.ok,
        compatibility=not mixed,
    )


def random_grid(seed, size=9, spread=5):
    rng = seeded_rng(seed)
    grid = []
    while len(grid) < size:
        point = (rng.randint(-spread, spread), rng.randint(-spread, spread))
        if point != (0, 0) and point not in grid:
            grid.append(point)
    return grid


def pencil_check(pair, samples=None, grid='fixed', seed=None):
    """Fundamental Identity of k1·π1 + k2·π2 at each sample.

    The identity's failure for the pencil is a homogeneous quadratic in
    (k1, k2), so it vanishes identically once it vanishes at three pairwise
    non-proportional points; the fixed grid contains such a triple.
    """
    if samples is None:
        if grid == 'random':
            samples = random_grid(settings.TRILIE_DEFAULT_SEED if seed is None else seed)
        else:
            samples = settings.TRILIE_PENCIL_GRID
    results = []
    violations = []
    for k1, k2 in samples:
        verdict = validate_fi(pair.pencil(Fraction(k1), Fraction(k2)))
        results.append({'k1': Fraction(k1), 'k2': Fraction(k2), 'fundamental_identity': verdict.ok})
        violations.extend(_relabel(verdict.violations[:1], f'pencil ({k1}, {k2})'))
    return Verdict(all(r['fundamental_identity'] for r in results), violations, {'samples': results})


class MaurerCartanVerdict(NamedTuple):
    first: bool
    mixed: bool
    second: bool

    @property
    def ok(self):
        return self.first and self.mixed and self.second


def compatible_mc_check(pi1, pi2):
    """[π1,π1] = 0, [π1,π2] = 0 and [π2,π2] = 0, reported separately"""
    return MaurerCartanVerdict(
        nr_bracket(pi1, pi1).is_zero(),
        nr_bracket(pi1, pi2).is_zero(),
        nr_bracket(pi2, pi2).is_zero(),
    )


def _first_violation(label, cochain):
    if cochain.is_zero():
        return None
    (slots, final), value = min(cochain.values.items())
    args = tuple(i for pair in slots for i in pair) + (final,)
    return Violation(label, args, value, (Fraction(0),) * cochain.target_dim)


def equation_verdict(equations, **details):
    """Verdict over named cochain equations of the form ``expression = 0``"""
    violations = []
    outcome = {}
    for label, expression in equations:
        violation = _first_violation(label, expression)
        outcome[label] = violation is None
        if violation is not None:
            violations.append(violation)
    return Verdict.from_violations(violations, equations=outcome, **details)


@compatible_pair_required
def deformation_mc_check(base, tilde1, tilde2):
    """Whether (π1 + π̃1, π2 + π̃2) is again compatible, via the three Maurer-Cartan type equations"""
    half = Fraction(1, 2)
    verdict = equation_verdict([
        ('d_pi1 tilde1 + 1/2 [tilde1, tilde1] = 0',
         nr_bracket(base.pi1, tilde1) + nr_bracket(tilde1, tilde1).scale(half)),
        ('d_pi2 tilde2 + 1/2 [tilde2, tilde2] = 0',
         nr_bracket(base.pi2, tilde2) + nr_bracket(tilde2, tilde2).scale(half)),
        ('d_pi1 tilde2 + d_pi2 tilde1 + [tilde1, tilde2] = 0',
         nr_bracket(base.pi1, tilde2) + nr_bracket(base.pi2, tilde1) + nr_bracket(tilde1, tilde2)),
    ])
    summed = CompatiblePair.from_structures((base.pi1 + tilde1).admissible(), (base.pi2 + tilde2).admissible())
    if validate_compatible(summed).ok != verdict.ok:
        raise PathDisagreement('deformation Maurer-Cartan equations', 'equations and direct validation differ')
    return verdict


def is_pair_homomorphism(f, source, target):
    """f is a homomorphism for both brackets"""
    return is_homomorphism(f, source.bracket1, target.bracket1) and is_homomorphism(f, source.bracket2, target.bracket2)

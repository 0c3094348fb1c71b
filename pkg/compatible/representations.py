from dataclasses import dataclass
from itertools import product

from core.decorators import compatible_pair_required
from core.exceptions import DimensionMismatch, PathDisagreement
from core.multilinear import nr_bracket
from core.verdicts import Verdict, Violation
from threelie.representations import (
    Representation, adjoint_representation, basis_vector, dual_representation, flatten_matrix,
    representation_violations, semidirect, semidirect_structure,
)

from .pairs import CompatiblePair, validate_compatible


@dataclass(frozen=True, eq=False)
class CompatibleRepresentation:
    """ρ represents [·,·,·] and μ represents {·,·,·} on the same module"""

    rho: Representation
    mu: Representation

    def __post_init__(self):
        if (self.rho.base_dim, self.rho.module_dim) != (self.mu.base_dim, self.mu.module_dim):
            raise DimensionMismatch('ρ and μ must act on the same module over the same algebra')

    @property
    def base_dim(self):
        return self.rho.base_dim

    @property
    def module_dim(self):
        return self.rho.module_dim

    @classmethod
    def zero(cls, base_dim, module_dim):
        return cls(Representation.zero(base_dim, module_dim), Representation.zero(base_dim, module_dim))

    def __eq__(self, other):
        if not isinstance(other, CompatibleRepresentation):
            return NotImplemented
        return self.rho == other.rho and self.mu == other.mu

    __hash__ = None


def mixed_violations(pair, rep):
    d = pair.dim
    rho, mu = rep.rho, rep.mu
    b1, b2 = pair.bracket1, pair.bracket2
    e = lambda i: basis_vector(d, i)
    violations = []
    for x1, x2, x3, x4 in product(range(d), repeat=4):
        r12, r34, m12, m34 = rho.action(x1, x2), rho.action(x3, x4), mu.action(x1, x2), mu.action(x3, x4)
        moved = (
            rho.action_vectors(b2.bracket(x1, x2, x3), e(x4))
            + mu.action_vectors(b1.bracket(x1, x2, x3), e(x4))
        )
        lhs = moved + rho.action_vectors(e(x3), b2.bracket(x1, x2, x4)) + mu.action_vectors(e(x3), b1.bracket(x1, x2, x4))
        rhs = (r12 @ m34 - m34 @ r12) - (r34 @ m12 - m12 @ r34)
        if lhs != rhs:
            violations.append(Violation('mixed commutator identity', (x1, x2, x3, x4), flatten_matrix(lhs), flatten_matrix(rhs)))
        lhs = moved - rho.action(x3, x1) @ mu.action(x2, x4) - mu.action(x3, x1) @ rho.action(x2, x4)
        rhs = (
            r12 @ m34 + m12 @ r34
            + rho.action(x2, x3) @ mu.action(x1, x4) + mu.action(x2, x3) @ rho.action(x1, x4)
        )
        if lhs != rhs:
            violations.append(Violation('mixed bracket identity', (x1, x2, x3, x4), flatten_matrix(lhs), flatten_matrix(rhs)))
    return violations


def semidirect_compatible(pair, rep):
    """g ⋉ V with both brackets extended by ρ and μ respectively"""
    if rep.base_dim != pair.dim:
        raise DimensionMismatch(f'representation over dimension {rep.base_dim} for a pair of dimension {pair.dim}')
    return CompatiblePair(pair.dim + rep.module_dim, semidirect(pair.bracket1, rep.rho), semidirect(pair.bracket2, rep.mu))


def semidirect_mc_check(pair, rep):
    """[π̂1+ρ̂, π̂1+ρ̂] = 0, [π̂1+ρ̂, π̂2+μ̂] = 0, [π̂2+μ̂, π̂2+μ̂] = 0"""
    first = semidirect_structure(pair.bracket1, rep.rho)
    second = semidirect_structure(pair.bracket2, rep.mu)
    return (
        nr_bracket(first, first).is_zero(),
        nr_bracket(first, second).is_zero(),
        nr_bracket(second, second).is_zero(),
    )


@compatible_pair_required
def validate_compatible_representation(pair, rep):
    if rep.base_dim != pair.dim:
        raise DimensionMismatch(f'representation over dimension {rep.base_dim} for a pair of dimension {pair.dim}')
    violations = (
        representation_violations(pair.bracket1, rep.rho, 'rho ')
        + representation_violations(pair.bracket2, rep.mu, 'mu ')
        + mixed_violations(pair, rep)
    )
    verdict = Verdict.from_violations(violations)
    if validate_compatible(semidirect_compatible(pair, rep)).ok != verdict.ok:
        raise PathDisagreement('compatible representation', 'axioms and the semidirect product disagree')
    return verdict


def adjoint_pair(pair):
    """(ad, AD) with ad(x,y)z = [x,y,z] and AD(x,y)z = {x,y,z}"""
    return CompatibleRepresentation(adjoint_representation(pair.bracket1), adjoint_representation(pair.bracket2))


def dual_compatible_representation(rep):
    return CompatibleRepresentation(dual_representation(rep.rho), dual_representation(rep.mu))

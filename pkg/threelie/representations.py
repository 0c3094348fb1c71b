from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from core.exceptions import DimensionMismatch
from core.linalg import Matrix
from core.multilinear import Splitting, lift, lift_action
from core.utils import canonical_pair
from core.verdicts import Verdict, Violation

from .algebras import ThreeLieAlgebra


@dataclass(frozen=True, eq=False)
class Representation:
    """Skew map ρ: ∧²g → End(V), stored on canonical pairs only"""

    base_dim: int
    module_dim: int
    rho: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for (a, b), matrix in self.rho.items():
            sign, pair = canonical_pair(a, b)
            if not sign or not 0 <= pair[0] < pair[1] < self.base_dim:
                raise DimensionMismatch(f'pair {(a, b)} is not a valid wedge pair in dimension {self.base_dim}')
            if matrix.shape != (self.module_dim, self.module_dim):
                raise DimensionMismatch(f'ρ{pair} has shape {matrix.shape}, expected a square of size {self.module_dim}')
            if pair in cleaned:
                raise DimensionMismatch(f'duplicate entry for pair {pair}')
            matrix = matrix if sign == 1 else -matrix
            if not matrix.is_zero():
                cleaned[pair] = matrix
        object.__setattr__(self, 'rho', cleaned)

    @classmethod
    def zero(cls, base_dim, module_dim):
        return cls(base_dim, module_dim, {})

    def action(self, a, b):
        """ρ(e_a, e_b) for any ordered pair of basis indices"""
        sign, pair = canonical_pair(a, b)
        matrix = self.rho.get(pair) if sign else None
        if matrix is None:
            return Matrix.zeros(self.module_dim, self.module_dim)
        return matrix if sign == 1 else -matrix

    def action_vectors(self, x, y):
        """ρ(x, y) for coordinate vectors x, y in g"""
        total = Matrix.zeros(self.module_dim, self.module_dim)
        for (a, b), matrix in self.rho.items():
            coeff = x[a] * y[b] - x[b] * y[a]
            if coeff:
                total = total + matrix.scale(coeff)
        return total

    def scale(self, c):
        return Representation(self.base_dim, self.module_dim, {p: m.scale(c) for p, m in self.rho.items()})

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.base_dim, self.module_dim, self.rho) == (other.base_dim, other.module_dim, other.rho)

    __hash__ = None


def basis_vector(dim, i):
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))


def flatten_matrix(matrix):
    return tuple(x for row in matrix.rows for x in row)


def representation_violations(algebra, rep, label_prefix=''):
    """Violations of the two representation identities over all basis 4-tuples:

    ρ(x1,x2)ρ(x3,x4) = ρ([x1,x2,x3],x4) + ρ(x3,[x1,x2,x4]) + ρ(x3,x4)ρ(x1,x2)
    ρ(x1,[x2,x3,x4]) = ρ(x3,x4)ρ(x1,x2) − ρ(x2,x4)ρ(x1,x3) + ρ(x2,x3)ρ(x1,x4)
    """
    d = algebra.dim
    violations = []
    e = lambda i: basis_vector(d, i)
    for x1, x2, x3, x4 in product(range(d), repeat=4):
        lhs = rep.action(x1, x2) @ rep.action(x3, x4)
        rhs = (
            rep.action_vectors(algebra.bracket(x1, x2, x3), e(x4))
            + rep.action_vectors(e(x3), algebra.bracket(x1, x2, x4))
            + rep.action(x3, x4) @ rep.action(x1, x2)
        )
        if lhs != rhs:
            violations.append(Violation(f'{label_prefix}commutator identity', (x1, x2, x3, x4), flatten_matrix(lhs), flatten_matrix(rhs)))
        lhs = rep.action_vectors(e(x1), algebra.bracket(x2, x3, x4))
        rhs = (
            rep.action(x3, x4) @ rep.action(x1, x2)
            - rep.action(x2, x4) @ rep.action(x1, x3)
            + rep.action(x2, x3) @ rep.action(x1, x4)
        )
        if lhs != rhs:
            violations.append(Violation(f'{label_prefix}bracket identity', (x1, x2, x3, x4), flatten_matrix(lhs), flatten_matrix(rhs)))
    return violations


def validate_representation(algebra, rep):
    if rep.base_dim != algebra.dim:
        raise DimensionMismatch(f'representation of dimension {rep.base_dim} for an algebra of dimension {algebra.dim}')
    return Verdict.from_violations(representation_violations(algebra, rep))


def adjoint_representation(algebra):
    """ad(x, y) z = [x, y, z] on V = g"""
    d = algebra.dim
    rho = {}
    for a in range(d):
        for b in range(a + 1, d):
            rho[(a, b)] = Matrix.from_columns([algebra.bracket(a, b, c) for c in range(d)], d)
    return Representation(d, d, rho)


def dual_representation(rep):
    """ρ*(x, y) = −ρ(x, y)ᵀ on V*"""
    return Representation(rep.base_dim, rep.module_dim, {p: -m.transpose() for p, m in rep.rho.items()})


def semidirect_structure(algebra, rep):
    """π̂ + ρ̂ on g ⊕ V"""
    split = Splitting(algebra.dim, rep.module_dim)
    return lift(algebra.structure, split, 'g') + lift_action(rep.action, split)


def semidirect(algebra, rep):
    """g ⋉ V with [x1+v1, x2+v2, x3+v3] = [x1,x2,x3] + ρ(x1,x2)v3 + ρ(x2,x3)v1 + ρ(x3,x1)v2"""
    if rep.base_dim != algebra.dim:
        raise DimensionMismatch(f'representation of dimension {rep.base_dim} for an algebra of dimension {algebra.dim}')
    return ThreeLieAlgebra(algebra.dim + rep.module_dim, semidirect_structure(algebra, rep).admissible())

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
import logging

from core.exceptions import DimensionMismatch
from core.linalg import Matrix, kernel_basis
from core.multilinear import Cochain, compose, nr_bracket, substitute
from core.utils import canonical_pairs, canonical_triples, sort_with_sign
from core.verdicts import Verdict, Violation


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ThreeLieAlgebra:
    """Skew trilinear bracket on a d-dimensional space, stored as a weight-1 cochain"""

    dim: int
    structure: Cochain

    def __post_init__(self):
        s = self.structure
        if (s.weight, s.ambient_dim, s.target_dim) != (1, self.dim, self.dim):
            raise DimensionMismatch(f'a bracket on dimension {self.dim} needs a weight-1 self-coefficient cochain')
        if not isinstance(s, Cochain):
            object.__setattr__(self, 'structure', s.admissible())

    @classmethod
    def from_brackets(cls, dim, brackets):
        """Build from {(a, b, c): value vector} with 0-based indices in any order"""
        entries = {}
        for triple, vector in brackets.items():
            if any(not 0 <= i < dim for i in triple):
                raise DimensionMismatch(f'triple {triple} out of range for dimension {dim}')
            sign, ordered = sort_with_sign(triple)
            if not sign:
                continue
            key = ((), ordered)
            if key in entries:
                raise DimensionMismatch(f'duplicate bracket entry for {ordered}')
            entries[key] = tuple(sign * Fraction(x) for x in vector)
        return cls(dim, Cochain.from_admissible(1, dim, dim, entries))

    @classmethod
    def abelian(cls, dim):
        return cls(dim, Cochain.zero(1, dim, dim))

    def bracket(self, a, b, c):
        """[e_a, e_b, e_c] for 0-based basis indices"""
        return self.structure.eval([a, b, c])

    def bracket_vectors(self, x, y, z):
        value = self.structure.evaluate([tuple(x), tuple(y), tuple(z)])
        return tuple(value) if value is not None else (Fraction(0),) * self.dim

    def nonzero_brackets(self):
        """{(a, b, c): value} over canonical triples with a nonzero bracket"""
        out = {}
        for triple in canonical_triples(self.dim):
            value = self.bracket(*triple)
            if any(value):
                out[triple] = value
        return out

    def scale(self, c):
        return ThreeLieAlgebra(self.dim, self.structure.scale(c))

    def __add__(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch(f'cannot add brackets on dimensions {self.dim} and {other.dim}')
        return ThreeLieAlgebra(self.dim, self.structure + other.structure)

    def __eq__(self, other):
        if not isinstance(other, ThreeLieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.structure == other.structure

    __hash__ = None

    @cached_property
    def satisfies_fi(self):
        return validate_fi(self).ok


def fi_sides(outer, inner, args):
    """Both sides of the Fundamental Identity with ``outer`` applied around ``inner``.

    Left: outer(x1, x2, inner(x3, x4, x5)).
    Right: outer(inner(x1,x2,x3), x4, x5) + outer(x3, inner(x1,x2,x4), x5) + outer(x3, x4, inner(x1,x2,x5)).
    """
    x1, x2, x3, x4, x5 = args
    lhs = outer.evaluate([x1, x2, inner.eval([x3, x4, x5])])
    rhs = None
    for value in (
        outer.evaluate([inner.eval([x1, x2, x3]), x4, x5]),
        outer.evaluate([x3, inner.eval([x1, x2, x4]), x5]),
        outer.evaluate([x3, x4, inner.eval([x1, x2, x5])]),
    ):
        if value is not None:
            rhs = list(value) if rhs is None else [r + v for r, v in zip(rhs, value)]
    zero = (Fraction(0),) * outer.target_dim
    return tuple(lhs) if lhs is not None else zero, tuple(rhs) if rhs is not None else zero


def fi_tuples(dim):
    """Basis 5-tuples with x1 < x2 and x3 < x4 < x5; both sides are skew in these groups"""
    return [pair + triple for pair in canonical_pairs(dim) for triple in canonical_triples(dim)]


def validate_fi(algebra):
    """Check the Fundamental Identity on every basis tuple in the reduced scope"""
    violations = []
    pi = algebra.structure
    for args in fi_tuples(algebra.dim):
        lhs, rhs = fi_sides(pi, pi, args)
        if lhs != rhs:
            violations.append(Violation('fundamental identity', args, lhs, rhs))
    return Verdict.from_violations(violations)


def validate_fi_via_mc(algebra):
    """The Fundamental Identity as the Maurer-Cartan equation [π, π] = 0"""
    return nr_bracket(algebra.structure, algebra.structure).is_zero()


def derivation_equations(algebras):
    """Rows of the linear system D[x,y,z] = [Dx,y,z] + [x,Dy,z] + [x,y,Dz] for every bracket.

    The unknown is D flattened row-major: entry (i, j) is component i of D e_j.
    """
    dim = algebras[0].dim
    rows = []
    for algebra in algebras:
        for x, y, z in canonical_triples(dim):
            value = algebra.bracket(x, y, z)
            moved = [
                [algebra.bracket(s, y, z) for s in range(dim)],
                [algebra.bracket(x, s, z) for s in range(dim)],
                [algebra.bracket(x, y, s) for s in range(dim)],
            ]
            for r in range(dim):
                row = [Fraction(0)] * (dim * dim)
                for s in range(dim):
                    row[r * dim + s] += value[s]
                for slot, moved_from in zip(moved, (x, y, z)):
                    for s in range(dim):
                        row[s * dim + moved_from] -= slot[s][r]
                rows.append(row)
    return Matrix.from_rows(rows, dim * dim)


def matrix_from_flat(vector, nrows, ncols):
    return Matrix.from_rows([vector[i * ncols:(i + 1) * ncols] for i in range(nrows)], ncols)


def derivation_space(algebra):
    """Basis of the derivations of the algebra, as d×d matrices"""
    dim = algebra.dim
    system = derivation_equations([algebra])
    return [matrix_from_flat(v, dim, dim) for v in kernel_basis(system)]


def is_homomorphism(f, source, target):
    """f[x,y,z]_source = [fx, fy, fz]_target on all basis triples"""
    if f.shape != (target.dim, source.dim):
        raise DimensionMismatch(f'a {f.shape} matrix cannot map dimension {source.dim} to {target.dim}')
    for x, y, z in canonical_triples(source.dim):
        lhs = f.apply(source.bracket(x, y, z))
        rhs = target.bracket_vectors(f.column(x), f.column(y), f.column(z))
        if lhs != rhs:
            return False
    return True


def homomorphism_defect(f, source, target):
    """f∘π_source − π_target(f·, f·, f·) for a square f, as a cochain"""
    return compose(f, source.structure) - substitute(target.structure, [f, f, f])

"""Abelian extensions 0 → V → g ⊕ V → g → 0 of a compatible pair.

Extensions are kept in normal form on g ⊕ V: basis indices below d belong
to g and the remaining m to V. Each transferred bracket is

    [x+u, y+v, z+w] = [x,y,z] + ρ(x,y)w + ρ(y,z)u + ρ(z,x)v + ω(x,y,z)

and likewise for the second bracket with μ and the second cocycle.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import logging

from core.exceptions import DimensionMismatch, PathDisagreement, PreconditionFailed
from core.linalg import Matrix, block_matrix, infeasibility_certificate, solve_affine
from core.multilinear import Cochain, Splitting, admissible_coordinates, lift, lift_action, linear_map_cochain
from core.verdicts import Verdict
from compatible.bicomplex import BicochainTuple, bicomplex_delta
from compatible.pairs import CompatiblePair, equation_verdict, is_pair_homomorphism, validate_compatible
from compatible.representations import CompatibleRepresentation, validate_compatible_representation
from threelie.algebras import ThreeLieAlgebra
from threelie.cohomology import coboundary, coboundary_matrix
from threelie.representations import Representation


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AbelianExtension:
    base: CompatiblePair
    rep: CompatibleRepresentation
    omega1: Cochain
    omega2: Cochain
    total: CompatiblePair

    @property
    def module_dim(self):
        return self.rep.module_dim

    @property
    def split(self):
        return Splitting(self.base.dim, self.module_dim)


@dataclass(frozen=True)
class ExtensionResult:
    extension: AbelianExtension
    verdict: Verdict

    @property
    def ok(self):
        return self.verdict.ok


def transferred_bracket(bracket, action, omega, split):
    structure = lift(bracket.structure, split, 'g') + lift_action(action.action, split) + lift(omega, split, 'v')
    return ThreeLieAlgebra(split.total, structure.admissible())


def _check_cocycle_shape(base, rep, omega):
    if (omega.weight, omega.ambient_dim, omega.target_dim) != (1, base.dim, rep.module_dim):
        raise DimensionMismatch('extension cocycles are weight-1 cochains from g to V')


def build_extension(base, rep, omega1, omega2):
    """Transferred brackets on g ⊕ V, validated against the coefficient 2-cocycle condition"""
    if not validate_compatible_representation(base, rep):
        raise PreconditionFailed('the coefficients are not a compatible representation')
    for omega in (omega1, omega2):
        _check_cocycle_shape(base, rep, omega)
    split = Splitting(base.dim, rep.module_dim)
    total = CompatiblePair(
        split.total,
        transferred_bracket(base.bracket1, rep.rho, omega1, split),
        transferred_bracket(base.bracket2, rep.mu, omega2, split),
    )
    delta = bicomplex_delta(base, rep, BicochainTuple(2, (omega1, omega2)))
    verdict = equation_verdict(list(zip(
        ('d(pi1+rho) omega1 = 0', 'd(pi2+mu) omega1 + d(pi1+rho) omega2 = 0', 'd(pi2+mu) omega2 = 0'),
        delta.components,
    )))
    if validate_compatible(total).ok != verdict.ok:
        raise PathDisagreement('abelian extension', 'cocycle condition and validation of the total pair differ')
    if not verdict.ok:
        return ExtensionResult(None, verdict)
    return ExtensionResult(AbelianExtension(base, rep, omega1, omega2, total), verdict)


@dataclass(frozen=True)
class Section:
    """Linear map σ: g → g ⊕ V with 𝔭∘σ = Id, as a (d+m)×d matrix"""

    matrix: Matrix
    base_dim: int

    def __post_init__(self):
        d = self.base_dim
        if self.matrix.ncols != d or self.matrix.nrows < d:
            raise DimensionMismatch(f'a section of dimension {d} needs a (d+m)×{d} matrix')
        for i in range(d):
            for j in range(d):
                if self.matrix[i, j] != (1 if i == j else 0):
                    raise DimensionMismatch('the g-block of a section must be the identity')

    @classmethod
    def canonical(cls, base_dim, module_dim):
        return cls.from_tau(Matrix.zeros(module_dim, base_dim))

    @classmethod
    def from_tau(cls, tau):
        """σ(x) = (x, τx)"""
        d = tau.ncols
        return cls(Matrix.from_rows(Matrix.identity(d).rows + tau.rows, d), d)

    @property
    def tau(self):
        return Matrix(self.matrix.rows[self.base_dim:], self.base_dim)

    def image(self, j):
        return self.matrix.column(j)


def _check_abelian(ext):
    """Brackets with two arguments from V vanish and V is an ideal"""
    d, total_dim = ext.base.dim, ext.total.dim
    for bracket in ext.total.brackets:
        for triple in combinations(range(total_dim), 3):
            in_v = sum(1 for i in triple if i >= d)
            value = bracket.bracket(*triple)
            if in_v >= 2 and any(value):
                raise PreconditionFailed(f'abelian condition violated at {triple}')
            if in_v == 1 and any(value[:d]):
                raise PreconditionFailed(f'V is not an ideal: bracket at {triple} leaves V')


def induced_representation(ext, sigma):
    """ρ(x,y)u = [σx, σy, u] and μ(x,y)u = {σx, σy, u}, read off the total brackets"""
    _check_abelian(ext)
    d, m = ext.base.dim, ext.module_dim
    unit = lambda i: tuple(Fraction(1) if k == i else Fraction(0) for k in range(d + m))
    maps = []
    for bracket in ext.total.brackets:
        rho = {}
        for a, b in combinations(range(d), 2):
            columns = [bracket.bracket_vectors(sigma.image(a), sigma.image(b), unit(d + u))[d:] for u in range(m)]
            rho[(a, b)] = Matrix.from_columns(columns, m)
        maps.append(rho)
    rep = CompatibleRepresentation(Representation(d, m, maps[0]), Representation(d, m, maps[1]))
    if not validate_compatible_representation(ext.base, rep):
        raise PathDisagreement('induced representation', 'the induced maps are not a compatible representation')
    return rep


def extract_cocycle(ext, sigma):
    """ωᵢ(x,y,z) = bracketᵢ(σx,σy,σz) − σ(baseᵢ(x,y,z)), with baseᵢ = 𝔭∘bracketᵢ on σ(g)"""
    _check_abelian(ext)
    d, m = ext.base.dim, ext.module_dim
    omegas = []
    for bracket in ext.total.brackets:
        entries = {}
        for triple in combinations(range(d), 3):
            lifted = bracket.bracket_vectors(*(sigma.image(i) for i in triple))
            value = tuple(x - y for x, y in zip(lifted, sigma.matrix.apply(lifted[:d])))
            if any(value[:d]):
                raise PathDisagreement('cocycle extraction', 'the extracted value has a g-component')
            if any(value[d:]):
                entries[((), triple)] = value[d:]
        omegas.append(Cochain.from_admissible(1, d, m, entries))
    delta = bicomplex_delta(ext.base, induced_representation(ext, sigma), BicochainTuple(2, tuple(omegas)))
    if not all(component.is_zero() for component in delta.components):
        raise PathDisagreement('cocycle extraction', 'the extracted cochains are not a 2-cocycle')
    return tuple(omegas)


def section_shift(ext, tau):
    """δ¹τ = (d_{π1+ρ}τ, d_{π2+μ}τ) for τ: g → V"""
    t = linear_map_cochain(tau)
    return (
        coboundary(ext.base.bracket1, ext.rep.rho, t, 1),
        coboundary(ext.base.bracket2, ext.rep.mu, t, 1),
    )


def cocycle_class_equal(ext, sigma1, sigma2):
    """The cocycles extracted with two sections differ by δ¹ of the sections' difference"""
    first, second = extract_cocycle(ext, sigma1), extract_cocycle(ext, sigma2)
    shift = section_shift(ext, sigma2.tau - sigma1.tau)
    return second[0] - first[0] == shift[0] and second[1] - first[1] == shift[1]


@dataclass(frozen=True)
class ClassificationResult:
    isomorphic: bool
    tau: Matrix = None
    theta: Matrix = None
    certificate: tuple = None


def classify(ext1, ext2):
    """Decide whether two extensions with the same base and representation are isomorphic"""
    if ext1.base != ext2.base or ext1.rep != ext2.rep:
        raise PreconditionFailed('classification needs extensions of the same pair by the same representation')
    d, m = ext1.base.dim, ext1.module_dim
    d1 = coboundary_matrix(ext1.base.bracket1, ext1.rep.rho, 1)
    d2 = coboundary_matrix(ext1.base.bracket2, ext1.rep.mu, 1)
    system = block_matrix({(0, 0): d1, (1, 0): d2}, [d1.nrows, d2.nrows], [d1.ncols])
    target = (
        admissible_coordinates(ext1.omega1 - ext2.omega1)
        + admissible_coordinates(ext1.omega2 - ext2.omega2)
    )
    solution = solve_affine(system, target)
    if solution is None:
        return ClassificationResult(False, certificate=infeasibility_certificate(system, target))
    x = solution.particular
    tau = Matrix.from_rows([[x[j * m + r] for j in range(d)] for r in range(m)], d)
    theta = block_matrix(
        {(0, 0): Matrix.identity(d), (1, 0): tau, (1, 1): Matrix.identity(m)},
        [d, m], [d, m],
    )
    if not is_pair_homomorphism(theta, ext1.total, ext2.total):
        raise PathDisagreement('extension classification', 'θ is not a homomorphism of the total pairs')
    commutes = all(theta[i, j] == (1 if i == j else 0) for i in range(d) for j in range(d + m))
    fixes_v = all(theta[i, j] == (1 if i == j else 0) for i in range(d + m) for j in range(d, d + m))
    if not (commutes and fixes_v):
        raise PathDisagreement('extension classification', 'θ does not commute with the extension diagram')
    logger.debug('Extensions are isomorphic via tau=%s', tau.rows)
    return ClassificationResult(True, tau=tau, theta=theta)

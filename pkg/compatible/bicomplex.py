"""The bicomplex of a compatible pair.

An n-cochain of the pair is an n-tuple of n-cochains of the single
brackets. Its differential is the zigzag

    δⁿ(ω1, …, ωn) = (d1 ω1, d2 ω1 + d1 ω2, …, d2 ω_{n−1} + d1 ωn, d2 ωn)

where d1, d2 are the coboundaries of the two brackets (both carrying the
sign (−1)^{n−1}). Without coefficients dᵢ ω = (−1)^{n−1}[πᵢ, ω].
"""
from dataclasses import dataclass

from core.decorators import compatible_pair_required, degree_bound_required
from core.exceptions import DimensionMismatch, PreconditionFailed
from core.linalg import block_matrix, kernel_basis
from core.multilinear import Cochain, nr_bracket
from threelie.algebras import derivation_equations, matrix_from_flat
from threelie.cohomology import build_report, coboundary, coboundary_matrix

from .representations import adjoint_pair, validate_compatible_representation


@dataclass(frozen=True)
class BicochainTuple:
    ce_degree: int
    components: tuple

    def __post_init__(self):
        components = tuple(self.components)
        object.__setattr__(self, 'components', components)
        if len(components) != self.ce_degree:
            raise DimensionMismatch(f'a CE-degree {self.ce_degree} bicochain has {self.ce_degree} components')
        first = components[0]
        for c in components:
            if c.weight != self.ce_degree - 1:
                raise DimensionMismatch(f'components of CE-degree {self.ce_degree} have weight {self.ce_degree - 1}')
            if not c.same_space(first):
                raise DimensionMismatch('bicochain components live on different spaces')

    def is_zero(self):
        return all(c.is_zero() for c in self.components)


def _differentials(pair, coeffs, n):
    if coeffs is None:
        sign = 1 if (n - 1) % 2 == 0 else -1
        return (
            lambda w: nr_bracket(pair.pi1, w).scale(sign),
            lambda w: nr_bracket(pair.pi2, w).scale(sign),
        )
    return (
        lambda w: coboundary(pair.bracket1, coeffs.rho, w, n),
        lambda w: coboundary(pair.bracket2, coeffs.mu, w, n),
    )


def bicomplex_delta(pair, coeffs, t):
    """δⁿ of a bicochain, with self-coefficients when ``coeffs`` is None"""
    n = t.ce_degree
    first = t.components[0]
    expected = (pair.dim, pair.dim) if coeffs is None else (pair.dim, coeffs.module_dim)
    if (first.ambient_dim, first.target_dim) != expected:
        raise DimensionMismatch('bicochain components do not match the coefficient space')
    d1, d2 = _differentials(pair, coeffs, n)
    images1 = [d1(w) for w in t.components]
    images2 = [d2(w) for w in t.components]
    out = [images1[0]]
    for i in range(1, n):
        out.append(images2[i - 1] + images1[i])
    out.append(images2[n - 1])
    if all(isinstance(w, Cochain) for w in t.components):
        out = [c.admissible() for c in out]
    return BicochainTuple(n + 1, tuple(out))


def bicomplex_matrix(pair, coeffs, ce_degree, raw=False):
    """Block matrix of δⁿ: d1 on the diagonal blocks, d2 one block below"""
    if coeffs is None:
        coeffs = adjoint_pair(pair)
    d1 = coboundary_matrix(pair.bracket1, coeffs.rho, ce_degree, raw)
    d2 = coboundary_matrix(pair.bracket2, coeffs.mu, ce_degree, raw)
    blocks = {}
    for i in range(ce_degree):
        blocks[(i, i)] = d1
        blocks[(i + 1, i)] = d2
    return block_matrix(blocks, [d1.nrows] * (ce_degree + 1), [d1.ncols] * ce_degree)


@degree_bound_required
@compatible_pair_required
def compatible_cohomology(pair, coeffs=None, *, max_degree, raw=False):
    if coeffs is not None and not validate_compatible_representation(pair, coeffs):
        raise PreconditionFailed('the coefficients are not a compatible representation')
    differentials = [bicomplex_matrix(pair, coeffs, n, raw) for n in range(1, max_degree + 1)]
    return build_report(differentials, raw)


def pair_derivations(pair):
    """Maps that are derivations of both brackets at once"""
    system = derivation_equations([pair.bracket1, pair.bracket2])
    return [matrix_from_flat(v, pair.dim, pair.dim) for v in kernel_basis(system)]

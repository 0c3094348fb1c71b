from fractions import Fraction
from itertools import product
import logging

from django.conf import settings

from core.decorators import nijenhuis_required, valid_algebra_required
from core.exceptions import DimensionMismatch, PathDisagreement
from core.linalg import Matrix
from core.multilinear import compose, endomorphism_cochain, insertion_sum, nr_bracket
from core.utils import seeded_rng
from core.verdicts import Verdict

from .algebras import ThreeLieAlgebra, homomorphism_defect, validate_fi


logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def _check_operator(algebra, operator):
    if operator.shape != (algebra.dim, algebra.dim):
        raise DimensionMismatch(f'operator of shape {operator.shape} on an algebra of dimension {algebra.dim}')


def torsion_by_bracket(pi, operator):
    """½[[[π,N],N],N] − ½[[π,N²],N] − [[π,N],N²] + [π,N³]"""
    n1 = endomorphism_cochain(operator)
    n2 = endomorphism_cochain(operator.power(2))
    n3 = endomorphism_cochain(operator.power(3))
    pi_n = nr_bracket(pi, n1)
    return (
        nr_bracket(nr_bracket(pi_n, n1), n1).scale(HALF)
        - nr_bracket(nr_bracket(pi, n2), n1).scale(HALF)
        - nr_bracket(pi_n, n2)
        + nr_bracket(pi, n3)
    )


def torsion_explicit(pi, operator):
    """3[Nx,Ny,Nz] − 3N([Nx,Ny,z] + [Nx,y,Nz] + [x,Ny,Nz] − N([Nx,y,z] + [x,Ny,z] + [x,y,Nz]) + N²[x,y,z])"""
    inner = (
        insertion_sum(pi, operator, 2)
        - compose(operator, insertion_sum(pi, operator, 1))
        + compose(operator.power(2), pi)
    )
    return (insertion_sum(pi, operator, 3) - compose(operator, inner)).scale(3)


def nijenhuis_torsion(algebra, operator, verify=None):
    """Torsion T_π N as a weight-1 cochain; N is Nijenhuis exactly when it vanishes"""
    _check_operator(algebra, operator)
    if verify is None:
        verify = settings.TRILIE_VERIFY_PATHS
    explicit = torsion_explicit(algebra.structure, operator)
    if verify and torsion_by_bracket(algebra.structure, operator) != explicit:
        raise PathDisagreement('Nijenhuis torsion')
    return explicit.admissible()


def is_nijenhuis(algebra, operator):
    return nijenhuis_torsion(algebra, operator).is_zero()


def deformed_structure_explicit(pi, operator):
    """[Nx,Ny,z] + [x,Ny,Nz] + [Nx,y,Nz] − N([Nx,y,z] + [x,Ny,z] + [x,y,Nz]) + N²[x,y,z]"""
    return (
        insertion_sum(pi, operator, 2)
        - compose(operator, insertion_sum(pi, operator, 1))
        + compose(operator.power(2), pi)
    )


def deformed_structure_by_bracket(pi, operator):
    """π_N = ½([[π,N],N] − [π,N²])"""
    n1 = endomorphism_cochain(operator)
    n2 = endomorphism_cochain(operator.power(2))
    return (nr_bracket(nr_bracket(pi, n1), n1) - nr_bracket(pi, n2)).scale(HALF)


def deformed_bracket(algebra, operator, verify=None):
    """The deformed bracket [x,y,z]_N; unvalidated (with a warning) unless N is Nijenhuis"""
    _check_operator(algebra, operator)
    if verify is None:
        verify = settings.TRILIE_VERIFY_PATHS
    explicit = deformed_structure_explicit(algebra.structure, operator)
    if verify and deformed_structure_by_bracket(algebra.structure, operator) != explicit:
        raise PathDisagreement('deformed bracket')
    deformed = ThreeLieAlgebra(algebra.dim, explicit.admissible())
    if not is_nijenhuis(algebra, operator):
        logger.warning('Operator has nonzero torsion; the deformed bracket is returned unvalidated')
        return deformed
    if not validate_fi(deformed):
        raise PathDisagreement('deformed bracket', 'zero torsion but the deformed bracket fails the Fundamental Identity')
    if not homomorphism_defect(operator, deformed, algebra).is_zero():
        raise PathDisagreement('deformed bracket', 'zero torsion but N is not a homomorphism to the original bracket')
    return deformed


@valid_algebra_required
@nijenhuis_required
def nijenhuis_pair_compatibility(algebra, operator):
    """Whether (π, π_N) is compatible, decided by [π,N] being a 3-Lie structure"""
    pi = algebra.structure
    n1 = endomorphism_cochain(operator)
    omega = nr_bracket(pi, n1)
    omega_square = nr_bracket(omega, omega)
    pi_deformed = deformed_structure_by_bracket(pi, operator)
    if nr_bracket(pi, pi_deformed) != omega_square.scale(-HALF):
        raise PathDisagreement('pair compatibility', '[π, π_N] differs from −½[[π,N],[π,N]]')
    return Verdict(omega_square.is_zero(), details={'identity_holds': True})


def _candidate_operators(dim, rng, entries):
    """Scalar plus diagonal or square-zero rank-one operators, drawn from small integers"""
    while True:
        kind = rng.choice(('diagonal', 'rank_one', 'mixed'))
        scalar = Fraction(rng.choice(entries))
        if kind == 'diagonal':
            diagonal = [Fraction(rng.choice(entries)) for _ in range(dim)]
            yield Matrix.from_rows([[diagonal[i] if i == j else 0 for j in range(dim)] for i in range(dim)])
            continue
        u = [Fraction(rng.choice(entries)) for _ in range(dim)]
        v = [Fraction(rng.choice(entries)) for _ in range(dim)]
        pivot = next((i for i in range(dim) if u[i]), None)
        if pivot is None:
            continue
        # project v so that v·u = 0, making u vᵀ square to zero
        dot = sum(a * b for a, b in zip(u, v))
        v[pivot] -= dot / u[pivot]
        rank_one = Matrix.from_rows([[u[i] * v[j] for j in range(dim)] for i in range(dim)])
        base = Matrix.scalar(dim, scalar)
        if kind == 'mixed':
            diagonal = [Fraction(rng.choice(entries)) for _ in range(dim)]
            base = Matrix.from_rows([[diagonal[i] if i == j else 0 for j in range(dim)] for i in range(dim)])
        yield base + rank_one


def search_nijenhuis(algebras, seed=None, count=3, attempts=400, entries=(-1, 0, 1, 2, 3)):
    """Seeded search for operators that are Nijenhuis for every algebra given"""
    if seed is None:
        seed = settings.TRILIE_DEFAULT_SEED
    dim = algebras[0].dim
    rng = seeded_rng(seed)
    found = []
    for candidate, _ in zip(_candidate_operators(dim, rng, entries), range(attempts)):
        if candidate in found or _is_scalar(candidate):
            continue
        if all(is_nijenhuis(a, candidate) for a in algebras):
            found.append(candidate)
            if len(found) == count:
                break
    return found


def _is_scalar(matrix):
    first = matrix.rows[0][0]
    return all(matrix[i, j] == (first if i == j else 0) for i, j in product(range(matrix.nrows), repeat=2))

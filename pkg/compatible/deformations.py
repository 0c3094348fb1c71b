from dataclasses import dataclass
from fractions import Fraction

from core.decorators import compatible_pair_required
from core.exceptions import DimensionMismatch, PathDisagreement, PreconditionFailed
from core.linalg import Matrix, infeasibility_certificate, solve_affine
from core.multilinear import (
    Cochain, admissible_coordinates, compose, endomorphism_cochain, insertion_sum, nr_bracket,
)
from core.verdicts import Verdict
from threelie.algebras import matrix_from_flat

from .pairs import CompatiblePair, equation_verdict, validate_compatible


HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DeformationData:
    """ω1, ω2 and, for order 2, ω̃1, ω̃2 (all weight-1 cochains)"""

    omega1: Cochain
    omega2: Cochain
    omega1_tilde: Cochain = None
    omega2_tilde: Cochain = None

    def __post_init__(self):
        for c in (self.omega1, self.omega2, self.omega1_tilde, self.omega2_tilde):
            if c is not None and (c.weight, c.ambient_dim, c.target_dim) != (1, self.dim, self.dim):
                raise DimensionMismatch('deformation cochains must be weight-1 self-coefficient cochains on one space')

    @property
    def dim(self):
        return self.omega1.ambient_dim

    @property
    def has_tildes(self):
        return self.omega1_tilde is not None and self.omega2_tilde is not None

    def tildes(self):
        zero = Cochain.zero(1, self.dim, self.dim)
        return (
            zero if self.omega1_tilde is None else self.omega1_tilde,
            zero if self.omega2_tilde is None else self.omega2_tilde,
        )


def cocycle_equations(pi1, pi2, omega1, omega2):
    return [
        ('[pi1, omega1] = 0', nr_bracket(pi1, omega1)),
        ('[pi1, omega2] + [pi2, omega1] = 0', nr_bracket(pi1, omega2) + nr_bracket(pi2, omega1)),
        ('[pi2, omega2] = 0', nr_bracket(pi2, omega2)),
    ]


@compatible_pair_required
def infinitesimal_check(pair, data):
    """(ω1, ω2) is a 2-cocycle: the bracket equations of the deformation modulo t²"""
    return equation_verdict(cocycle_equations(pair.pi1, pair.pi2, data.omega1, data.omega2))


def delta_one_matrix(pair):
    """Columns: admissible coordinates of ([π1, E], [π2, E]) for the matrix units E of End(g)"""
    d = pair.dim
    columns = []
    for i in range(d):
        for j in range(d):
            unit = Matrix.from_rows([[1 if (r, c) == (i, j) else 0 for c in range(d)] for r in range(d)])
            e = endomorphism_cochain(unit)
            columns.append(
                admissible_coordinates(nr_bracket(pair.pi1, e)) + admissible_coordinates(nr_bracket(pair.pi2, e))
            )
    return Matrix.from_columns(columns, len(columns[0]))


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witness: Matrix = None
    certificate: tuple = None


@compatible_pair_required
def infinitesimal_equivalent(pair, first, second):
    """Solve (ω1 − ω1′, ω2 − ω2′) = δ¹N for N ∈ End(g)"""
    for data in (first, second):
        if not infinitesimal_check(pair, data):
            raise PreconditionFailed('both deformations must be 2-cocycles')
    system = delta_one_matrix(pair)
    target = (
        admissible_coordinates(first.omega1 - second.omega1)
        + admissible_coordinates(first.omega2 - second.omega2)
    )
    solution = solve_affine(system, target)
    if solution is None:
        return EquivalenceResult(False, certificate=infeasibility_certificate(system, target))
    return EquivalenceResult(True, witness=matrix_from_flat(solution.particular, pair.dim, pair.dim))


def order2_equations(pair, data):
    pi1, pi2 = pair.pi1, pair.pi2
    w1, w2 = data.omega1, data.omega2
    t1, t2 = data.tildes()
    b = nr_bracket
    return {
        'block1': cocycle_equations(pi1, pi2, w1, w2),
        'block2': [
            ('[pi1, omega1~] + 1/2 [omega1, omega1] = 0', b(pi1, t1) + b(w1, w1).scale(HALF)),
            ('[omega1~, pi2] + [omega1, omega2] + [pi1, omega2~] = 0', b(t1, pi2) + b(w1, w2) + b(pi1, t2)),
            ('[pi2, omega2~] + 1/2 [omega2, omega2] = 0', b(pi2, t2) + b(w2, w2).scale(HALF)),
        ],
        'block3': [
            ('[omega1, omega1~] = 0', b(w1, t1)),
            ('[omega1~, omega2] + [omega2~, omega1] = 0', b(t1, w2) + b(t2, w1)),
            ('[omega2, omega2~] = 0', b(w2, t2)),
        ],
        'block4': [
            ('[omega1~, omega1~] = 0', b(t1, t1)),
            ('[omega1~, omega2~] = 0', b(t1, t2)),
            ('[omega2~, omega2~] = 0', b(t2, t2)),
        ],
    }


@compatible_pair_required
def order2_check(pair, data):
    """All ten equations of a 2-order 1-parameter deformation, grouped in four blocks"""
    blocks = order2_equations(pair, data)
    verdicts = {name: equation_verdict(equations) for name, equations in blocks.items()}
    t1, t2 = data.tildes()
    tilde_pair = CompatiblePair.from_structures(t1, t2)
    if verdicts['block4'].ok != validate_compatible(tilde_pair).ok:
        raise PathDisagreement('order-2 deformation', 'block 4 and validation of (omega1~, omega2~) differ')
    block3_as_cocycle = equation_verdict(cocycle_equations(t1, t2, data.omega1, data.omega2))
    if verdicts['block3'].ok != block3_as_cocycle.ok:
        raise PathDisagreement('order-2 deformation', 'block 3 and the cocycle condition for (omega1~, omega2~) differ')
    violations = [v for verdict in verdicts.values() for v in verdict.violations]
    equations = {}
    for verdict in verdicts.values():
        equations.update(verdict.details['equations'])
    return equation_result(violations, equations, {name: v.ok for name, v in verdicts.items()})


def equation_result(violations, equations, blocks):
    return Verdict(not violations, violations, {'equations': equations, 'blocks': blocks})


def deformed_pair_at(pair, data, t):
    """(π1 + tω1 + t²ω̃1, π2 + tω2 + t²ω̃2) at a rational t"""
    t = Fraction(t)
    t1, t2 = data.tildes()
    return CompatiblePair.from_structures(
        (pair.pi1 + data.omega1.scale(t) + t1.scale(t * t)).admissible(),
        (pair.pi2 + data.omega2.scale(t) + t2.scale(t * t)).admissible(),
    )


def order2_by_evaluation(pair, data, parameters=(0, 1, 2, 3, 4)):
    """Secondary oracle: the defect of the deformed pair has degree at most 4 in t,
    so it vanishes identically once it vanishes at five distinct values"""
    return all(validate_compatible(deformed_pair_at(pair, data, t)).ok for t in parameters)


def triviality_equations(pair, data, operator):
    t1, t2 = data.tildes()
    equations = []
    for index, (pi, omega, tilde) in enumerate(((pair.pi1, data.omega1, t1), (pair.pi2, data.omega2, t2)), start=1):
        equations.extend([
            (f'omega{index} = pi{index}(N.,.,.) + pi{index}(.,N.,.) + pi{index}(.,.,N.) - N pi{index}',
             omega - (insertion_sum(pi, operator, 1) - compose(operator, pi))),
            (f'omega{index}~ + N omega{index} = two-N insertion sum of pi{index}',
             tilde + compose(operator, omega) - insertion_sum(pi, operator, 2)),
            (f'N omega{index}~ = pi{index}(N., N., N.)',
             compose(operator, tilde) - insertion_sum(pi, operator, 3)),
        ])
    return equations


def triviality_check(pair, data, operator):
    """Whether Id + tN makes the 2-order deformation trivial"""
    if operator.shape != (pair.dim, pair.dim):
        raise DimensionMismatch(f'operator of shape {operator.shape} on a pair of dimension {pair.dim}')
    return equation_verdict(triviality_equations(pair, data, operator))

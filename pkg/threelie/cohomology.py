"""Coboundary operators dⁿ_{π+ρ} and the cohomology of a 3-Lie algebra with coefficients.

An n-cochain (CE-degree n) has weight n−1. The coboundary is computed from
the explicit four-sum formula and, when path verification is on, also as
(−1)^{n−1}[π̂+ρ̂, f̂] on g ⊕ V restricted to arguments in g.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import logging

from django.conf import settings

from core.decorators import degree_bound_required, valid_representation_required
from core.exceptions import DimensionMismatch, PathDisagreement
from core.linalg import Matrix, quotient_dim, rank
from core.multilinear import (
    Cochain, PreCochain, Splitting, add_scaled, flatten_pairs, admissible_basis, admissible_keys,
    lift, nr_bracket, pre_keys, raw_basis, restrict_to_base,
)

from .representations import semidirect_structure


logger = logging.getLogger(__name__)


class _Tables:
    """Bracket values and action matrices on basis elements, computed once per operator"""

    def __init__(self, algebra, rep):
        d = algebra.dim
        self.bracket = {abc: algebra.bracket(*abc) for abc in product(range(d), repeat=3)}
        self.action = {ab: rep.action(*ab) for ab in product(range(d), repeat=2)}


def _display_value(tables, f, slots, final):
    n = len(slots)
    acc = None
    for jj in range(n):
        xj, yj = slots[jj]
        sign = -1 if (jj + 1) % 2 else 1
        others = slots[:jj] + slots[jj + 1:]
        for kk in range(jj + 1, n):
            xk, yk = slots[kk]
            head, tail = flatten_pairs(others[:kk - 1]), flatten_pairs(others[kk:])
            acc = add_scaled(acc, sign, f.evaluate(head + [tables.bracket[xj, yj, xk], yk] + tail + [final]))
            acc = add_scaled(acc, sign, f.evaluate(head + [xk, tables.bracket[xj, yj, yk]] + tail + [final]))
        acc = add_scaled(acc, sign, f.evaluate(flatten_pairs(others) + [tables.bracket[xj, yj, final]]))
        inner = f.evaluate(flatten_pairs(others) + [final])
        if inner is not None:
            acc = add_scaled(acc, -sign, tables.action[xj, yj].apply(inner))
    xn, yn = slots[-1]
    head = flatten_pairs(slots[:-1])
    sign = 1 if (n + 1) % 2 == 0 else -1
    inner = f.evaluate(head + [xn])
    if inner is not None:
        acc = add_scaled(acc, sign, tables.action[yn, final].apply(inner))
    inner = f.evaluate(head + [yn])
    if inner is not None:
        acc = add_scaled(acc, sign, tables.action[final, xn].apply(inner))
    return acc


def _check_cochain(algebra, rep, f, ce_degree):
    if ce_degree < 1:
        raise DimensionMismatch('CE-degrees start at 1')
    if f.weight != ce_degree - 1:
        raise DimensionMismatch(f'a CE-degree {ce_degree} cochain has weight {ce_degree - 1}, got {f.weight}')
    if (f.ambient_dim, f.target_dim) != (algebra.dim, rep.module_dim):
        raise DimensionMismatch(
            f'cochain maps dimension {f.ambient_dim} to {f.target_dim}, '
            f'expected {algebra.dim} to {rep.module_dim}'
        )


def coboundary_explicit(algebra, rep, f, ce_degree):
    _check_cochain(algebra, rep, f, ce_degree)
    tables = _Tables(algebra, rep)
    return PreCochain.from_function(
        ce_degree, algebra.dim, rep.module_dim,
        lambda slots, final: _display_value(tables, f, list(slots), final),
    )


def coboundary_by_lift(algebra, rep, f, ce_degree):
    """(−1)^{n−1}[π̂+ρ̂, f̂] evaluated on arguments from g, V-component"""
    _check_cochain(algebra, rep, f, ce_degree)
    split = Splitting(algebra.dim, rep.module_dim)
    total = semidirect_structure(algebra, rep)
    bracket = nr_bracket(total, lift(f, split, 'v'), keys=split.base_keys(ce_degree))
    sign = 1 if (ce_degree - 1) % 2 == 0 else -1
    return restrict_to_base(bracket, split, 'v').scale(sign)


@valid_representation_required
def coboundary(algebra, rep, f, ce_degree, verify=None):
    """dⁿ f for an n-cochain f with values in the representation"""
    if verify is None:
        verify = settings.TRILIE_VERIFY_PATHS
    explicit = coboundary_explicit(algebra, rep, f, ce_degree)
    if verify:
        by_lift = coboundary_by_lift(algebra, rep, f, ce_degree)
        if explicit != by_lift:
            raise PathDisagreement('coboundary', f'CE-degree {ce_degree}')
    return explicit.admissible() if isinstance(f, Cochain) else explicit


def _output_keys(weight, dim, raw):
    if raw:
        return pre_keys(weight, dim)
    return [(slots + ((a, b),), c) for slots, (a, b, c) in admissible_keys(weight, dim)]


def estimate_memory(nrows, ncols, what):
    entries = nrows * ncols
    if entries > settings.TRILIE_MATRIX_WARN_ENTRIES:
        logger.warning(
            'Assembling %s: %d x %d = %d entries, roughly %.1f MB',
            what, nrows, ncols, entries, entries * 8 / 2 ** 20,
        )


def coboundary_matrix(algebra, rep, ce_degree, raw=False):
    """Matrix of dⁿ from CE-degree n to n+1 on the admissible (or raw) bases"""
    d, m = algebra.dim, rep.module_dim
    basis = (raw_basis if raw else admissible_basis)(ce_degree - 1, d, m)
    keys = _output_keys(ce_degree, d, raw)
    estimate_memory(len(keys) * m, len(basis), f'd^{ce_degree}')
    tables = _Tables(algebra, rep)
    zero = (Fraction(0),) * m
    columns = []
    for f in basis:
        column = []
        for slots, final in keys:
            value = _display_value(tables, f, list(slots), final)
            column.extend(value if value is not None else zero)
        columns.append(column)
    return Matrix.from_columns(columns, len(keys) * m)


@dataclass(frozen=True)
class DegreeReport:
    degree: int
    cochain_dim: int
    kernel_dim: int
    image_rank: int
    cohomology_dim: int


@dataclass(frozen=True)
class CochainComplexReport:
    degrees: tuple
    raw: bool = False

    def cohomology_dim(self, degree):
        for row in self.degrees:
            if row.degree == degree:
                return row.cohomology_dim
        raise KeyError(degree)

    def as_dict(self):
        return {
            'raw_complex': self.raw,
            'degrees': [
                {
                    'degree': row.degree,
                    'cochain_dim': row.cochain_dim,
                    'kernel_dim': row.kernel_dim,
                    'image_rank': row.image_rank,
                    'cohomology_dim': row.cohomology_dim,
                }
                for row in self.degrees
            ],
        }


def build_report(differentials, raw=False):
    """Report from the differentials d¹, …, dᴺ (dⁿ has the n-cochains as columns)"""
    rows = []
    previous_rank = 0
    for degree, matrix in enumerate(differentials, start=1):
        current_rank = rank(matrix)
        kernel_dim = matrix.ncols - current_rank
        logger.debug('degree %d: %d cochains, rank %d', degree, matrix.ncols, current_rank)
        rows.append(DegreeReport(degree, matrix.ncols, kernel_dim, previous_rank, quotient_dim(kernel_dim, previous_rank)))
        previous_rank = current_rank
    return CochainComplexReport(tuple(rows), raw)


@degree_bound_required
@valid_representation_required
def cohomology(algebra, rep, *, max_degree, raw=False):
    differentials = [coboundary_matrix(algebra, rep, n, raw) for n in range(1, max_degree + 1)]
    return build_report(differentials, raw)

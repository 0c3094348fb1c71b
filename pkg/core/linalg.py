"""Exact rational matrices and the elimination routines built on them.

Entries are ``fractions.Fraction``. Elimination is delegated to sympy's
``DomainMatrix`` over ``QQ``, which keeps every pivot step exact.
"""
from dataclasses import dataclass
from fractions import Fraction
import logging

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .exceptions import ComplexInconsistency, DimensionMismatch


logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(value):
    """Coerce an int, Fraction or sympy rational to a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    numerator = getattr(value, 'numerator', None)
    denominator = getattr(value, 'denominator', None)
    if numerator is None or denominator is None:
        raise TypeError(f'not an exact rational: {value!r}')
    if callable(numerator):
        numerator, denominator = numerator(), denominator()
    return Fraction(int(numerator), int(denominator))


@dataclass(frozen=True)
class Matrix:
    """Dense exact matrix; ``rows`` is a tuple of equal-length tuples"""

    rows: tuple
    ncols: int

    @classmethod
    def from_rows(cls, rows, ncols=None):
        rows = tuple(tuple(to_scalar(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(row) != ncols for row in rows):
            raise DimensionMismatch('ragged matrix rows')
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, columns, nrows):
        columns = [tuple(to_scalar(x) for x in col) for col in columns]
        if any(len(col) != nrows for col in columns):
            raise DimensionMismatch('column length does not match row count')
        rows = tuple(tuple(col[i] for col in columns) for i in range(nrows))
        return cls(rows, len(columns))

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(tuple((ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def scalar(cls, n, value):
        return cls.identity(n).scale(value)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def transpose(self):
        return Matrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def is_zero(self):
        return all(x == 0 for row in self.rows for x in row)

    def scale(self, c):
        c = to_scalar(c)
        return Matrix(tuple(tuple(c * x for x in row) for row in self.rows), self.ncols)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        self._check_same_shape(other)
        return Matrix(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other):
        self._check_same_shape(other)
        return Matrix(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def apply(self, vector):
        """Matrix times column vector, returned as a tuple"""
        if len(vector) != self.ncols:
            raise DimensionMismatch(f'vector of length {len(vector)} for {self.nrows}x{self.ncols} matrix')
        out = []
        for row in self.rows:
            acc = ZERO
            for x, v in zip(row, vector):
                if x and v:
                    acc += x * v
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return self.apply(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f'cannot multiply {self.shape} by {other.shape}')
        if not self.nrows or not other.ncols:
            return Matrix.zeros(self.nrows, other.ncols)
        if not self.ncols:
            return Matrix.zeros(self.nrows, other.ncols)
        if self.nrows * self.ncols * other.ncols <= 4096:
            columns = [other.column(j) for j in range(other.ncols)]
            return Matrix(tuple(tuple(sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in columns) for row in self.rows), other.ncols)
        product = self.to_domain_matrix() * other.to_domain_matrix()
        return Matrix.from_domain_matrix(product)

    def power(self, k):
        result = Matrix.identity(self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise DimensionMismatch('cannot stack matrices with different row counts')
        return Matrix(tuple(r + s for r, s in zip(self.rows, other.rows)), self.ncols + other.ncols)

    def to_domain_matrix(self):
        entries = {}
        for i, row in enumerate(self.rows):
            nonzero = {j: QQ(x.numerator, x.denominator) for j, x in enumerate(row) if x}
            if nonzero:
                entries[i] = nonzero
        return DomainMatrix(entries, self.shape, QQ)

    @classmethod
    def from_domain_matrix(cls, dm):
        nrows, ncols = dm.shape
        return cls.from_rows(dm.to_dense().to_list(), ncols) if nrows else cls((), ncols)

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f'shape {self.shape} differs from {other.shape}')


def block_matrix(blocks, row_sizes, col_sizes):
    """Assemble a matrix from a dict {(bi, bj): Matrix}; missing blocks are zero"""
    rows = []
    for bi, height in enumerate(row_sizes):
        for i in range(height):
            row = []
            for bj, width in enumerate(col_sizes):
                block = blocks.get((bi, bj))
                row.extend(block.rows[i] if block is not None else (ZERO,) * width)
            rows.append(tuple(row))
    return Matrix(tuple(rows), sum(col_sizes))


def _rref(m):
    """Reduced row echelon form as (list of rows, pivot columns)"""
    if not m.nrows or not m.ncols:
        return [], ()
    reduced, pivots = m.to_domain_matrix().rref()
    rows = [[to_scalar(x) for x in row] for row in reduced.to_dense().to_list()]
    return rows[:len(pivots)], tuple(pivots)


def rank(m):
    return len(_rref(m)[1])


def _kernel_from_rref(rows, pivots, ncols):
    basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [ZERO] * ncols
        vector[free] = ONE
        for row, p in zip(rows, pivots):
            vector[p] = -row[free] / row[p]
        basis.append(tuple(vector))
    return basis


def kernel_basis(m):
    """Basis of the right null space, one vector per free column"""
    rows, pivots = _rref(m)
    return _kernel_from_rref(rows, pivots, m.ncols)


@dataclass(frozen=True)
class AffineSolution:
    particular: tuple
    kernel: list


def solve_affine(m, b):
    """Solve M x = b exactly; returns None when the system is inconsistent"""
    b = tuple(to_scalar(x) for x in b)
    if len(b) != m.nrows:
        raise DimensionMismatch(f'right-hand side of length {len(b)} for {m.nrows} rows')
    augmented = m.hstack(Matrix(tuple((x,) for x in b), 1))
    rows, pivots = _rref(augmented)
    if m.ncols in pivots:
        return None
    particular = [ZERO] * m.ncols
    for row, p in zip(rows, pivots):
        particular[p] = row[m.ncols] / row[p]
    kernel = _kernel_from_rref([row[:m.ncols] for row in rows], pivots, m.ncols)
    return AffineSolution(tuple(particular), kernel)


def infeasibility_certificate(m, b):
    """A vector y with yᵀM = 0 and y·b ≠ 0, or None when M x = b is solvable"""
    b = tuple(to_scalar(x) for x in b)
    for y in kernel_basis(m.transpose()):
        if sum(yi * bi for yi, bi in zip(y, b) if yi and bi) != 0:
            return y
    return None


def quotient_dim(kernel_dim, image_rank):
    if image_rank > kernel_dim:
        raise ComplexInconsistency(
            f'image rank {image_rank} exceeds kernel dimension {kernel_dim}'
        )
    return kernel_dim - image_rank

"""Cochains on ∧²g ⊗ ⋯ ⊗ ∧²g ⊗ g and the graded bracket between them.

A cochain of weight w takes w wedge pairs followed by one final vector.
Values are stored only on canonical keys ``((a, b), ..., final)`` with
``a < b`` in every pair and zero vectors dropped; evaluation elsewhere is
recovered from skew-symmetry inside each pair. Indices are 0-based here;
the file formats shift them by one.

The admissible cochains are those also skew in the last three arguments
``(x_w, y_w, x_{w+1})``. For weight 1 that is ``Hom(∧³g, g)``, the home of
every 3-Lie bracket.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .exceptions import DimensionMismatch
from .linalg import Matrix, to_scalar
from .utils import canonical_pair, canonical_pairs, canonical_triples, shuffles, sort_with_sign


def add_scaled(acc, coeff, vector):
    if vector is None or not coeff:
        return acc
    if acc is None:
        return [coeff * x for x in vector]
    for i, x in enumerate(vector):
        if x:
            acc[i] += coeff * x
    return acc


def flatten_pairs(pairs):
    out = []
    for a, b in pairs:
        out.append(a)
        out.append(b)
    return out


def pre_keys(weight, dim):
    """All canonical keys of the raw cochain space, in lexicographic order"""
    pairs = canonical_pairs(dim)
    return [(slots, final) for slots in product(pairs, repeat=weight) for final in range(dim)]


def admissible_keys(weight, dim):
    """Coordinate keys of the admissible space: (pairs, final) for w=0, (pairs, triple) otherwise"""
    if weight == 0:
        return [((), j) for j in range(dim)]
    pairs = canonical_pairs(dim)
    triples = canonical_triples(dim)
    return [(slots, triple) for slots in product(pairs, repeat=weight - 1) for triple in triples]


@dataclass(frozen=True, eq=False)
class PreCochain:
    """Multilinear map skew within each pair slot"""

    weight: int
    ambient_dim: int
    target_dim: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for key, vector in self.values.items():
            slots, final = key
            if len(slots) != self.weight:
                raise DimensionMismatch(f'key {key} does not have {self.weight} pair slots')
            for a, b in slots:
                if not 0 <= a < b < self.ambient_dim:
                    raise DimensionMismatch(f'pair {(a, b)} is not canonical in dimension {self.ambient_dim}')
            if not 0 <= final < self.ambient_dim:
                raise DimensionMismatch(f'final index {final} out of range')
            if len(vector) != self.target_dim:
                raise DimensionMismatch(f'value of length {len(vector)} for target dimension {self.target_dim}')
            vector = tuple(to_scalar(x) for x in vector)
            if any(vector):
                cleaned[(tuple(tuple(p) for p in slots), final)] = vector
        object.__setattr__(self, 'values', cleaned)

    @classmethod
    def zero(cls, weight, ambient_dim, target_dim):
        return cls(weight, ambient_dim, target_dim, {})

    @classmethod
    def from_function(cls, weight, ambient_dim, target_dim, fn, keys=None):
        """Tabulate ``fn(slots, final)`` over canonical keys (all of them by default)"""
        if keys is None:
            keys = pre_keys(weight, ambient_dim)
        values = {}
        for slots, final in keys:
            vector = fn(slots, final)
            if vector is not None:
                values[(slots, final)] = vector
        return PreCochain(weight, ambient_dim, target_dim, values)

    @property
    def arity(self):
        return 2 * self.weight + 1

    @property
    def is_self_coefficient(self):
        return self.ambient_dim == self.target_dim

    def lookup(self, args):
        """Stored value at flat basis arguments after pair canonicalization, or None for zero"""
        sign = 1
        slots = []
        for i in range(self.weight):
            s, pair = canonical_pair(args[2 * i], args[2 * i + 1])
            if not s:
                return None
            sign *= s
            slots.append(pair)
        vector = self.values.get((tuple(slots), args[2 * self.weight]))
        if vector is None or sign == 1:
            return vector
        return tuple(-x for x in vector)

    def evaluate(self, args):
        """Evaluate at arguments that are basis indices or coordinate vectors; None means zero"""
        for position, arg in enumerate(args):
            if isinstance(arg, int):
                continue
            acc = None
            expanded = list(args)
            for i, coeff in enumerate(arg):
                if coeff:
                    expanded[position] = i
                    acc = add_scaled(acc, coeff, self.evaluate(expanded))
            return acc
        return self.lookup(args)

    def eval(self, args):
        if len(args) != self.arity:
            raise DimensionMismatch(f'expected {self.arity} arguments, got {len(args)}')
        for a in args:
            if isinstance(a, int) and not 0 <= a < self.ambient_dim:
                raise DimensionMismatch(f'basis index {a} out of range for dimension {self.ambient_dim}')
        value = self.evaluate(list(args))
        return tuple(value) if value is not None else (Fraction(0),) * self.target_dim

    def is_zero(self):
        return not self.values

    def same_space(self, other):
        return (self.weight, self.ambient_dim, self.target_dim) == (other.weight, other.ambient_dim, other.target_dim)

    def _check_same_space(self, other):
        if not self.same_space(other):
            raise DimensionMismatch(
                f'cochain spaces differ: {(self.weight, self.ambient_dim, self.target_dim)} '
                f'vs {(other.weight, other.ambient_dim, other.target_dim)}'
            )

    def __eq__(self, other):
        if not isinstance(other, PreCochain):
            return NotImplemented
        return self.same_space(other) and self.values == other.values

    __hash__ = None

    def __add__(self, other):
        self._check_same_space(other)
        values = dict(self.values)
        for key, vector in other.values.items():
            current = values.get(key)
            values[key] = vector if current is None else tuple(x + y for x, y in zip(current, vector))
        return PreCochain(self.weight, self.ambient_dim, self.target_dim, values)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = to_scalar(c)
        values = {key: tuple(c * x for x in vector) for key, vector in self.values.items()} if c else {}
        return PreCochain(self.weight, self.ambient_dim, self.target_dim, values)

    def admissible(self):
        """This cochain as a ``Cochain``, raising if it is not admissible"""
        return Cochain(self.weight, self.ambient_dim, self.target_dim, self.values)

    def admissible_value(self, key):
        """Value at an admissible coordinate key (zero vector when absent)"""
        slots, tail = key
        if self.weight == 0:
            args = [tail]
        else:
            a, b, c = tail
            args = flatten_pairs(slots) + [a, b, c]
        return self.eval(args)

    def __repr__(self):
        return (f'{type(self).__name__}(weight={self.weight}, ambient_dim={self.ambient_dim}, '
                f'target_dim={self.target_dim}, nonzero={len(self.values)})')


class Cochain(PreCochain):
    """PreCochain that is also skew in its last three arguments"""

    def __post_init__(self):
        super().__post_init__()
        ok, witness = is_admissible(self)
        if not ok:
            raise DimensionMismatch(f'cochain is not admissible at arguments {witness}')

    @classmethod
    def from_admissible(cls, weight, ambient_dim, target_dim, entries):
        """Build from values on admissible coordinate keys, expanding skewly over the last triple"""
        values = {}
        for (slots, tail), vector in entries.items():
            slots = tuple(tuple(p) for p in slots)
            if weight == 0:
                values[(slots, tail)] = vector
                continue
            a, b, c = tail
            if not a < b < c:
                raise DimensionMismatch(f'triple {tail} is not canonical')
            vector = tuple(to_scalar(x) for x in vector)
            values[(slots + ((a, b),), c)] = vector
            values[(slots + ((a, c),), b)] = tuple(-x for x in vector)
            values[(slots + ((b, c),), a)] = vector
        return cls(weight, ambient_dim, target_dim, values)


def is_admissible(c):
    """(True, None) or (False, first violating flat argument tuple)"""
    if c.weight == 0:
        return True, None
    for slots, final in pre_keys(c.weight, c.ambient_dim):
        head, (a, b) = slots[:-1], slots[-1]
        actual = c.values.get((slots, final))
        if final in (a, b):
            expected = None
        else:
            sign, ordered = sort_with_sign((a, b, final))
            stored = c.values.get((head + (ordered[:2],), ordered[2]))
            expected = stored if stored is None or sign == 1 else tuple(-x for x in stored)
        if actual != expected:
            return False, tuple(flatten_pairs(slots) + [final])
    return True, None


def admissible_basis(weight, ambient_dim, target_dim):
    """Ordered basis of the admissible space: lexicographic on (pairs, triple, target index)"""
    basis = []
    for key in admissible_keys(weight, ambient_dim):
        for r in range(target_dim):
            vector = [Fraction(0)] * target_dim
            vector[r] = Fraction(1)
            basis.append(Cochain.from_admissible(weight, ambient_dim, target_dim, {key: vector}))
    return basis


def admissible_dimension(weight, ambient_dim, target_dim):
    return len(admissible_keys(weight, ambient_dim)) * target_dim


def admissible_coordinates(c):
    coords = []
    for key in admissible_keys(c.weight, c.ambient_dim):
        coords.extend(c.admissible_value(key))
    return tuple(coords)


def from_admissible_coordinates(coords, weight, ambient_dim, target_dim):
    entries = {}
    keys = admissible_keys(weight, ambient_dim)
    if len(coords) != len(keys) * target_dim:
        raise DimensionMismatch('coordinate vector does not match the admissible basis')
    for i, key in enumerate(keys):
        chunk = coords[i * target_dim:(i + 1) * target_dim]
        if any(chunk):
            entries[key] = chunk
    return Cochain.from_admissible(weight, ambient_dim, target_dim, entries)


def raw_basis(weight, ambient_dim, target_dim):
    basis = []
    for key in pre_keys(weight, ambient_dim):
        for r in range(target_dim):
            vector = [Fraction(0)] * target_dim
            vector[r] = Fraction(1)
            basis.append(PreCochain(weight, ambient_dim, target_dim, {key: vector}))
    return basis


def raw_coordinates(c):
    zero = (Fraction(0),) * c.target_dim
    coords = []
    for key in pre_keys(c.weight, c.ambient_dim):
        coords.extend(c.values.get(key, zero))
    return tuple(coords)


def _circ_value(p, q, slots, final):
    wp, wq = p.weight, q.weight
    acc = None
    for k in range(1, wp + 1):
        prefactor = -1 if (k - 1) * wq % 2 else 1
        position = k + wq - 1
        x, y = slots[position]
        head, tail = slots[:position], flatten_pairs(slots[position + 1:])
        for sign, chosen, rest in shuffles(head, k - 1):
            coeff = prefactor * sign
            inner = q.evaluate(flatten_pairs(rest) + [x])
            if inner is not None:
                acc = add_scaled(acc, coeff, p.evaluate(flatten_pairs(chosen) + [tuple(inner), y] + tail + [final]))
            inner = q.evaluate(flatten_pairs(rest) + [y])
            if inner is not None:
                acc = add_scaled(acc, coeff, p.evaluate(flatten_pairs(chosen) + [x, tuple(inner)] + tail + [final]))
    prefactor = -1 if wp * wq % 2 else 1
    for sign, chosen, rest in shuffles(list(slots), wp):
        inner = q.evaluate(flatten_pairs(rest) + [final])
        if inner is not None:
            acc = add_scaled(acc, prefactor * sign, p.evaluate(flatten_pairs(chosen) + [tuple(inner)]))
    return acc


def _check_composable(p, q):
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatch(f'ambient dimensions differ: {p.ambient_dim} vs {q.ambient_dim}')
    if not (p.is_self_coefficient and q.is_self_coefficient):
        raise DimensionMismatch('the graded bracket needs self-coefficient cochains')


def circ(p, q, keys=None):
    """Circle product P∘Q of weight wp + wq, optionally only on the given keys"""
    _check_composable(p, q)
    return PreCochain.from_function(
        p.weight + q.weight, p.ambient_dim, p.target_dim,
        lambda slots, final: _circ_value(p, q, slots, final),
        keys,
    )


def nr_bracket(p, q, keys=None):
    """Graded commutator [P, Q] = P∘Q − (−1)^{wp·wq} Q∘P"""
    _check_composable(p, q)
    sign = -1 if p.weight * q.weight % 2 else 1

    def value(slots, final):
        acc = add_scaled(None, 1, _circ_value(p, q, slots, final))
        return add_scaled(acc, -sign, _circ_value(q, p, slots, final))

    return PreCochain.from_function(p.weight + q.weight, p.ambient_dim, p.target_dim, value, keys)


def endomorphism_cochain(matrix):
    """A square matrix as the weight-0 cochain x ↦ N x"""
    if matrix.nrows != matrix.ncols:
        raise DimensionMismatch('a weight-0 self-coefficient cochain needs a square matrix')
    return PreCochain(0, matrix.ncols, matrix.nrows, {((), j): matrix.column(j) for j in range(matrix.ncols)})


def linear_map_cochain(matrix):
    """Any m×d matrix as a weight-0 cochain from the d-space into the m-space"""
    return PreCochain(0, matrix.ncols, matrix.nrows, {((), j): matrix.column(j) for j in range(matrix.ncols)})


def cochain_matrix(c):
    """The matrix of a weight-0 cochain"""
    if c.weight != 0:
        raise DimensionMismatch('only weight-0 cochains are linear maps')
    return Matrix.from_columns([c.eval([j]) for j in range(c.ambient_dim)], c.target_dim)


def substitute(c, maps):
    """c(M₁·, M₂·, …): insert a linear map (or None for identity) into each argument slot"""
    if len(maps) != c.arity:
        raise DimensionMismatch(f'expected {c.arity} slot maps, got {len(maps)}')
    columns = [
        None if m is None else [m.column(j) for j in range(m.ncols)]
        for m in maps
    ]

    def value(slots, final):
        args = flatten_pairs(slots) + [final]
        return c.evaluate([a if cols is None else cols[a] for a, cols in zip(args, columns)])

    return PreCochain.from_function(c.weight, c.ambient_dim, c.target_dim, value)


def insertion_sum(c, matrix, count):
    """Sum of c with ``matrix`` inserted into every choice of ``count`` argument slots"""
    total = PreCochain.zero(c.weight, c.ambient_dim, c.target_dim)
    for chosen in combinations(range(c.arity), count):
        total = total + substitute(c, [matrix if i in chosen else None for i in range(c.arity)])
    return total


def compose(matrix, c):
    """M∘c, post-composition with a linear map on the target"""
    if matrix.ncols != c.target_dim:
        raise DimensionMismatch(f'cannot compose a {matrix.shape} matrix with target dimension {c.target_dim}')
    values = {key: matrix.apply(vector) for key, vector in c.values.items()}
    return PreCochain(c.weight, c.ambient_dim, matrix.nrows, values)


@dataclass(frozen=True)
class Splitting:
    """A direct sum g₁ ⊕ g₂; indices below ``g_dim`` belong to g₁"""

    g_dim: int
    v_dim: int

    @property
    def total(self):
        return self.g_dim + self.v_dim

    def side(self, index):
        return 0 if index < self.g_dim else 1

    def base_keys(self, weight):
        """Canonical keys of the total space whose arguments all lie in g₁"""
        return pre_keys(weight, self.g_dim)


def lift(f, split, into='g'):
    """Lift a cochain on g₁ to g₁ ⊕ g₂, with values placed in g₁ (``into='g'``) or g₂ (``into='v'``)"""
    if f.ambient_dim != split.g_dim:
        raise DimensionMismatch(f'cochain on dimension {f.ambient_dim} cannot be lifted along {split}')
    if into == 'g':
        if f.target_dim != split.g_dim:
            raise DimensionMismatch('a g-valued lift needs a self-coefficient cochain')
        pad = (Fraction(0),) * split.v_dim
        values = {key: vector + pad for key, vector in f.values.items()}
    elif into == 'v':
        if f.target_dim != split.v_dim:
            raise DimensionMismatch('a V-valued lift needs values of the module dimension')
        pad = (Fraction(0),) * split.g_dim
        values = {key: pad + vector for key, vector in f.values.items()}
    else:
        raise DimensionMismatch(f'unknown lift target {into!r}')
    return PreCochain(f.weight, split.total, split.total, values)


def lift_action(action, split):
    """Weight-1 lift of ρ: ∧²g → End(V), (x,u),(y,v),(z,w) ↦ (0, ρ(x,y)w + ρ(y,z)u + ρ(z,x)v)

    ``action(x, y)`` returns the v_dim×v_dim matrix of ρ(x, y) for any ordered pair in g.
    """
    d = split.g_dim
    pad = (Fraction(0),) * d

    def value(slots, final):
        ((a, b),) = slots
        sides = (split.side(a), split.side(b), split.side(final))
        if sum(sides) != 1:
            return None
        if sides[2]:
            matrix, module_index = action(a, b), final - d
        elif sides[0]:
            matrix, module_index = action(b, final), a - d
        else:
            matrix, module_index = action(final, a), b - d
        column = matrix.column(module_index)
        return pad + column if any(column) else None

    return PreCochain.from_function(1, split.total, split.total, value)


def restrict_to_base(c, split, into='v'):
    """Restrict a cochain on g₁ ⊕ g₂ to arguments in g₁, keeping the g₁ or g₂ component"""
    if c.ambient_dim != split.total:
        raise DimensionMismatch(f'cochain on dimension {c.ambient_dim} does not live on {split}')
    window = slice(split.g_dim, split.total) if into == 'v' else slice(0, split.g_dim)
    target = split.v_dim if into == 'v' else split.g_dim
    values = {}
    for slots, final in split.base_keys(c.weight):
        vector = c.values.get((slots, final))
        if vector is not None:
            values[(slots, final)] = vector[window]
    return PreCochain(c.weight, split.g_dim, target, values)


def bidegree(c, split):
    """The bidegree l|k of a cochain on a split space, or None if it is not homogeneous.

    An argument tuple with i entries from g₁ and j from g₂ may only produce a
    g₁-component when (i, j) = (l+1, k) and a g₂-component when (i, j) = (l, k+1).
    The zero cochain has every bidegree and is reported as None too.
    """
    if c.ambient_dim != split.total:
        raise DimensionMismatch(f'cochain on dimension {c.ambient_dim} does not live on {split}')
    candidates = set()
    for (slots, final), vector in c.values.items():
        args = flatten_pairs(slots) + [final]
        in_g = sum(1 for a in args if a < split.g_dim)
        in_v = len(args) - in_g
        if any(vector[:split.g_dim]):
            candidates.add((in_g - 1, in_v))
        if any(vector[split.g_dim:]):
            candidates.add((in_g, in_v - 1))
        if len(candidates) > 1:
            return None
    if len(candidates) != 1:
        return None
    (degree,) = candidates
    if sum(degree) != 2 * c.weight:
        return None
    return degree

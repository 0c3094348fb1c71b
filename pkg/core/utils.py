from fractions import Fraction
from itertools import combinations
import hashlib
import random


def canonical_pair(a, b):
    """Sign and canonical (a < b) form of a wedge pair; sign 0 on repeats"""
    if a < b:
        return 1, (a, b)
    if a > b:
        return -1, (b, a)
    return 0, None


def sort_with_sign(indices):
    """Sort indices, returning (sign of the sorting permutation, sorted tuple)"""
    items = list(indices)
    if len(set(items)) != len(items):
        return 0, None
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


def shuffles(items, first):
    """Yield (sign, first block, second block) for every (first, rest)-shuffle of items"""
    size = len(items)
    for chosen in combinations(range(size), first):
        chosen_set = set(chosen)
        rest = [i for i in range(size) if i not in chosen_set]
        inversions = sum(position - offset for offset, position in enumerate(chosen))
        sign = -1 if inversions % 2 else 1
        yield sign, [items[i] for i in chosen], [items[i] for i in rest]


def canonical_pairs(dim):
    return list(combinations(range(dim), 2))


def canonical_triples(dim):
    return list(combinations(range(dim), 3))


def parse_scalar(text):
    """Parse "p/q" or "p" into a Fraction, rejecting zero denominators"""
    if isinstance(text, bool):
        raise ValueError('booleans are not scalars')
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f'expected a string "p/q", got {type(text).__name__}')
    text = text.strip()
    numerator, slash, denominator = text.partition('/')
    try:
        p = int(numerator)
        q = int(denominator) if slash else 1
    except ValueError:
        raise ValueError(f'malformed rational "{text}"') from None
    if q == 0:
        raise ValueError(f'zero denominator in "{text}"')
    return Fraction(p, q)


def format_scalar(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def file_digest(path):
    """SHA-256 of a file's bytes"""
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for chunk in iter(lambda: handle.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


def seeded_rng(seed):
    return random.Random(seed)


def random_scalar(rng, spread=3, denominators=(1, 1, 1, 2, 3)):
    """Small random rational, zero about a third of the time"""
    if rng.random() < 0.34:
        return Fraction(0)
    return Fraction(rng.randint(-spread, spread), rng.choice(denominators))

from django.conf import settings
from functools import wraps
from .exceptions import PreconditionFailed


def valid_algebra_required(func):
    """Decorator to ensure the algebra argument satisfies the Fundamental Identity"""
    @wraps(func)
    def wrapper(algebra, *args, **kwargs):
        if not algebra.satisfies_fi:
            raise PreconditionFailed('the bracket does not satisfy the Fundamental Identity')

        return func(algebra, *args, **kwargs)
    return wrapper


def valid_representation_required(func):
    """Decorator to ensure (algebra, representation) arguments form a representation"""
    @wraps(func)
    def wrapper(algebra, representation, *args, **kwargs):
        from threelie.representations import validate_representation

        if not validate_representation(algebra, representation):
            raise PreconditionFailed('the maps do not form a representation of the 3-Lie algebra')

        return func(algebra, representation, *args, **kwargs)
    return wrapper


def compatible_pair_required(func):
    """Decorator to ensure the pair argument is a compatible 3-Lie algebra"""
    @wraps(func)
    def wrapper(pair, *args, **kwargs):
        if not pair.is_compatible:
            raise PreconditionFailed('the two brackets do not form a compatible 3-Lie algebra')

        return func(pair, *args, **kwargs)
    return wrapper


def nijenhuis_required(func):
    """Decorator to ensure the operator has zero torsion for the algebra or pair argument"""
    @wraps(func)
    def wrapper(structure, operator, *args, **kwargs):
        from threelie.nijenhuis import nijenhuis_torsion

        for algebra in getattr(structure, 'brackets', (structure,)):
            if not nijenhuis_torsion(algebra, operator).is_zero():
                raise PreconditionFailed('the operator is not a Nijenhuis operator')

        return func(structure, operator, *args, **kwargs)
    return wrapper


def degree_bound_required(func):
    """Decorator to ensure the requested degree stays within TRILIE_MAX_DEGREE"""
    @wraps(func)
    def wrapper(*args, max_degree, **kwargs):
        if max_degree < 1:
            raise PreconditionFailed('the maximal degree must be at least 1')
        if max_degree > settings.TRILIE_MAX_DEGREE:
            raise PreconditionFailed(
                f'degree {max_degree} exceeds the configured bound {settings.TRILIE_MAX_DEGREE}; '
                'raise TRILIE_MAX_DEGREE to go further'
            )

        return func(*args, max_degree=max_degree, **kwargs)
    return wrapper

class TrilieError(Exception):
    """Base class for every error raised by the algebra apps"""


class DimensionMismatch(TrilieError, ValueError):
    """Operands live on different spaces or an index is out of range"""


class PathDisagreement(TrilieError):
    """Two independent computations of the same quantity differ"""

    def __init__(self, quantity, detail=''):
        self.quantity = quantity
        self.detail = detail
        message = f'{quantity}: the two computation paths disagree'
        if detail:
            message = f'{message} ({detail})'
        super().__init__(message)


class ComplexInconsistency(TrilieError):
    """Image rank exceeds kernel dimension, so d∘d is not zero"""


class PreconditionFailed(TrilieError):
    """An operation was called on data violating its precondition"""

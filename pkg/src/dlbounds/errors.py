"""Exception hierarchy shared by all modules."""


class DLBoundsError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(DLBoundsError, ValueError):
    """An input violates a documented precondition of an operation."""


class ParseError(PreconditionError):
    pass


class AlphabetError(PreconditionError):
    """A symbol lies outside the alphabet {0, ..., q-1}."""


class IllegalTranspositionError(PreconditionError):
    """Swap of two equal neighbours, or a position tuple breaking the gap rule."""


class BudgetExceeded(DLBoundsError):
    """A search or construction ran past its size or time budget."""

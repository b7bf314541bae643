"""Exceptions raised by the dyadic weight toolkit."""


class DyadicError(ValueError):
    """Base class for all errors raised by this package."""


class SplitOutOfRange(DyadicError):
    """A mass-split fraction left the admissible open interval."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NotNested(DyadicError):
    pass


class DivergentSeries(DyadicError):
    """The reverse Hölder series of a periodic weight does not converge."""


class OutOfRange(DyadicError):
    pass


class SizeLimit(DyadicError):
    pass

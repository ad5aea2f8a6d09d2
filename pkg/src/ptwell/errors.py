"""Exception hierarchy shared by the package."""


class PTWellError(Exception):
    """Base class for all errors raised by :mod:`ptwell`."""


class DomainError(PTWellError, ValueError):
    """An argument lies outside the domain of the operation."""


class PTSymmetryBrokenError(PTWellError):
    """A characteristic polynomial that should be real is not.

    Signals a bug in model assembly: every model in the family is
    PT-symmetric, so its spectrum is closed under conjugation.
    """


class NumericFailure(PTWellError):
    """An iterative method did not converge.

    ``best`` holds the last iterate.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SingularPointError(PTWellError):
    """Evaluation hit a removable or genuine singularity."""


class DegeneracyError(PTWellError):
    """Two eigenvalues coincide (exceptional point); no biorthogonal basis exists."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NonConstructibleError(PTWellError):
    """A positive-definite metric cannot be built for the requested model."""


class InconsistencyError(PTWellError):
    """A claimed eigenpoint has no null vector."""

"""Exception hierarchy shared by all modules."""


class PlabicError(Exception):
    """Base class for all package errors."""


class InvalidNetworkError(PlabicError):
    """The input violates the network schema or a structural invariant."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = tuple(diagnostics)


class DegeneracyError(PlabicError):
    """A gauge ray direction or a geometric configuration is not generic."""


class AdmissibilityError(PlabicError):
    """An operation precondition failed (not PBDTP, wrong move pattern, ...)."""


class SingularSystemError(PlabicError):
    """A linear system has no unique solution."""

    def __init__(self, message, kernel=None):
        super().__init__(message)
        self.kernel = kernel


class ConvergenceError(PlabicError):
    """A truncated series did not reach the requested tolerance."""

"""Exception hierarchy shared by every module."""


class SemigroupError(Exception):
    """Base class for all errors raised by this package."""


class NotNumericalError(SemigroupError):
    """Generators have gcd different from 1."""


class PreconditionError(SemigroupError):
    """An operation was called with arguments outside its domain."""


class ResourceError(SemigroupError):
    """A computation would exceed a configured memory ceiling."""


class InvalidAperyError(SemigroupError):
    """A set passed as an Apery set fails exact division."""


class NotTotalError(SemigroupError):
    """A reduction graph is not total (remainders do not fold into an Apery set)."""


class InconsistencyError(SemigroupError):
    """Two independent computations of the same quantity disagree."""


class ValidationError(SemigroupError):
    """Structural violations found in a reduction graph."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InternalError(SemigroupError):
    """State that a valid input cannot reach."""


class DSLError(SemigroupError):
    """Lexical, syntax or evaluation error in an edge-list script."""

    def __init__(self, message, line=0, col=0):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{line}:{col}: {message}")

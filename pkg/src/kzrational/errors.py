"""Exception types shared across the package."""


class KZError(Exception):
    """Base class for all errors raised by kzrational."""


class DimensionMismatch(KZError, ValueError):
    pass


class NonSquare(KZError, ValueError):
    pass


class NoSolution(KZError):
    """Raised by :func:`solve_linear` when ``A X = B`` is inconsistent."""


class BadPoleIndex(KZError, IndexError):
    pass


class CenterMismatch(KZError, ValueError):
    pass


class InvalidSystem(KZError, ValueError):
    pass


class DuplicatePoles(InvalidSystem):
    pass


class PoleCountMismatch(InvalidSystem):
    pass


class BadIndices(KZError, ValueError):
    pass


class NoIntegerEigenvalues(KZError):
    """The residue has no integer eigenvalue, so no Laurent-form local solution exists."""


class BadSeed(KZError, ValueError):
    """The leading coefficient fails the indicial constraint ``(m I - R) b_m = 0``."""


class ConditionsNotSatisfied(KZError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvariantViolated(KZError):
    def __init__(self, message, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class EvaluationAtPole(KZError, ZeroDivisionError):
    pass


class AdjointNotFound(KZError):
    pass


class ParseError(KZError, ValueError):
    """Malformed input document; ``path`` locates the offending field."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)

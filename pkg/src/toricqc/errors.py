"""Exception hierarchy shared by all modules."""


class ToricQCError(Exception):
    """Base class for every error raised by the package."""


class StructuralError(ToricQCError, ValueError):
    """Malformed input: mismatched shapes, bad indices, unknown variables."""


class NoClosedForm(ToricQCError):
    """A series has no rational closed form inside the denominator ansatz."""

    def __init__(self, message, series=None):
        super().__init__(message)
        self.series = series


class InsufficientOrders(ToricQCError):
    """Too few computed orders to determine or certify a closed form."""


class InsufficientTruncation(ToricQCError):
    """The I-function truncation is too small for the requested extraction."""


class HigherOrderPole(ToricQCError):
    pass


class NonIsolatedPole(ToricQCError):
    pass


class EvaluationPole(ToricQCError):
    pass


class PresentationError(ToricQCError):
    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NotClosed(ToricQCError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegeneratePairing(ToricQCError):
    pass


class UnsupportedFan(ToricQCError):
    pass


class ConstructionFailure(ToricQCError):
    pass


class TheoremViolation(ToricQCError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report

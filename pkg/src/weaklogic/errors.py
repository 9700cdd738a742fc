"""Exception hierarchy shared by all weaklogic modules."""


class WeakLogicError(Exception):
    """Base class for every error raised by this package."""


# input validation -----------------------------------------------------------

class ValidationError(WeakLogicError, ValueError):
    """Input violates a documented precondition."""


class ZeroVector(ValidationError):
    pass


class DimMismatch(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotProjector(ValidationError):
    pass


class PreconditionFailed(ValidationError):
    pass


class IncompleteBasis(ValidationError):
    pass


class ParseError(ValidationError):
    """Scenario document could not be parsed."""


class UnknownLabel(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# post-selection ---------------------------------------------------------------

class OrthogonalSelection(WeakLogicError):
    """Pre- and post-selected states are orthogonal; post-selection impossible."""


class UndefinedWeakValue(OrthogonalSelection):
    pass


class PostSelectionVanished(OrthogonalSelection):
    pass


# numerical ----------------------------------------------------------------

class NoConvergence(WeakLogicError):
    def __init__(self, message, iterations=None, defect=None):
        super().__init__(message)
        self.iterations = iterations
        self.defect = defect


class NotProportional(WeakLogicError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class FitUnstable(WeakLogicError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual

"""Exception hierarchy. The CLI maps every subclass to exit code 2."""


class CurveboundError(Exception):
    """Base class."""


class InputError(CurveboundError, ValueError):
    """Malformed coordinates, files or arguments."""


class DomainError(CurveboundError, ValueError):
    """Arguments outside the validity domain of a formula."""


class ScopeError(CurveboundError):
    """The object is outside what the model can handle (e.g. non-contractible loop)."""


class ResolutionError(CurveboundError):
    """Too few samples for the requested accuracy."""


class PreconditionError(CurveboundError):
    """A geometric hypothesis of a check does not hold."""


class AmbiguityError(CurveboundError):
    """Minimizing geodesic is not unique."""


class ParameterError(CurveboundError, ValueError):
    """A required constant was not supplied."""

"""curvebound: curvature, Hausdorff and area bounds for curves on constant-curvature surfaces."""

from .errors import (
    AmbiguityError,
    CurveboundError,
    DomainError,
    InputError,
    ParameterError,
    PreconditionError,
    ResolutionError,
    ScopeError,
)
from .surface import SurfaceKind, SurfaceModel, TangentVec

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError",
    "CurveboundError",
    "DomainError",
    "InputError",
    "ParameterError",
    "PreconditionError",
    "ResolutionError",
    "ScopeError",
    "SurfaceKind",
    "SurfaceModel",
    "TangentVec",
    "__version__",
]

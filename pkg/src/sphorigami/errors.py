"""Exception types raised across the package."""


class SphericalOrigamiError(Exception):
    """Base class for all package errors."""


class ValidationError(SphericalOrigamiError, ValueError):
    """Input fails a geometric precondition (non-unit vector, bad angle, ...)."""


class AntipodalError(ValidationError):
    """Two points are antipodal (or equal) where a unique geodesic is required."""


class CoincidentCirclesError(ValidationError):
    """Two great circles coincide, so their intersection is not a point pair."""


class DegenerateInputError(ValidationError):
    """An axiom's construction is singular for the given inputs."""


class FoldRangeError(SphericalOrigamiError):
    """Fold parameter lies outside the range admitted by the face geometry."""


class CurvePlacementError(SphericalOrigamiError):
    """A 3D fold curve leaves the face that has to host it."""


class TessellationError(SphericalOrigamiError):
    pass


class ParseError(SphericalOrigamiError, ValueError):
    """Malformed pattern document. ``field`` names the offending entry."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)

"""Exception types shared across the package."""


class ConeLabError(Exception):
    """Base class for conelab-specific failures."""


class InvalidConeError(ConeLabError):
    """Cone data is inconsistent (unit not interior, empty gauge mean, ...)."""


class UnsupportedFamilyError(ConeLabError):
    """Operation not defined for this cone family."""


class SizeError(ConeLabError):
    """Problem size exceeds a hard enumeration cap."""


class ModeError(ConeLabError):
    """Requested computation mode is unavailable for the given input."""


class ModelingError(ConeLabError):
    """An optimization problem was ill-posed (e.g. unbounded LP)."""


class DegenerateConeError(ConeLabError):
    """A cone or polytope degenerated (contains a line / is unbounded)."""

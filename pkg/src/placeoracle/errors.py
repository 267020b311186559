"""Exception types shared across the package."""


class OracleError(Exception):
    """Base class for every error raised by this package."""


class InputError(OracleError):
    """Invalid user-supplied data: bad ranges, malformed files, bad arguments."""


class DimensionMismatch(InputError):
    """Vector or matrix dimensions do not agree."""


class InfeasibleTopology(InputError):
    """No storage pair satisfies the minimum-distance constraint."""


class DegenerateDrift(InputError):
    """Drift direction yields a numerically zero motion vector."""


class OracleFormatError(InputError):
    """Oracle file is corrupt, truncated, or carries the wrong magic/version."""

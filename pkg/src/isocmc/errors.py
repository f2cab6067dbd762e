"""Exception types raised across the package."""


class IsoCMCError(Exception):
    """Base class for all errors raised by isocmc."""


class DegenerateError(IsoCMCError, ValueError):
    """A quantity the construction divides by vanished (edge, quad, label)."""


class NotIsotropicError(IsoCMCError, ValueError):
    """A vector was expected in the isotropic hyperplane (X, p) = 0."""


class ClosureError(IsoCMCError):
    """A discrete 1-form fails to close around some elementary quadrilateral."""

    def __init__(self, message, quad=None, residual=None):
        super().__init__(message)
        self.quad = quad
        self.residual = residual


class ConsistencyError(IsoCMCError):
    """Two routes to the same quantity disagree beyond tolerance."""

    def __init__(self, message, where=None, residual=None):
        super().__init__(message)
        self.where = where
        self.residual = residual


class ConfigError(IsoCMCError, ValueError):
    """Invalid job configuration; ``field`` is the dotted path of the offending key."""

    def __init__(self, message, field=None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field

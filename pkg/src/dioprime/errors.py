"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class OutOfRangeError(DomainError):
    """A query reaches past the extent of a precomputed table."""


class ResourceError(RuntimeError):
    """A desk-scale guard (memory, enumeration size, quadrature budget) tripped.

    ``partial`` carries whatever diagnostics were available when the guard fired.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConfigError(ValueError):
    """Malformed or unknown configuration."""

"""Exception hierarchy shared across the package."""


class SvdIfaError(Exception):
    """Base class for all package errors."""


class InputError(SvdIfaError):
    """Bad data: wrong shapes, non-finite entries, out-of-range values."""


class ConfigError(SvdIfaError):
    """Bad configuration: invalid K, epsilon, threshold constant, flags."""


class NumericalError(SvdIfaError):
    """A numerical backend failed (e.g. SVD did not converge)."""

"""Exception types shared across the package."""


class NnlstepError(Exception):
    """Base class for all package errors."""


class InputError(NnlstepError):
    """Malformed profile/config data or parameters outside their domain."""


class ValidationError(NnlstepError):
    """An internal consistency check failed (the result cannot be trusted)."""


class QuadratureError(NnlstepError):
    """Singular quadrature could not deliver the requested accuracy."""


class SingularityError(NnlstepError):
    """Evaluation requested at (or too close to) a solution singularity."""

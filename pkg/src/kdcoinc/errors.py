"""Exception hierarchy.

Every error raised by the math layer derives from :class:`KDCoincError`, which
the CLI maps to exit code 3.
"""


class KDCoincError(Exception):
    pass


class DimensionError(KDCoincError, ValueError):
    """Shapes do not fit the operation (non-square, mismatched sizes)."""


class BoundsError(KDCoincError, IndexError):
    pass


class ValidationError(KDCoincError, ValueError):
    pass


class FormatError(ValidationError):
    """Input document does not follow the JSON matrix/state schema."""


class SizeCapError(KDCoincError):
    """Dimension above the configured enumeration cap."""


class InapplicableError(KDCoincError):
    """The hypotheses of a theorem-based check do not hold for this input."""


class NoStateError(KDCoincError):
    pass


class DegenerateSupportError(KDCoincError):
    pass


class NumericalFailure(KDCoincError):
    pass


class ConvergenceError(KDCoincError):
    pass

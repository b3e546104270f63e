"""Exception types shared across the laboratory."""


class CocycleLabError(Exception):
    """Base class for all laboratory errors."""


class InvalidWordError(CocycleLabError, ValueError):
    """A word contains symbols outside the alphabet of the product."""


class NotHomoclinicError(CocycleLabError, ValueError):
    """Word tails never agree inside the provided window."""


class NonInvertibleMapError(CocycleLabError, ValueError):
    """A matrix map failed the invertibility certification grid."""


class GroupTagError(CocycleLabError, ValueError):
    """A matrix map violates the invariant of its declared group tag."""


class RenormalizationError(CocycleLabError, ArithmeticError):
    """Non-finite or singular values despite periodic renormalization."""


class UnsupportedPipelineError(CocycleLabError, ValueError):
    """The requested pipeline is not implemented for this input."""


class ConfigError(CocycleLabError, ValueError):
    """An experiment configuration or definition file failed validation."""

"""Exception hierarchy shared by all modules."""


class HelicityLabError(Exception):
    """Base class for every error raised by the package."""


class InvalidFieldError(HelicityLabError, ValueError):
    """A field contains non-finite entries or has the wrong shape."""


class GridMismatchError(HelicityLabError, ValueError):
    """Two operands live on different grids."""


class NonRealFieldError(HelicityLabError, ValueError):
    """A spectral field lacks the Hermitian symmetry of a real field."""


class TransversalityError(HelicityLabError, ValueError):
    """A field that must be divergence-free is not."""


class ConstraintViolationError(HelicityLabError, ValueError):
    """Cauchy data violate the vacuum constraints beyond policy."""


class ScenarioError(HelicityLabError, ValueError):
    """Invalid scenario parameters."""


class InsufficientDataError(HelicityLabError, ValueError):
    """A time series is too short for the requested analysis."""


class ConfigError(HelicityLabError, ValueError):
    """Malformed or inconsistent run configuration."""


class DivergenceError(HelicityLabError, ArithmeticError):
    """A non-finite value appeared during time integration."""

    def __init__(self, t, message=None):
        self.t = t
        super().__init__(message or f"non-finite field encountered at t = {t!r}")

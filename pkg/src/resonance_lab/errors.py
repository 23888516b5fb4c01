"""Exception types shared across the package."""


class ResonanceLabError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(ResonanceLabError):
    """Evaluation requested at (or indistinguishably close to) a pole."""


class DiagonalError(ResonanceLabError):
    """Kernel evaluation too close to the diagonal z = z'."""


class DomainError(ResonanceLabError):
    """Argument outside the validity region of a formula."""


class NonConvergenceError(ResonanceLabError):
    """A series did not reach its tolerance within the term budget."""


class TruncationError(ResonanceLabError):
    """An image/mode sum could not be truncated below the requested tail."""


class QuadratureError(ResonanceLabError):
    """Adaptive quadrature failed to reach its tolerance."""


class OverflowBudgetError(ResonanceLabError):
    """Argument exceeds the documented exponent budget."""


class NonUnitaryError(ResonanceLabError):
    """A matrix expected to be unitary failed the tolerance check."""


class InsufficientDataError(ResonanceLabError):
    """Not enough samples for a fit."""


class RadiusExceededError(ResonanceLabError):
    """Counting radius exceeds the enumeration radius of a resonance set."""

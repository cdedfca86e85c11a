"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter or matrix lies outside the documented domain."""


class ExceptionalPointError(DomainError):
    """Operation undefined at the exceptional point (alpha == 1)."""


class BrokenPhaseError(DomainError):
    """Operation requires the unbroken phase (alpha < 1)."""


class NumericalError(ArithmeticError):
    """Numerically degenerate intermediate; cannot occur for valid inputs."""


class DegenerateBranchError(NumericalError):
    """A measurement branch has vanishing probability, so conditional
    probabilities are undefined on it."""

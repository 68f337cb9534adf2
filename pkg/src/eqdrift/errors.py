"""Exception types shared across the package."""


class DomainError(ValueError):
    """A label or field point lies outside the admissible flow domain."""


class ConvergenceError(RuntimeError):
    """An iterative solver stalled before reaching its tolerance."""


class QuadratureError(RuntimeError):
    """Adaptive integration hit its node budget before the tolerance."""

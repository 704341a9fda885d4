"""Exception types shared across the package."""


class NumericalError(ArithmeticError):
    """A computation produced a result that fails its own consistency check."""


class ConvergenceError(NumericalError):
    """An iterative routine did not reach its tolerance."""


class PoleError(ValueError):
    """A special function was evaluated at one of its poles."""

"""Exception hierarchy shared by the library and the CLI."""


class SolitonKitError(Exception):
    """Base class for every error raised by solitonkit."""


class ConfigurationError(SolitonKitError, ValueError):
    """Invalid grid, run configuration or scenario schema."""


class DomainError(SolitonKitError, ValueError):
    """Argument outside the mathematical domain of a formula."""


class ValidationError(SolitonKitError, ValueError):
    """An object failed one of its admissibility checks."""


class NumericalInstabilityError(SolitonKitError, ArithmeticError):
    """A time/space marching solver produced non-finite values.

    ``step`` holds the index of the first offending step.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class IncompleteCollisionError(SolitonKitError):
    """The tracked pulses did not separate again before the end of the run."""


class FitConvergenceError(SolitonKitError):
    """Least-squares fit did not converge; ``best`` carries the best iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best

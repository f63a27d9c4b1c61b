"""Exception hierarchy shared by every subpackage."""


class ReservoirError(Exception):
    """Base class for errors raised by :mod:`rfqrc`."""


class RejectedInputError(ReservoirError, ValueError):
    """Input has the wrong shape, dimension or domain."""


class LengthError(RejectedInputError):
    """A data segment is too short for the requested operation."""


class DegenerateRangeError(RejectedInputError):
    """A component has zero range or zero standard deviation."""


class NumericFailure(ReservoirError, ArithmeticError):
    """Base class for numerical breakdowns (CLI exit code 3)."""


class NumericOverflowError(NumericFailure):
    """A non-finite value appeared inside an integrator stage."""


class DivergenceError(NumericFailure):
    """A trajectory left the admissible box ``|x_i| <= 1e6``.

    The offending step is kept on ``step``.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InitializationError(NumericFailure):
    """Reservoir matrices could not be generated."""


class SolverError(NumericFailure):
    """The ridge system could not be solved."""


class EmptyEnsembleError(ReservoirError):
    """Every member of a generated ensemble was discarded."""


class ConfigError(ReservoirError, ValueError):
    """Experiment configuration is invalid (CLI exit code 2)."""

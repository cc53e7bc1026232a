"""Exception types shared across the package."""


class VarKellyError(Exception):
    """Base class for all errors raised by this package."""


class InfiniteMeanError(VarKellyError):
    """The payoff distribution has no finite mean (Pareto tail with alpha <= 1)."""


class NonConvergenceError(VarKellyError):
    """An iterative routine exhausted its depth/iteration budget before
    reaching the requested tolerance.

    Carries the best value found and its error estimate so callers can
    decide whether the partial answer is still usable.
    """

    def __init__(self, message, value=None, err_estimate=None):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


class ConsistencyError(VarKellyError):
    """Two independent routes to the same quantity disagreed beyond tolerance."""

    def __init__(self, message, expected, actual):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class NotFavorableError(VarKellyError):
    """The game has nonpositive edge, so a positive Kelly fraction does not exist."""


class TradeParseError(VarKellyError):
    """One or more rows of a trade CSV could not be parsed.

    ``errors`` is a list of ``(line_number, reason)`` pairs covering every
    malformed row; ``line`` and ``reason`` expose the first of them.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "; ".join(f"line {n}: {reason}" for n, reason in self.errors)
        super().__init__(f"{len(self.errors)} malformed row(s): {lines}")

    @property
    def line(self):
        return self.errors[0][0]

    @property
    def reason(self):
        return self.errors[0][1]


class EmptyFileError(VarKellyError):
    """The trade file contains no data rows."""


class DegenerateSampleError(VarKellyError):
    """The trade records lack wins or lack losses, so nothing can be estimated."""


class InsufficientTailError(VarKellyError):
    """Too few observations above the tail threshold to fit a Pareto exponent."""


class InfiniteMeanFitError(VarKellyError):
    """The fitted Pareto exponent is <= 1, implying an infinite mean payoff."""

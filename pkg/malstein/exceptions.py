"""
Manually defined exceptions.

Every error raised by the library derives from :class:`MalsteinError`, so
that the command line front end can separate input errors from bugs.
"""


class MalsteinError(Exception):
    """
    Base class for all errors raised by malstein.
    """

    def __init__(self, message=""):
        super().__init__(message)
        self.message = message


class EmptySupportError(MalsteinError):
    """
    Raised when a discrete distribution is given no support points.
    """


class ProbSumNotOneError(MalsteinError):
    """
    Raised when the probabilities of a discrete distribution do not sum to
    one within the absolute tolerance.
    """


class InvalidDistributionError(MalsteinError):
    """
    Raised for non-positive probabilities, repeated support points,
    mismatched lengths or non-finite values.
    """


class SpaceTooLargeError(MalsteinError):
    """
    Raised when a product space would exceed the configured outcome cap.
    """


class DecompositionTooLargeError(MalsteinError):
    """
    Raised when storing the full Hoeffding decomposition of a functional
    would exceed the configured memory budget.
    """


class SubsetOutOfRangeError(MalsteinError):
    pass


class CoordinateOutOfRangeError(MalsteinError):
    pass


class SpaceMismatchError(MalsteinError):
    """
    Raised when two functionals (or a functional and a process) live on
    different product spaces.
    """


class NotCenteredError(MalsteinError):
    pass


class NotTwoPointError(MalsteinError):
    """
    Raised when a Rademacher computation is requested on a space whose
    coordinates are not all supported on {-1, +1}.
    """


class NotDegenerateError(MalsteinError):
    pass


class NotNormalizedError(MalsteinError):
    pass


class ConsistencyError(MalsteinError):
    """
    Raised when an optional cross-check between two exact routes to the
    same quantity fails.
    """


class OutOfRangeError(MalsteinError):
    pass


class BadColorsError(MalsteinError):
    pass


class EmptyGraphError(MalsteinError):
    """
    Raised when a normalized statistic is requested for a graph without
    edges, whose variance vanishes.
    """


class EdgeListError(MalsteinError):
    """
    Base class for edge-list ingestion errors. Carries the (1-based) line
    number of the offending line.
    """

    def __init__(self, message="", line: int = 0):
        super().__init__(message)
        self.line = line


class ParseError(EdgeListError):
    pass


class SelfLoopError(EdgeListError):
    pass


class DuplicateEdgeError(EdgeListError):
    pass


class DegenerateNError(MalsteinError):
    """
    Raised when the index law of a random sum has zero mean.
    """


class RandomSumSpecError(MalsteinError):
    pass


class TooFewSamplesError(MalsteinError):
    pass


class RunConfigError(MalsteinError):
    """
    Raised for invalid or incomplete command line configurations.
    """


class InvalidFunctionalError(MalsteinError):
    """
    Raised when a value table does not match its space or holds non-finite
    entries.
    """

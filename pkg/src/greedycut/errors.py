"""Exception hierarchy shared by every module of the package."""


class GreedyCutError(Exception):
    """Base class for all package errors."""


class InvalidArgs(GreedyCutError, ValueError):
    pass


class ParseError(GreedyCutError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateEdge(GreedyCutError, ValueError):
    pass


class SelfLoop(GreedyCutError, ValueError):
    pass


class NonPositiveWeight(GreedyCutError, ValueError):
    pass


class IsolatedVertex(GreedyCutError, ValueError):
    pass


class IndexOutOfRange(GreedyCutError, IndexError):
    pass


class NonPositiveDegree(GreedyCutError, ValueError):
    pass


class NotNeighbors(GreedyCutError, ValueError):
    pass


class DeadCluster(GreedyCutError, ValueError):
    pass


class QueueEmpty(GreedyCutError, LookupError):
    pass


class QueueExhausted(GreedyCutError, RuntimeError):
    """Raised in strict mode when no neighbor pair is left but more than
    ``c`` clusters remain. ``partition`` and ``trace`` hold the state reached."""

    def __init__(self, message, partition=None, trace=None):
        super().__init__(message)
        self.partition = partition
        self.trace = trace


class EmptyCluster(GreedyCutError, ValueError):
    pass


class LengthMismatch(GreedyCutError, ValueError):
    pass


class TooLarge(GreedyCutError, ValueError):
    pass


class AuditError(GreedyCutError, AssertionError):
    """Incrementally maintained aggregates disagree with a direct recomputation."""

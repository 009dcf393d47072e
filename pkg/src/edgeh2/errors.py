"""Exception hierarchy shared by every module."""


class EdgeH2Error(Exception):
    """Base class for all errors raised by edgeh2."""


class GraphError(EdgeH2Error, ValueError):
    pass


class NonPositiveParameter(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class Disconnected(GraphError):
    pass


class CapExceeded(GraphError):
    pass


class EdgeExists(GraphError):
    pass


class CyclesNotDisjoint(GraphError):
    pass


class NumericalError(EdgeH2Error, ArithmeticError):
    pass


class NumericalFailure(NumericalError):
    pass


class SingularMatrix(NumericalError):
    pass


class DegenerateUpdate(NumericalError):
    pass


class SimulationError(EdgeH2Error):
    pass


class UnstableStep(SimulationError, NumericalError):
    pass


class InvalidConfig(SimulationError, ValueError):
    pass


class ParseError(EdgeH2Error, ValueError):
    """Malformed graph file. ``line`` is 1-based, or None when unknown."""

    def __init__(self, message, line=None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)

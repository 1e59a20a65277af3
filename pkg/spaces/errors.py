"""Exceptions shared by every app of the laboratory.

Management commands map these onto exit codes (see utils.commands).
"""


class LabError(Exception):
    """Domain or parameter error: the request cannot be honoured."""


class ShapeError(LabError):
    pass


class ParameterError(LabError):
    pass


class ConnectivityError(LabError):
    def __init__(self, u, v):
        self.u, self.v = u, v
        super().__init__("graph is disconnected: no path between "
                         "vertices %s and %s" % (u, v))


class ScaleError(LabError):
    pass


class ResamplingExhausted(LabError):
    pass


class InfeasibleFamily(LabError):
    def __init__(self, n, epsilon, best):
        self.n, self.epsilon, self.best = n, epsilon, best
        super().__init__("no graph of order %d certified h >= %s; best bound "
                         "achieved was %s" % (n, epsilon, best))


class ThresholdError(LabError):
    pass


class NotNegativeType(LabError):
    def __init__(self, eigenvalue):
        self.eigenvalue = eigenvalue
        super().__init__("Gram matrix has eigenvalue %.3e; the distances are "
                         "not of negative type" % eigenvalue)


class StalledPivot(LabError):
    def __init__(self, message, dump=''):
        self.dump = dump
        super().__init__(message + ('\n' + dump if dump else ''))


class ConvergenceError(LabError):
    pass


class InvariantViolation(Exception):
    """A computed object broke an invariant it is guaranteed to satisfy."""


class FormatError(Exception):
    """Malformed input file."""

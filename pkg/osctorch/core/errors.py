"""Exceptions raised by osctorch.

Every domain failure derives from `OscError` and from the closest
builtin exception, so that callers can catch either. Messages use
1-based node ids.
"""


class OscError(Exception):
    """Base class for all osctorch errors."""


# ----------------------------------------------------------------------
#   graphs and datasets
# ----------------------------------------------------------------------

class ParseError(OscError, ValueError):
    """Malformed text input (edge list, state spec, CSV)."""


class InvalidEdge(OscError, ValueError):
    """Self-loop or non-positive node id."""


class DuplicateEdge(OscError, ValueError):
    pass


class DisconnectedGraph(OscError, ValueError):
    pass


class UnknownDataset(OscError, LookupError):
    pass


class UndefinedDensity(OscError, ValueError):
    pass


# ----------------------------------------------------------------------
#   linear algebra
# ----------------------------------------------------------------------

class NotSymmetric(OscError, ValueError):
    pass


class NoConvergence(OscError, RuntimeError):
    pass


class DomainError(OscError, ArithmeticError):
    """A scalar function is undefined at some eigenvalue."""


# ----------------------------------------------------------------------
#   dynamics
# ----------------------------------------------------------------------

class InvalidConfig(OscError, ValueError):
    pass


class InvalidMode(OscError, ValueError):
    """Negative modal stiffness."""


class MomentumInconsistency(OscError, ValueError):
    """Free network started with non-zero total momentum."""


class NonZeroInitialState(OscError, ValueError):
    """Forced response requested from a state that is not at rest."""


class GridError(OscError, ValueError):
    """Time not on the grid, or grid not strictly increasing."""


class GridMismatch(OscError, ValueError):
    pass


class NumericalBlowup(OscError, ArithmeticError):

    def __init__(self, time):
        self.time = time
        super().__init__(f'Non-finite state encountered at t={time:g}')


# ----------------------------------------------------------------------
#   analyses
# ----------------------------------------------------------------------

class DominantModeUnexcited(OscError, ValueError):
    """Initial state has no component on the dominant mode."""


class Unsettled(OscError, RuntimeError):

    def __init__(self, nodes, epsilon=None):
        self.nodes = list(nodes)
        self.epsilon = epsilon
        msg = 'Nodes never settle'
        if epsilon is not None:
            msg += f' below epsilon={epsilon:g}'
        super().__init__(msg + f' within the grid: {self.nodes}')


class ResonantKickSingularity(OscError, ArithmeticError):
    pass


class UnbalancedPower(OscError, ValueError):
    pass


class SolveFailure(OscError, RuntimeError):
    pass


class NotSettled(OscError, RuntimeError):
    pass


class NoPeak(OscError, ValueError):
    pass

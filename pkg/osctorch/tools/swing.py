"""Linear swing equation x'' = -gamma x' - L x + p.

Small-signal model of rotor angles on a balanced power grid: p holds
per-node power deviations (generators positive, loads negative) and
must sum to zero. The network settles on a solution of L x~ = p, which
is defined up to a uniform shift; every shift gives the same
trajectory.
"""
import logging
from typing import NamedTuple
import torch
from ..core import constants
from ..core.errors import (UnbalancedPower, SolveFailure, NotSettled, NoPeak,
                           InvalidConfig)
from ..core.linalg import pseudo_inverse
from ..core.utils import as_tensor, default_dtype
from ..dynamics import ConstantPower, NoDrive, State, Trajectory, evolve, \
    regime
from ..network import laplacian, spectrum

logger = logging.getLogger(__name__)


class PowerProfile:
    """Balanced power injections and the common damping coefficient."""

    def __init__(self, p, gamma=1.):
        self.p = as_tensor(p).reshape(-1)
        self.gamma = float(gamma)

    def check(self, n=None):
        if n is not None and len(self.p) != n:
            raise InvalidConfig(f'Power profile has {len(self.p)} entries, '
                                f'graph has {n} nodes')
        if not torch.isfinite(self.p).all():
            raise InvalidConfig('Power profile holds non-finite values')
        if not self.gamma > 0:
            raise InvalidConfig(f'gamma must be > 0, got {self.gamma}')
        total = self.p.sum().item()
        if abs(total) > constants.balance_tol:
            raise UnbalancedPower(f'Power does not balance: sum(p) = '
                                  f'{total:.6g}')
        return self

    def rebalanced(self):
        return PowerProfile(rebalance(self.p), self.gamma)

    def __repr__(self):
        return f'PowerProfile(p={self.p.tolist()}, gamma={self.gamma:g})'


class TransientMetrics(NamedTuple):
    node: int                   # 1-based
    first_peak_value: float
    first_peak_time: float
    steady_state_value: float


def rebalance(p):
    """Subtract the mean so that the injections sum to zero."""
    p = as_tensor(p).reshape(-1)
    return p - p.mean()


def steady_state(g, prof):
    """Minimum-norm solution of L x~ = p."""
    prof.check(g.n)
    x = pseudo_inverse(spectrum(g)) @ prof.p
    residual = (laplacian(g) @ x - prof.p).abs().max().item()
    if residual > constants.zero_eig:
        raise SolveFailure(f'Steady state residual {residual:.3g}')
    return x


def asymptotic_displacement(g, prof):
    """Limit of the trajectory started at rest: x~ - mean(x~)."""
    x = steady_state(g, prof)
    return x - x.mean()


def swing_solve(g, prof, y0=None, times=0., shift=0.):
    """Exact trajectory of the linear swing equation.

        y(t) = y~ + e^{Gt} (y0 - y~),   y~ = (x~ + shift u, 0)

    Parameters
    ----------
    g : Graph
    prof : PowerProfile
    y0 : State, optional
        Default: at rest at the origin.
    times : (T,) tensor_like
    shift : float, default=0
        Uniform offset added to the steady-state representative.
        Does not change the result.

    Returns
    -------
    Trajectory

    """
    y0 = y0 or State.zeros(g.n)
    target = steady_state(g, prof) + shift
    cfg = regime('swing', gamma=prof.gamma)
    free = evolve(g, cfg, NoDrive(), State(y0.x - target, y0.v), times)
    return Trajectory(free.times, free.x + target, free.v)


def swing_drive(prof):
    """The power profile as a constant forcing term."""
    return ConstantPower(prof.p)


def transient_metrics(traj, node, settle_tol=1e-4):
    """First peak and steady value of one node.

    The first peak is the first interior sample where the discrete
    derivative changes sign, so its time resolution is the grid step.

    Raises
    ------
    NotSettled
        If |x(t_end) - x(t_end / 2)| >= settle_tol.
    NoPeak
        If the node moves monotonically.

    """
    if not 1 <= node <= traj.n:
        raise InvalidConfig(f'Node {node} out of range [1, {traj.n}]')
    x = traj.x[:, node - 1]
    times = traj.times
    middle = times[0] + (times[-1] - times[0]) / 2
    k_mid = int(torch.argmin((times - middle).abs()))
    if (x[-1] - x[k_mid]).abs().item() >= settle_tol:
        raise NotSettled(f'Node {node} has not settled by '
                         f't={times[-1].item():g}')
    dx = x[1:] - x[:-1]
    turns = (dx[1:] * dx[:-1] < 0).nonzero().reshape(-1)
    if not len(turns):
        raise NoPeak(f'Node {node} has no interior extremum')
    k = turns[0].item() + 1
    return TransientMetrics(node, x[k].item(), times[k].item(),
                            x[-1].item())

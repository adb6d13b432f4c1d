"""Synchronization of damped networks.

With node stiffness c1 = 1 and inter-node damping alpha*L, every
non-zero Laplacian mode decays and the network converges to a common
oscillation at unit frequency, set by the mean initial position and
velocity. The slowest decay rate `lambda_S` bounds how long this takes.
"""
import math
import logging
from typing import NamedTuple, Optional
import torch
from ..core import constants
from ..core.errors import (DominantModeUnexcited, Unsettled, InvalidConfig,
                           GridError)
from ..core.linalg import eigenspace_projector
from ..core.options import (Option, Validated, positive, optional_positive,
                            one_of)
from ..core.utils import default_dtype, as_times, linspace_grid
from ..dynamics import CouplingConfig, NoDrive, State, Trajectory, evolve
from ..network import spectrum

logger = logging.getLogger(__name__)


class SyncOptions(Option):
    """Options for synchronization analyses"""
    epsilon: float = Validated(1e-3, positive)      # Synchronization threshold
    alpha: float = Validated(1., positive)          # Inter-node damping scale
    order: int = Validated(1, lambda x: isinstance(x, int) and x >= 1)
    dt: float = Validated(0.025, positive)          # Empirical grid step
    horizon: float = Validated(None, optional_positive)  # None: automatic
    on_unexcited: str = Validated('raise', one_of('raise', 'next'))
    settle: str = Validated('stay', one_of('stay', 'first'))


class DominantMode(NamedTuple):
    index: int          # 0-based Laplacian mode
    mu: float
    branch: str         # 'real' or 'complex'
    lam: complex        # G eigenvalue lam_plus


class SyncReport(NamedTuple):
    lambda_S: float
    dominant_mode: DominantMode
    per_node_bound_times: torch.Tensor
    mean_bound_time: float
    epsilon: float
    alpha: float = 1.
    empirical_times: Optional[torch.Tensor] = None
    empirical_mean: Optional[float] = None
    empirical_max: Optional[float] = None
    horizon: Optional[float] = None


def sync_config(alpha=1.):
    """Damped-synchronization coupling: c1 = 1, c2p = alpha."""
    return CouplingConfig(1., 0., 0., alpha)


# ----------------------------------------------------------------------
#   asymptotic state
# ----------------------------------------------------------------------

def asymptotic_state(y0, t):
    """Synchronized state reached from `y0`, evaluated at time `t`.

        x(t) = (cos t sum(x0) + sin t sum(v0)) / n
        v(t) = (-sin t sum(x0) + cos t sum(v0)) / n

    identical for every node.

    Parameters
    ----------
    y0 : State
    t : float

    Returns
    -------
    State

    """
    n = len(y0.x)
    sx, sv = y0.x.sum().item(), y0.v.sum().item()
    c, s = math.cos(t), math.sin(t)
    x = (c * sx + s * sv) / n
    v = (-s * sx + c * sv) / n
    return State(torch.full((n,), x, dtype=default_dtype),
                 torch.full((n,), v, dtype=default_dtype))


def asymptotic_trajectory(y0, times, t0=0.):
    """`asymptotic_state` on a grid, for a state `y0` given at `t0`."""
    times = as_times(times)
    n = len(y0.x)
    sx, sv = y0.x.sum().item(), y0.v.sum().item()
    c, s = torch.cos(times - t0), torch.sin(times - t0)
    x = ((c * sx + s * sv) / n)[:, None].expand(-1, n)
    v = ((-s * sx + c * sv) / n)[:, None].expand(-1, n)
    return Trajectory(times, x.clone(), v.clone())


# ----------------------------------------------------------------------
#   decay rate and bounds
# ----------------------------------------------------------------------

def _lam_plus(b):
    """Less negative root of lam**2 + b lam + 1 = 0, as a complex."""
    if b * b >= 4:
        return complex((-b + math.sqrt(b * b - 4)) / 2)
    return complex(-b / 2, math.sqrt(4 - b * b) / 2)


def _ranked_modes(g, alpha):
    decomp = spectrum(g)
    ranked = [(_lam_plus(alpha * mu).real, i, mu)
              for i, mu in enumerate(decomp.eigenvalues.tolist())
              if mu > constants.zero_eig]
    # stable: ties keep spectral order
    return sorted(ranked, key=lambda r: -r[0])


def dominant_mode(g, alpha=1., order=1):
    """Mode carrying the `order`-th least negative decay rate."""
    ranked = _ranked_modes(g, alpha)
    if not 1 <= order <= len(ranked):
        raise InvalidConfig(f'order must lie in [1, {len(ranked)}], '
                            f'got {order}')
    rate, i, mu = ranked[order - 1]
    lam = _lam_plus(alpha * mu)
    branch = 'complex' if (alpha * mu) ** 2 < 4 else 'real'
    return DominantMode(i, mu, branch, lam)


def lambda_S(g, alpha=1., order=1):
    """Dominant (least negative) decay rate of the damped network.

    lambda_S = max over modes mu > 0 of Re lam_plus(alpha*mu), with
    lam_plus(b) = (-b + sqrt(b**2 - 4)) / 2. `order=2` returns the
    second least negative value (modes counted with multiplicity).
    """
    return dominant_mode(g, alpha, order).lam.real


def sync_time_bounds(g, y0, epsilon=1e-3, alpha=1., order=1,
                     on_unexcited='raise'):
    """Upper bounds on the per-node synchronization times.

    Node i is within `epsilon` of the synchronized state after

        t_i = max(0, log(q_i / epsilon) / |lambda_S|)

    with `q_i = |(psi_S . y0) psi_S(i)|` the contribution of the
    dominant mode to node i. Contributions are computed with the
    dominant eigenspace projector, so that degenerate spectra give
    basis-independent bounds.

    Parameters
    ----------
    g : Graph
    y0 : State
    epsilon : float, default=1e-3
    alpha : float, default=1
    order : int, default=1
        Rank of the decay rate used as dominant.
    on_unexcited : {'raise', 'next'}, default='raise'
        What to do when `y0` has no component on the dominant mode:
        raise `DominantModeUnexcited` or move to the next mode.

    Returns
    -------
    SyncReport

    """
    if not epsilon > 0:
        raise InvalidConfig(f'epsilon must be > 0, got {epsilon}')
    mode = dominant_mode(g, alpha, order)
    proj = eigenspace_projector(spectrum(g), mode.index)
    lam = mode.lam
    # |psi^H y0| |psi(i)| with psi = (phi, lam phi) / sqrt(1 + |lam|^2)
    re = proj @ (y0.x + lam.real * y0.v)
    im = proj @ (lam.imag * y0.v)
    q = (re * re + im * im).sqrt() / (1 + abs(lam) ** 2)

    if q.max().item() < 1e-12:
        if on_unexcited == 'next' and order < len(_ranked_modes(g, alpha)):
            logger.warning('initial state does not excite mode %d; '
                           'falling back to order %d', mode.index + 1,
                           order + 1)
            return sync_time_bounds(g, y0, epsilon, alpha, order + 1,
                                    on_unexcited)
        raise DominantModeUnexcited(
            f'Initial state has no component on the dominant mode '
            f'(mode {mode.index + 1}, mu={mode.mu:.6g})')

    rate = abs(lam.real)
    times = torch.zeros_like(q)
    excited = q > 0
    times[excited] = torch.log(q[excited] / epsilon).clamp_min(0) / rate
    report = SyncReport(lambda_S=lam.real, dominant_mode=mode,
                        per_node_bound_times=times,
                        mean_bound_time=times.mean().item(),
                        epsilon=epsilon, alpha=alpha)
    logger.info('lambda_S=%.7g (mode %d, %s branch), mean bound %.4g',
                lam.real, mode.index + 1, mode.branch,
                report.mean_bound_time)
    return report


def default_horizon(report, y0):
    """Grid horizon for empirical measurements.

    The larger of three mean bound times and twice the time the whole
    initial state needs to decay below epsilon at rate lambda_S.
    """
    norm = y0.norm()
    decay = 0.
    if norm > report.epsilon:
        decay = 2 * math.log(norm / report.epsilon) / abs(report.lambda_S)
    return max(3 * report.mean_bound_time, decay, 1.)


# ----------------------------------------------------------------------
#   empirical measurements
# ----------------------------------------------------------------------

def _deviation(traj):
    ref = asymptotic_trajectory(traj.initial, traj.times,
                                t0=traj.times[0].item())
    return traj.x - ref.x, traj.v - ref.v


def empirical_sync_time(traj, epsilon, settle='stay'):
    """Time after which each node counts as synchronized.

    Parameters
    ----------
    traj : Trajectory
        Trajectory of the damped network. The synchronized state is
        computed from its first sample.
    epsilon : float
    settle : {'stay', 'first'}, default='stay'
        'stay': the node stays within `epsilon` for the rest of the grid.
        'first': the node first drops within `epsilon` after having been
        outside. Oscillating nodes may leave the threshold again later,
        so 'first' gives shorter times.

    Returns
    -------
    per_node : (N,) tensor
    mean : float
    max : float

    Raises
    ------
    Unsettled
        If a node is still outside the threshold at the last sample
        ('stay'), or never enters it ('first').

    """
    if settle not in ('stay', 'first'):
        raise InvalidConfig(f'settle must be stay or first, got {settle!r}')
    dx, _ = _deviation(traj)
    outside = dx.abs() >= epsilon
    times = traj.times
    per_node = torch.empty(traj.n, dtype=default_dtype)
    if settle == 'stay':
        if outside[-1].any():
            nodes = (outside[-1].nonzero().reshape(-1) + 1).tolist()
            raise Unsettled(nodes, epsilon)
        for i in range(traj.n):
            idx = outside[:, i].nonzero().reshape(-1)
            per_node[i] = times[0] if not len(idx) else times[idx[-1] + 1]
        return per_node, per_node.mean().item(), per_node.max().item()

    stuck = []
    for i in range(traj.n):
        idx = outside[:, i].nonzero().reshape(-1)
        if not len(idx):
            per_node[i] = times[0]
            continue
        inside = (~outside[idx[0]:, i]).nonzero().reshape(-1)
        if not len(inside):
            stuck.append(i + 1)
            continue
        per_node[i] = times[idx[0] + inside[0]]
    if stuck:
        raise Unsettled(stuck, epsilon)
    return per_node, per_node.mean().item(), per_node.max().item()


def sync_measure(traj, t, epsilon):
    """Fraction of nodes within `epsilon` of sync at grid time `t`.

    The distance of node i combines position and velocity,
    `d_i = |(x_i, v_i) - (x~_i, v~_i)|`, and `d_i == epsilon` counts
    as synchronized.
    """
    k = traj.index(t)
    dx, dv = _deviation(traj)
    dist = (dx[k] ** 2 + dv[k] ** 2).sqrt()
    return (dist <= epsilon).to(default_dtype).mean().item()


def deviation_gap(traj):
    """Mean absolute position deviation from sync, per sample."""
    dx, _ = _deviation(traj)
    return dx.abs().mean(dim=1)


def decay_rate(traj, t_from=None, t_to=None, floor=1e-12):
    """Fitted exponential rate of the largest deviation from sync.

    Least-squares slope of `log max_i |x_i - x~_i|` against time,
    restricted to `[t_from, t_to]` and to deviations above `floor`.
    """
    dx, _ = _deviation(traj)
    dev = dx.abs().max(dim=1).values
    keep = dev > floor
    if t_from is not None:
        keep &= traj.times >= t_from
    if t_to is not None:
        keep &= traj.times <= t_to
    if keep.sum() < 2:
        raise GridError('Not enough samples to fit a decay rate')
    t = traj.times[keep]
    y = dev[keep].log()
    t = t - t.mean()
    return ((t * (y - y.mean())).sum() / (t * t).sum()).item()


def measure_sync(g, y0, opt=None, **kwopt):
    """Analytic bounds plus empirical settling times.

    Parameters
    ----------
    g : Graph
    y0 : State
    opt : SyncOptions or dict, optional

    Returns
    -------
    SyncReport
        With `empirical_*` fields filled in.

    """
    opt = SyncOptions().update(opt, **kwopt)
    report = sync_time_bounds(g, y0, opt.epsilon, opt.alpha, opt.order,
                              opt.on_unexcited)
    horizon = opt.horizon or default_horizon(report, y0)
    horizon = math.ceil(horizon / opt.dt) * opt.dt
    times = linspace_grid(horizon, opt.dt)
    traj = evolve(g, sync_config(opt.alpha), NoDrive(), y0, times)
    per_node, mean, worst = empirical_sync_time(traj, opt.epsilon,
                                             opt.settle)
    logger.info('empirical sync: mean %.4g, max %.4g (horizon %.4g)',
                mean, worst, horizon)
    return report._replace(empirical_times=per_node, empirical_mean=mean,
                           empirical_max=worst, horizon=horizon)

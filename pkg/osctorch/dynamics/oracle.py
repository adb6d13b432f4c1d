"""Fixed-step Runge-Kutta integration of y' = G y + b(t).

The oracle shares nothing with the modal solvers apart from `build_G`,
and is used to validate every closed form.
"""
import math
import logging
from typing import NamedTuple, Any
import torch
from ..core.errors import NumericalBlowup, GridError, GridMismatch
from ..core.utils import default_dtype
from ._system import build_G
from ._types import NoDrive, State, Trajectory

logger = logging.getLogger(__name__)


class OracleRun(NamedTuple):
    """A sampled RK4 run and what produced it."""
    dt: float
    horizon: float
    trajectory: Trajectory
    graph: Any
    cfg: Any
    drive: Any


def rk4_solve(func, y0, dt, horizon, sample_every=1, t0=0.):
    """Classical 4th-order Runge-Kutta with a fixed step.

    Parameters
    ----------
    func : callable(t: float, y: tensor) -> tensor
        Right-hand side.
    y0 : tensor
        Initial value (any shape).
    dt : float
        Step size.
    horizon : float
        Final time minus `t0`; must be a multiple of `dt`.
    sample_every : int, default=1
        Keep one state every `sample_every` steps. The initial and final
        states are always kept.
    t0 : float, default=0

    Returns
    -------
    times : (T,) tensor
    states : (T, *y0.shape) tensor

    Raises
    ------
    NumericalBlowup
        If a non-finite value appears.

    """
    if not dt > 0 or not horizon > 0:
        raise GridError('dt and horizon must be positive')
    steps = int(round(horizon / dt))
    if abs(steps * dt - horizon) > 1e-9 * max(1., horizon):
        raise GridError(f'horizon={horizon:g} is not a multiple of '
                        f'dt={dt:g}')
    sample_every = max(1, int(sample_every))

    y = torch.as_tensor(y0, dtype=default_dtype).clone()
    times, states = [t0], [y.clone()]
    half = dt / 2
    for step in range(steps):
        t = t0 + step * dt
        k1 = func(t, y)
        k2 = func(t + half, y + half * k1)
        k3 = func(t + half, y + half * k2)
        k4 = func(t + dt, y + dt * k3)
        y = y + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not torch.isfinite(y).all():
            raise NumericalBlowup(t + dt)
        if (step + 1) % sample_every == 0 or step + 1 == steps:
            times.append(t0 + (step + 1) * dt)
            states.append(y.clone())
    logger.debug('rk4: %d steps of %g, %d samples', steps, dt, len(times))
    return torch.as_tensor(times, dtype=default_dtype), torch.stack(states)


def rk4_integrate(g, cfg, drive, y0, dt, horizon, sample_every=1):
    """Integrate the network equations with RK4.

    Parameters
    ----------
    g : Graph
    cfg : CouplingConfig
    drive : NoDrive or Sinusoid or ConstantPower
    y0 : State
    dt : float
    horizon : float
    sample_every : int, default=1

    Returns
    -------
    Trajectory

    """
    return oracle_run(g, cfg, drive, y0, dt, horizon, sample_every).trajectory


def oracle_run(g, cfg, drive, y0, dt, horizon, sample_every=1):
    """Same as `rk4_integrate`, returning an `OracleRun` record."""
    drive = (drive or NoDrive()).check(g.n)
    n = g.n
    mat = build_G(g, cfg)
    zeros = torch.zeros(n, dtype=default_dtype)

    if drive.kind is None:
        def func(t, y):
            return mat @ y
    else:
        def func(t, y):
            return mat @ y + torch.cat([zeros, drive.force(t, n)])

    times, states = rk4_solve(func, State(*y0).as_vector(), dt, horizon,
                              sample_every)
    traj = Trajectory(times, states[:, :n], states[:, n:])
    return OracleRun(dt, horizon, traj, g, cfg, drive)


def max_deviation(a, b, tol=1e-9):
    """Largest absolute difference between two trajectories.

    Positions and velocities are both compared.

    Raises
    ------
    GridMismatch
        If the time grids differ.

    """
    if len(a) != len(b) or a.n != b.n or \
            (a.times - b.times).abs().max().item() > tol:
        raise GridMismatch('Trajectories are sampled on different grids')
    dx = (a.x - b.x).abs().max().item()
    dv = (a.v - b.v).abs().max().item()
    return max(dx, dv)


def convergence_order(errors, dts):
    """Observed order of accuracy: slope of log(error) against log(dt)."""
    x = torch.as_tensor([math.log(d) for d in dts], dtype=default_dtype)
    y = torch.as_tensor([math.log(e) for e in errors], dtype=default_dtype)
    x = x - x.mean()
    return ((x * (y - y.mean())).sum() / (x * x).sum()).item()

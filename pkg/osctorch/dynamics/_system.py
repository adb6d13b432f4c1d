"""Network solvers assembled mode by mode.

All regimes are evaluated in the Laplacian eigenbasis: the initial
state and the forcing are projected on each eigenvector, each mode is
solved exactly by `mode_response`, and positions/velocities are
reassembled as `x(t) = sum_i x_i(t) phi_i`. Solutions are therefore
exact at every grid point and insensitive to the basis chosen inside
degenerate eigenspaces.
"""
import cmath
import math
import logging
import torch
from ..core import constants
from ..core.errors import (MomentumInconsistency, NonZeroInitialState,
                           InvalidConfig)
from ..core.utils import default_dtype, as_times, outer_sum
from ..network import laplacian, spectrum
from ._modal import mode_response
from ._types import (CouplingConfig, NoDrive, State, Trajectory, GEigenpair,
                     ScalarDrive)

logger = logging.getLogger(__name__)


def build_G(g, cfg):
    """State matrix of y' = G y + b(t), with y = (x, v).

    G = [[0, I], [-(c1 I + c2 L), -(c1p I + c2p L)]]
    """
    n = g.n
    lap = laplacian(g)
    eye = torch.eye(n, dtype=default_dtype)
    top = torch.cat([torch.zeros(n, n, dtype=default_dtype), eye], 1)
    bottom = torch.cat([-(cfg.c1 * eye + cfg.c2 * lap),
                        -(cfg.c1p * eye + cfg.c2p * lap)], 1)
    return torch.cat([top, bottom], 0)


def eig_G(g, alpha=1.):
    """Eigenstructure of G = [[0, I], [-I, -alpha L]].

    Each Laplacian mode carries a pair of reciprocal eigenvalues

        lam = (-alpha mu +/- sqrt(alpha**2 mu**2 - 4)) / 2

    which are complex conjugate when `alpha*mu < 2`, with eigenvectors
    `(phi, lam phi) / sqrt(1 + |lam|**2)`.

    Parameters
    ----------
    g : Graph
    alpha : float, default=1
        Scale of the inter-node damping.

    Returns
    -------
    list[GEigenpair]
        One entry per Laplacian mode, in spectral order.

    """
    if not alpha > 0:
        raise InvalidConfig(f'alpha must be > 0, got {alpha}')
    decomp = spectrum(g)
    phi = decomp.eigenvectors.to(torch.complex128)
    pairs = []
    for i, mu in enumerate(decomp.eigenvalues.tolist()):
        b = alpha * mu
        root = cmath.sqrt(b * b - 4)
        lam_p, lam_m = (-b + root) / 2, (-b - root) / 2
        norm_p = 1 / math.sqrt(1 + abs(lam_p) ** 2)
        norm_m = 1 / math.sqrt(1 + abs(lam_m) ** 2)
        vec_p = torch.cat([phi[:, i], lam_p * phi[:, i]]) * norm_p
        vec_m = torch.cat([phi[:, i], lam_m * phi[:, i]]) * norm_m
        pairs.append(GEigenpair(i, mu, lam_p, lam_m, (norm_p, norm_m),
                                vec_p, vec_m))
    return pairs


def _check_inputs(g, cfg, drive, y0, superpose):
    cfg.check()
    drive.check(g.n)
    if y0.n != g.n:
        raise InvalidConfig(f'Initial state has {y0.n} nodes, graph has '
                            f'{g.n}')
    if drive.kind == 'sinusoid' and not superpose and \
            (y0.x.any() or y0.v.any()):
        raise NonZeroInitialState('Forced responses start at rest; pass '
                                  'superpose=True to add the free '
                                  'response of a non-zero initial state')
    if cfg.is_free():
        momentum = y0.v.sum().item()
        if abs(momentum) > constants.zero_eig:
            raise MomentumInconsistency(
                f'Free network: initial velocities must sum to zero '
                f'(got {momentum:.6g})')


def evolve(g, cfg, drive, y0, times, superpose=False):
    """Exact trajectory of the network.

    Parameters
    ----------
    g : Graph
    cfg : CouplingConfig
    drive : NoDrive or Sinusoid or ConstantPower
    y0 : State
        State at t = 0.
    times : (T,) tensor_like
        Evaluation times (need not be uniform).
    superpose : bool, default=False
        Allow a sinusoidal drive to act on a non-zero initial state.

    Returns
    -------
    Trajectory

    Raises
    ------
    MomentumInconsistency
        Free network (c1 = c1p = c2p = 0) with non-zero total velocity.
    NonZeroInitialState
        Sinusoidal drive from a state not at rest, without `superpose`.

    """
    drive = drive or NoDrive()
    _check_inputs(g, cfg, drive, y0, superpose)
    times = as_times(times)

    decomp = spectrum(g)
    phi = decomp.eigenvectors
    cx = phi.t() @ y0.x
    cv = phi.t() @ y0.v
    drives = drive.modal(phi)

    xs, vs = [], []
    for i, mu in enumerate(decomp.eigenvalues.tolist()):
        xi, vi = mode_response(cfg.stiffness(mu), cfg.damping(mu),
                               cx[i].item(), cv[i].item(), drives[i], times)
        xs.append(torch.broadcast_to(torch.as_tensor(xi), times.shape))
        vs.append(torch.broadcast_to(torch.as_tensor(vi), times.shape))
    x = outer_sum(torch.stack(xs, -1), phi)
    v = outer_sum(torch.stack(vs, -1), phi)
    logger.debug('evolve: n=%d, %d samples, cfg=%s, drive=%r',
                 g.n, len(times), cfg.as_tuple(), drive)
    return Trajectory(times, x, v)


def propagators(g, cfg, t):
    """Per-mode 2x2 propagators of the free dynamics at time `t`.

    Returns
    -------
    (N, 2, 2) tensor
        `out[i] = [[x from (1, 0), x from (0, 1)],
                   [v from (1, 0), v from (0, 1)]]`

    """
    decomp = spectrum(g)
    t = torch.as_tensor(float(t), dtype=default_dtype)
    blocks = []
    for mu in decomp.eigenvalues.tolist():
        w2, gamma = cfg.stiffness(mu), cfg.damping(mu)
        xa, va = mode_response(w2, gamma, 1., 0., ScalarDrive(), t)
        xb, vb = mode_response(w2, gamma, 0., 1., ScalarDrive(), t)
        blocks.append([[float(xa), float(xb)], [float(va), float(vb)]])
    return torch.as_tensor(blocks, dtype=default_dtype)


def expm_via_modes(g, cfg, t):
    """Matrix exponential e^{Gt}, assembled from modal propagators.

    For cfg = (1, 1, 0, 0) this is
    [[cos Bt, B^-1 sin Bt], [-B sin Bt, cos Bt]] with B = sqrt(I + L).
    """
    cfg.check()
    phi = spectrum(g).eigenvectors
    prop = propagators(g, cfg, t)

    def assemble(coef):
        return (phi * coef) @ phi.t()

    top = torch.cat([assemble(prop[:, 0, 0]), assemble(prop[:, 0, 1])], 1)
    bottom = torch.cat([assemble(prop[:, 1, 0]), assemble(prop[:, 1, 1])], 1)
    return torch.cat([top, bottom], 0)


def energy(g, cfg, state):
    """Mechanical energy 1/2 |v|^2 + 1/2 x^T (c1 I + c2 L) x."""
    x, v = state
    kinetic = 0.5 * (v * v).sum(-1)
    potential = 0.5 * (cfg.c1 * (x * x).sum(-1)
                       + cfg.c2 * ((x @ laplacian(g)) * x).sum(-1))
    return kinetic + potential


def trajectory_energy(g, cfg, traj):
    """Energy at every sample of a trajectory, as a (T,) tensor."""
    return energy(g, cfg, State(traj.x, traj.v))

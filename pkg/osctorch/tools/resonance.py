"""Resonance of networks driven at one node.

A sinusoid of frequency w applied to node h excites mode i in
proportion to phi_i(h) and is felt at node k in proportion to
phi_i(k). Without damping, driving at a modal frequency
w_i = sqrt(c1 + c2 mu_i) makes the amplitude grow linearly in time at
every node where both components are non-zero. With damping
c2p = 1, only the synchronized mode (w = 1) still resonates.
"""
import cmath
import math
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, List
import torch
from ..core import constants
from ..core.errors import (DomainError, ResonantKickSingularity, NoPeak,
                           InvalidConfig)
from ..core.linalg import eigenspace_projector, pseudo_inverse
from ..core.options import Option, Validated, positive
from ..core.utils import default_dtype, as_times, linspace_grid
from ..dynamics import (CouplingConfig, Sinusoid, State, Trajectory, evolve,
                        regime)
from ..network import spectrum

logger = logging.getLogger(__name__)


class SweepOptions(Option):
    """Options for frequency sweeps"""
    F0: float = 1.                                  # Drive amplitude
    damped: bool = False                            # c2p = 1 instead of c2 = 1
    t_max: float = Validated(100., positive)
    dt: float = Validated(0.05, positive)
    jobs: int = Validated(1, lambda x: isinstance(x, int) and x >= 1)


class ResonanceReport(NamedTuple):
    frequencies: torch.Tensor       # (N,) descending
    source: int                     # 1-based node
    mode: int                       # 1-based mode
    classification: List[str]       # per node: resonant/transparent/blocked
    phase: List[int]                # per node: +1, 0, -1
    influence: torch.Tensor         # (N,) projector row P[h, :]


def resonance_frequencies(g, c1=1., c2=1.):
    """Modal frequencies sqrt(c1 + c2 mu_i), in decreasing order."""
    mu = spectrum(g).eigenvalues
    radicand = c1 + c2 * mu
    if (radicand < -1e-12).any():
        bad = radicand.min().item()
        raise DomainError(f'Negative squared frequency {bad:.6g}')
    return radicand.clamp_min(0).sqrt()


def _at_rest(g, h, F0, omega):
    return Sinusoid(h, F0, omega).check(g.n), State.zeros(g.n)


def forced_undamped(g, h, F0, omega, times, c1=1., c2=1.):
    """Response of the undamped network, from rest, to F0 sin(w t) at h.

    x_k(t) = F0 w sum_i phi_i(h) phi_i(k) / (w^2 - w_i^2)
                 * (sin(w_i t) / w_i - sin(w t) / w)

    with the secular limit at w = w_i.
    """
    drive, y0 = _at_rest(g, h, F0, omega)
    cfg = CouplingConfig(c1, c2, 0., 0.).check()
    return evolve(g, cfg, drive, y0, times)


def forced_damped(g, h, F0, omega, times):
    """Response of the damped network (c1 = 1, c2p = 1), from rest."""
    drive, y0 = _at_rest(g, h, F0, omega)
    return evolve(g, regime('damped-forced'), drive, y0, times)


def damped_forced_reference(g, h, F0, omega, times, return_residue=False):
    """Closed-form damped forced response, written out term by term.

    Independent of the modal engine: each non-zero mode contributes

        F0 phi_i(h) phi_i(k) / ((w^2 + l-^2)(w^2 + l+^2))
            * [(1 - w^2) sin wt - mu_i w cos wt
               + (w / xi_i) ((w^2 + l-^2) e^{l+ t} - (w^2 + l+^2) e^{l- t})]

    with l+- the roots of l^2 + mu_i l + 1 and xi_i = sqrt(mu_i^2 - 4),
    which are complex when mu_i < 2, and the synchronized mode adds
    (F0 / n) (w sin t - sin wt) / (w^2 - 1).

    Parameters
    ----------
    return_residue : bool, default=False
        Also return the largest imaginary part discarded.

    Raises
    ------
    DomainError
        At w = 1 or when some mu_i = 2 (removable singularities).

    """
    times = as_times(times)
    if abs(omega - 1) < constants.resonance_tol:
        raise DomainError('Reference formula is singular at w = 1')
    decomp = spectrum(g)
    n = g.n
    phi = decomp.eigenvectors
    t = times.to(torch.complex128)
    w = omega
    sin_wt, cos_wt = torch.sin(w * times), torch.cos(w * times)
    x = torch.zeros(len(times), n, dtype=torch.complex128)
    v = torch.zeros(len(times), n, dtype=torch.complex128)
    for i, mu in enumerate(decomp.eigenvalues.tolist()):
        if mu <= constants.zero_eig:
            continue
        xi = cmath.sqrt(mu * mu - 4)
        if abs(xi) < 1e-9:
            raise DomainError('Reference formula is singular at mu = 2')
        lp, lm = (-mu + xi) / 2, (-mu - xi) / 2
        ap, am = w * w + lm * lm, w * w + lp * lp
        den = ap * am
        ep, em = torch.exp(lp * t), torch.exp(lm * t)
        xb = ((1 - w * w) * sin_wt - mu * w * cos_wt
              + (w / xi) * (ap * ep - am * em))
        vb = ((1 - w * w) * w * cos_wt + mu * w * w * sin_wt
              + (w / xi) * (ap * lp * ep - am * lm * em))
        weight = (F0 * phi[h - 1, i] * phi[:, i]).to(torch.complex128) / den
        x += xb[:, None] * weight
        v += vb[:, None] * weight
    zx = (w * torch.sin(times) - sin_wt) / (w * w - 1)
    zv = (w * torch.cos(times) - w * cos_wt) / (w * w - 1)
    x += (F0 / n) * zx[:, None]
    v += (F0 / n) * zv[:, None]
    traj = Trajectory(times, x.real, v.real)
    if return_residue:
        residue = max(x.imag.abs().max().item(), v.imag.abs().max().item())
        return traj, residue
    return traj


def influence(g, h, k, i):
    """Product phi_i(h) phi_i(k) (1-based node and mode indices)."""
    phi = spectrum(g).eigenvectors
    return (phi[h - 1, i - 1] * phi[k - 1, i - 1]).item()


def resonance_map(g, h, mode, tol=1e-6):
    """Which nodes resonate when node `h` drives mode `mode`.

    Components are measured with the eigenspace projector P of the
    mode, so degenerate eigenvalues are handled basis-independently:

    * `|P e_h| < tol`: the source cannot excite the mode, all nodes
      are 'blocked';
    * otherwise node k is 'transparent' when `|P e_k| < tol` and
      'resonant' else.

    The phase of node k is the sign of P[h, k]: +1 for nodes moving
    with the source, -1 against it, 0 at rest.

    Parameters
    ----------
    g : Graph
    h : int
        1-based source node.
    mode : int
        1-based mode index (spectral order, with multiplicity).
    tol : float, default=1e-6

    Returns
    -------
    ResonanceReport

    """
    decomp = spectrum(g)
    if not 1 <= h <= g.n:
        raise InvalidConfig(f'Source node {h} out of range [1, {g.n}]')
    if not 1 <= mode <= g.n:
        raise InvalidConfig(f'Mode {mode} out of range [1, {g.n}]')
    proj = eigenspace_projector(decomp, mode - 1)
    row = proj[h - 1]
    reach = proj.diagonal().clamp_min(0).sqrt()    # |P e_k|
    if reach[h - 1] < tol:
        labels = ['blocked'] * g.n
        phase = [0] * g.n
    else:
        labels, phase = [], []
        for k in range(g.n):
            if reach[k] < tol:
                labels.append('transparent')
                phase.append(0)
            else:
                labels.append('resonant')
                p = row[k].item()
                phase.append(0 if abs(p) < tol * tol else
                             (1 if p > 0 else -1))
    return ResonanceReport(resonance_frequencies(g), h, mode, labels, phase,
                           row.clone())


def vibrational_communicability(g, h=None, k=None):
    """Entries of the Laplacian pseudo-inverse L+.

    Returns the full matrix when `h` and `k` are omitted.
    """
    mat = pseudo_inverse(spectrum(g))
    if h is None and k is None:
        return mat
    return mat[h - 1, k - 1].item()


# ----------------------------------------------------------------------
#   single oscillator
# ----------------------------------------------------------------------

def single_oscillator(omega0, m, F0, omega, force_kind='sinusoid', t=0.):
    """Undamped oscillator m x'' = -m omega0^2 x + F(t), from rest.

    Parameters
    ----------
    omega0 : float
        Proper frequency.
    m : float
        Mass.
    F0 : float
        Force amplitude.
    omega : float
        Drive frequency.
    force_kind : {'sinusoid', 'delta_train'}
        'sinusoid': F(t) = F0 sin(omega t).
        'delta_train': kicks of impulse F0 at t = 2 pi k / omega,
        k = 1, 2, ... The returned state is the one just after the
        kicks at or before `t`.
    t : float or tensor

    Returns
    -------
    x, v : float or tensor

    Raises
    ------
    ResonantKickSingularity
        For a delta train with sin(pi omega0 / omega) = 0, where every
        kick adds in phase.

    """
    if not m > 0 or not omega0 > 0 or not omega > 0:
        raise InvalidConfig('m, omega0 and omega must be > 0')
    scalar = not torch.is_tensor(t)
    t = torch.as_tensor(t, dtype=default_dtype)
    if force_kind == 'sinusoid':
        x, v = _single_sinusoid(omega0, m, F0, omega, t)
    elif force_kind == 'delta_train':
        x, v = _single_kicks(omega0, m, F0, omega, t)
    else:
        raise InvalidConfig(f'Unknown force kind {force_kind!r}')
    if scalar:
        return x.item(), v.item()
    return x, v


def _single_sinusoid(w0, m, F0, w, t):
    if abs(w - w0) < constants.resonance_tol:
        k = F0 / (2 * m * w0)
        x = k * (torch.sin(w0 * t) / w0 - t * torch.cos(w0 * t))
        v = k * w0 * t * torch.sin(w0 * t)
        return x, v
    k = F0 * w / (m * (w0 * w0 - w * w))
    x = k * (torch.sin(w * t) / w - torch.sin(w0 * t) / w0)
    v = k * (torch.cos(w * t) - torch.cos(w0 * t))
    return x, v


def _single_kicks(w0, m, F0, w, t):
    half = math.pi * w0 / w
    denom = math.sin(half)
    if abs(denom) < 1e-12:
        raise ResonantKickSingularity(
            f'Kicks at frequency {w:g} are in phase with the proper '
            f'frequency {w0:g}')
    period = 2 * math.pi / w
    # number of kicks received so far; tolerate round-off at kick times
    count = torch.floor(t / period + 1e-9).clamp_min(0)
    # sum_{k=1}^{N} sin(w0 t - 2 k half) via the Dirichlet kernel
    spread = torch.sin(count * half) / denom
    phase = w0 * t - (count + 1) * half
    x = F0 / (m * w0) * spread * torch.sin(phase)
    v = F0 / m * spread * torch.cos(phase)
    return x, v


# ----------------------------------------------------------------------
#   envelopes and sweeps
# ----------------------------------------------------------------------

def envelope_slope(times, x, start_fraction=0.5):
    """Linear growth rate of the oscillation envelope.

    Local maxima of |x| in the last `1 - start_fraction` of the horizon
    are fitted by least squares against time.

    Raises
    ------
    NoPeak
        If fewer than two peaks are found.

    """
    times = as_times(times)
    x = torch.as_tensor(x, dtype=default_dtype).reshape(-1).abs()
    t0 = times[0] + start_fraction * (times[-1] - times[0])
    mid = x[1:-1]
    peaks = (mid > x[:-2]) & (mid >= x[2:]) & (times[1:-1] >= t0)
    idx = peaks.nonzero().reshape(-1) + 1
    if len(idx) < 2:
        raise NoPeak('Fewer than two envelope peaks')
    t = times[idx]
    y = x[idx]
    t = t - t.mean()
    return ((t * (y - y.mean())).sum() / (t * t).sum()).item()


def _sweep_one(g, h, omega, opt, times):
    if opt.damped:
        traj = forced_damped(g, h, opt.F0, omega, times)
    else:
        traj = forced_undamped(g, h, opt.F0, omega, times)
    return traj.x.abs().max(dim=0).values


def frequency_sweep(g, h, omegas, opt=None, **kwopt):
    """Peak displacement of every node over a range of drive frequencies.

    Parameters
    ----------
    g : Graph
    h : int
        1-based driven node.
    omegas : sequence[float]
    opt : SweepOptions or dict, optional

    Returns
    -------
    (len(omegas), N) tensor
        `sup_t |x_k(t)|` over the grid `[0, t_max]`.

    """
    opt = SweepOptions().update(opt, **kwopt)
    omegas = [float(w) for w in omegas]
    times = linspace_grid(opt.t_max, opt.dt)
    logger.info('sweeping %d frequencies on %d worker(s)',
                len(omegas), opt.jobs)
    if opt.jobs == 1:
        rows = [_sweep_one(g, h, w, opt, times) for w in omegas]
    else:
        spectrum(g)  # cache before threads share the graph
        with ThreadPoolExecutor(max_workers=opt.jobs) as executor:
            futures = [executor.submit(_sweep_one, g, h, w, opt, times)
                       for w in omegas]
            rows = [fut.result() for fut in futures]
    return torch.stack(rows) if rows else torch.zeros(0, g.n)

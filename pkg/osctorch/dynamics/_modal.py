"""Exact solution of one modal equation

    x'' + gamma x' + w2 x = drive(t),    x(0) = x0, x'(0) = v0

Every network solution is assembled from these scalar responses, one per
Laplacian mode, with `w2 = c1 + c2*mu` and `gamma = c1p + c2p*mu`.
"""
import math
import logging
import torch
from ..core import constants
from ..core.errors import InvalidMode
from ..core.utils import default_dtype
from ._types import ScalarDrive

logger = logging.getLogger(__name__)

# Below this, a stiffness or damping coefficient is an exact zero.
_tiny = 1e-12


def mode_solve(mu, cfg, x0, v0, drive=None, t=0.):
    """Solve the equation of motion of one Laplacian mode.

    Parameters
    ----------
    mu : float
        Laplacian eigenvalue of the mode.
    cfg : CouplingConfig
    x0, v0 : float
        Initial modal position and velocity.
    drive : ScalarDrive, optional
        Modal forcing (zero, sinusoid or constant).
    t : float or (T,) tensor
        Evaluation time(s).

    Returns
    -------
    x, v : float or (T,) tensor
        Same type as `t`.

    Raises
    ------
    InvalidMode
        If the modal stiffness `c1 + c2*mu` is negative.

    """
    scalar = not torch.is_tensor(t)
    t = torch.as_tensor(t, dtype=default_dtype)
    x, v = mode_response(cfg.stiffness(mu), cfg.damping(mu),
                         x0, v0, drive, t)
    if scalar:
        return x.item(), v.item()
    return x, v


def mode_response(w2, gamma, x0, v0, drive, t):
    """Modal response for given stiffness `w2` and damping `gamma`."""
    if w2 < -_tiny:
        raise InvalidMode(f'Negative modal stiffness {w2:.6g}')
    w2 = max(w2, 0.)
    gamma = max(gamma, 0.)
    drive = drive or ScalarDrive()
    x0, v0 = float(x0), float(v0)

    if drive.kind == 'constant' and drive.amplitude != 0:
        return _constant(w2, gamma, x0, v0, drive.amplitude, t)
    if drive.kind == 'sinusoid' and drive.amplitude != 0:
        return _sinusoid(w2, gamma, x0, v0, drive.amplitude,
                         drive.frequency, t)
    return homogeneous(w2, gamma, x0, v0, t)


def homogeneous(w2, gamma, x0, v0, t):
    """Free response, branching on the sign of gamma**2 - 4*w2."""
    if w2 < _tiny and gamma < _tiny:
        return x0 + v0 * t, torch.full_like(t, v0)

    sigma = gamma / 2
    disc = gamma * gamma - 4 * w2
    if abs(disc) < constants.critical_tol:
        # double root -sigma
        decay = torch.exp(-sigma * t)
        b = v0 + sigma * x0
        return (x0 + b * t) * decay, (v0 - sigma * b * t) * decay

    if disc < 0:
        wd = math.sqrt(w2 - sigma * sigma)
        decay = torch.exp(-sigma * t) if sigma else 1.
        cos, sin = torch.cos(wd * t), torch.sin(wd * t)
        x = decay * (x0 * cos + (v0 + sigma * x0) / wd * sin)
        v = decay * (v0 * cos - (w2 * x0 + sigma * v0) / wd * sin)
        return x, v

    root = math.sqrt(disc)
    rp, rm = (-gamma + root) / 2, (-gamma - root) / 2
    a = (v0 - rm * x0) / (rp - rm)
    b = (rp * x0 - v0) / (rp - rm)
    ep, em = torch.exp(rp * t), torch.exp(rm * t)
    return a * ep + b * em, a * rp * ep + b * rm * em


def _constant(w2, gamma, x0, v0, a, t):
    if w2 >= _tiny:
        xp = a / w2
        x, v = homogeneous(w2, gamma, x0 - xp, v0, t)
        return x + xp, v
    if gamma >= _tiny:
        # drift at terminal velocity a/gamma
        vp = a / gamma
        x, v = homogeneous(w2, gamma, x0, v0 - vp, t)
        return x + vp * t, v + vp
    return x0 + v0 * t + a * t * t / 2, v0 + a * t


def _sinusoid(w2, gamma, x0, v0, a, freq, t):
    w = math.sqrt(w2)
    if gamma < _tiny and w2 >= _tiny and abs(freq - w) < constants.resonance_tol:
        logger.debug('exact resonance at w=%g: secular branch', w)
        k = -a / (2 * w)
        cos, sin = torch.cos(w * t), torch.sin(w * t)
        xp = k * t * cos
        vp = k * (cos - w * t * sin)
        x, v = homogeneous(w2, gamma, x0, v0 - k, t)
        return x + xp, v + vp

    delta = w2 - freq * freq
    den = delta * delta + (gamma * freq) ** 2
    c = a * delta / den
    d = -a * gamma * freq / den
    cos, sin = torch.cos(freq * t), torch.sin(freq * t)
    xp = c * sin + d * cos
    vp = c * freq * cos - d * freq * sin
    x, v = homogeneous(w2, gamma, x0 - d, v0 - c * freq, t)
    return x + xp, v + vp

"""Polar decomposition G = U P of the damped-synchronization matrix.

For G = [[0, I], [-I, -L]], G^T G restricted to mode i is
[[1, mu], [mu, 1 + mu^2]] (determinant 1), so that every factor is
known in closed form:

* P has the reciprocal eigenvalues (sqrt(mu^2 + 4) +/- mu) / 2 with
  eigenvectors (phi, +/- lam phi) / sqrt(1 + lam^2);
* U = [[A, B], [-B, A]] with A = sum cos(theta_i) phi_i phi_i^T and
  B = sum sin(theta_i) phi_i phi_i^T, where tan(theta_i / 2) is the
  larger eigenvalue of P. Its eigenvalues are exp(+/- i theta_i) with
  eigenvectors (phi, +/- i phi) / sqrt(2).
"""
import math
import logging
from typing import NamedTuple
import torch
from ..core.linalg import eig_sym, spectral_apply
from ..core.utils import as_times, default_dtype
from ..dynamics import State, Trajectory, build_G, regime
from ..network import spectrum

logger = logging.getLogger(__name__)


class PolarFactors(NamedTuple):
    U: torch.Tensor                 # (2N, 2N) orthogonal and symplectic
    P: torch.Tensor                 # (2N, 2N) symmetric positive definite
    p_eigenvalues: torch.Tensor     # (N, 2) [lam+, lam-] per mode
    angles: torch.Tensor            # (N,) theta in radians
    angles_deg: torch.Tensor        # (N,) theta in degrees
    u_eigenvalues: torch.Tensor     # (N, 2) complex [e^{i th}, e^{-i th}]


class ModePairs(NamedTuple):
    """Two eigenpairs attached to one Laplacian mode."""
    index: int
    mu: float
    values: tuple                   # (plus, minus)
    vectors: tuple                  # ((2N,) tensor, (2N,) tensor)
    angle: float = None             # radians, U only


def polar_decompose(g):
    """Numerical polar factors of G, with closed-form eigen-data.

    P = (G^T G)^{1/2} and U = G P^{-1}, both through the spectral
    calculus of G^T G.
    """
    G = build_G(g, regime('damped'))
    decomp = eig_sym(G.t() @ G)
    P = spectral_apply(decomp, math.sqrt)
    P = (P + P.t()) / 2
    P_inv = spectral_apply(decomp, lambda x: 1 / math.sqrt(x))
    U = G @ P_inv

    pp = p_eigenpairs(g)
    uu = u_eigenpairs(g)
    p_val = torch.as_tensor([list(p.values) for p in pp], dtype=default_dtype)
    angles = torch.as_tensor([u.angle for u in uu], dtype=default_dtype)
    u_val = torch.as_tensor([list(u.values) for u in uu],
                            dtype=torch.complex128)
    return PolarFactors(U, P, p_val, angles, torch.rad2deg(angles), u_val)


def p_eigenpairs(g):
    """Closed-form eigenpairs of P, one reciprocal pair per mode."""
    decomp = spectrum(g)
    phi = decomp.eigenvectors
    pairs = []
    for i, mu in enumerate(decomp.eigenvalues.tolist()):
        root = math.sqrt(mu * mu + 4)
        lp, lm = (root + mu) / 2, (root - mu) / 2
        vp = torch.cat([phi[:, i], lp * phi[:, i]]) / math.sqrt(1 + lp * lp)
        vm = torch.cat([phi[:, i], -lm * phi[:, i]]) / math.sqrt(1 + lm * lm)
        pairs.append(ModePairs(i, mu, (lp, lm), (vp, vm)))
    return pairs


def u_eigenpairs(g):
    """Closed-form eigenpairs of U: exp(+/- i theta) per mode."""
    decomp = spectrum(g)
    phi = decomp.eigenvectors.to(torch.complex128)
    pairs = []
    for i, mu in enumerate(decomp.eigenvalues.tolist()):
        lp = (math.sqrt(mu * mu + 4) + mu) / 2
        theta = 2 * math.atan(lp)
        plus = complex(math.cos(theta), math.sin(theta))
        vp = torch.cat([phi[:, i], 1j * phi[:, i]]) / math.sqrt(2)
        vm = torch.cat([phi[:, i], -1j * phi[:, i]]) / math.sqrt(2)
        pairs.append(ModePairs(i, mu, (plus, plus.conjugate()), (vp, vm),
                               theta))
    return pairs


def u_blocks(g):
    """Blocks (A, B) of U = [[A, B], [-B, A]] from the mode angles."""
    decomp = spectrum(g)
    phi = decomp.eigenvectors
    theta = torch.as_tensor([u.angle for u in u_eigenpairs(g)],
                            dtype=default_dtype)
    A = (phi * torch.cos(theta)) @ phi.t()
    B = (phi * torch.sin(theta)) @ phi.t()
    return A, B


def evolve_unitary(g, y0, times):
    """Trajectory of y' = U y, assembled from the eigenpairs of U.

    U is normal, so e^{Ut} = Psi diag(e^{lam t}) Psi^H with Psi the
    unitary matrix of its eigenvectors.
    """
    times = as_times(times)
    pairs = u_eigenpairs(g)
    psi = torch.stack([v for p in pairs for v in p.vectors], dim=1)
    lam = torch.as_tensor([val for p in pairs for val in p.values],
                          dtype=torch.complex128)
    coef = psi.conj().t() @ y0.as_vector().to(torch.complex128)
    growth = torch.exp(times.to(torch.complex128)[:, None] * lam)
    y = (growth * coef) @ psi.t()
    n = g.n
    return Trajectory(times, y.real[:, :n], y.real[:, n:])

"""Linear algebra: symmetric eigensolvers and spectral matrix functions."""
import math
import logging
from typing import NamedTuple
import torch
from . import constants
from .errors import NotSymmetric, NoConvergence, DomainError
from .utils import as_tensor

logger = logging.getLogger(__name__)


class SpectralDecomposition(NamedTuple):
    """Eigen-decomposition of a real symmetric matrix.

    Attributes
    ----------
    eigenvalues : (N,) tensor
        Eigenvalues in decreasing order.
    eigenvectors : (N, N) tensor
        Orthonormal eigenvectors, column `i` paired with `eigenvalues[i]`.
        Each column is scaled so that its entry of largest magnitude is
        positive (ties go to the lowest index).
    """
    eigenvalues: torch.Tensor
    eigenvectors: torch.Tensor

    @property
    def n(self):
        return len(self.eigenvalues)

    def reconstruct(self):
        return spectral_apply(self, lambda x: x)


def eig_sym(mat, method='eigh', tol=constants.jacobi_tol,
            max_sweeps=constants.jacobi_sweeps):
    """Eigen-decomposition of a real symmetric matrix.

    Parameters
    ----------
    mat : (N, N) tensor_like
        Symmetric matrix.
    method : {'eigh', 'jacobi'}, default='eigh'
        'eigh' uses LAPACK through `torch.linalg.eigh`.
        'jacobi' uses cyclic Jacobi rotations.
    tol : float, default=1e-14
        Jacobi only: threshold on the off-diagonal Frobenius norm,
        relative to `max(1, ||mat||)`.
    max_sweeps : int, default=100
        Jacobi only: maximum number of cyclic sweeps.

    Returns
    -------
    SpectralDecomposition

    Raises
    ------
    NotSymmetric
        If `max|mat - mat.T| >= 1e-12` (or `mat` is not square).
    NoConvergence
        If Jacobi sweeps do not converge.

    """
    mat = as_tensor(mat)
    if mat.dim() != 2 or mat.shape[0] != mat.shape[1]:
        raise NotSymmetric(f'Expected a square matrix, got shape '
                           f'{tuple(mat.shape)}')
    asym = (mat - mat.t()).abs().max().item() if mat.numel() else 0.
    if asym >= constants.sym_tol:
        raise NotSymmetric(f'Matrix is not symmetric: max|m - m.T| = '
                           f'{asym:.3g}')

    if method == 'eigh':
        val, vec = torch.linalg.eigh(mat)
    elif method == 'jacobi':
        val, vec = _jacobi(mat, tol, max_sweeps)
    else:
        raise ValueError(f'Unknown eigensolver {method}')

    order = torch.argsort(val, descending=True)
    val = val[order]
    vec = vec[:, order]
    vec = _fix_signs(vec)
    return SpectralDecomposition(val, vec)


def _jacobi(a, tol, max_sweeps):
    """Cyclic Jacobi eigenvalue algorithm.

    Rotations zero one off-diagonal element at a time, sweeping through
    all pairs (p, q), p < q. Returns unsorted eigenvalues and vectors.
    """
    a = a.clone()
    n = a.shape[0]
    v = torch.eye(n, dtype=a.dtype)
    scale = max(1., a.norm().item())
    for sweep in range(max_sweeps):
        off = a.triu(1).norm().item() * math.sqrt(2)
        if off <= tol * scale:
            logger.debug('jacobi: converged after %d sweeps', sweep)
            return a.diagonal().clone(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q].item()
                if apq == 0:
                    continue
                theta = (a[q, q].item() - a[p, p].item()) / (2 * apq)
                t = 1. / (abs(theta) + math.sqrt(theta * theta + 1))
                if theta < 0:
                    t = -t
                c = 1. / math.sqrt(t * t + 1)
                s = t * c
                # A <- R.T @ A @ R with R the (p, q) plane rotation
                col_p, col_q = a[:, p].clone(), a[:, q].clone()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].clone(), a[q, :].clone()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0
                vec_p, vec_q = v[:, p].clone(), v[:, q].clone()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    raise NoConvergence(f'Jacobi did not converge in {max_sweeps} sweeps')


def _fix_signs(vec):
    """Scale columns so that their largest-magnitude entry is positive."""
    if vec.numel() == 0:
        return vec
    mag = vec.abs()
    peak = mag.max(dim=0).values
    first = (mag >= peak - constants.tie_tol).to(torch.int8).argmax(dim=0)
    signs = torch.sign(vec[first, torch.arange(vec.shape[1])])
    signs[signs == 0] = 1
    return vec * signs


def spectral_apply(decomp, func):
    """Apply a scalar function through the spectral calculus.

    Returns `Phi @ diag(f(mu)) @ Phi.T`.

    Parameters
    ----------
    decomp : SpectralDecomposition
    func : callable(float) -> float
        Evaluated on each eigenvalue (as a python float).

    Returns
    -------
    (N, N) tensor

    Raises
    ------
    DomainError
        If `func` raises or returns a non-finite value at an eigenvalue.

    """
    values = []
    for mu in decomp.eigenvalues.tolist():
        try:
            fmu = float(func(mu))
        except (ValueError, ArithmeticError) as e:
            raise DomainError(f'Function undefined at eigenvalue {mu:.6g}: '
                              f'{e}') from e
        if not math.isfinite(fmu):
            raise DomainError(f'Function not finite at eigenvalue {mu:.6g}')
        values.append(fmu)
    phi = decomp.eigenvectors
    values = torch.as_tensor(values, dtype=phi.dtype)
    return (phi * values) @ phi.t()


def pseudo_inverse(decomp, zero=constants.zero_eig):
    """Moore-Penrose pseudo-inverse of a symmetric matrix.

    Eigenvalues with `|mu| < zero` are treated as exact zeros.
    """
    phi = decomp.eigenvectors
    mu = decomp.eigenvalues
    keep = mu.abs() >= zero
    inv = torch.zeros_like(mu)
    inv[keep] = 1. / mu[keep]
    out = (phi * inv) @ phi.t()
    return (out + out.t()) / 2


def group_eigenvalues(eigenvalues, tol=constants.distinct_tol):
    """Group (descending) eigenvalues into distinct values.

    Consecutive values closer than `tol` belong to the same group.

    Returns
    -------
    list[tuple[float, list[int]]]
        `(mean value, 0-based indices)` for each distinct eigenvalue,
        in decreasing order.

    """
    if torch.is_tensor(eigenvalues):
        eigenvalues = eigenvalues.tolist()
    groups = []
    for i, mu in enumerate(eigenvalues):
        if groups and abs(groups[-1][1][-1] - mu) < tol:
            groups[-1][1].append(mu)
            groups[-1][2].append(i)
        else:
            groups.append([mu, [mu], [i]])
    return [(sum(vals) / len(vals), idx) for _, vals, idx in groups]


def distinct_index(eigenvalues, k, tol=constants.distinct_tol):
    """Map a 1-based index over *distinct* eigenvalues to mode indices.

    Degenerate eigenvalues are counted once, so that e.g. on a spectrum
    `[5, 2, 2, 0]` the third distinct eigenvalue is `0` (mode 3).

    Returns
    -------
    list[int]
        0-based mode indices sharing that eigenvalue.

    """
    groups = group_eigenvalues(eigenvalues, tol)
    if not 1 <= k <= len(groups):
        raise IndexError(f'Distinct eigenvalue index {k} out of range '
                         f'[1, {len(groups)}]')
    return groups[k - 1][1]


def eigenspace_projector(decomp, index, tol=constants.distinct_tol):
    """Orthogonal projector onto the eigenspace holding mode `index`.

    The projector does not depend on the basis chosen inside a
    degenerate eigenspace.

    Parameters
    ----------
    decomp : SpectralDecomposition
    index : int
        0-based mode index.

    Returns
    -------
    (N, N) tensor

    """
    mu = decomp.eigenvalues
    same = (mu - mu[index]).abs() < tol
    phi = decomp.eigenvectors[:, same]
    return phi @ phi.t()


def symplectic_form(n, dtype=torch.float64):
    """Block matrix J = [[0, I], [-I, 0]] of size 2n."""
    eye = torch.eye(n, dtype=dtype)
    zero = torch.zeros(n, n, dtype=dtype)
    return torch.cat([torch.cat([zero, eye], 1),
                      torch.cat([-eye, zero], 1)], 0)


def is_orthonormal(basis, tol=1e-10, return_matrix=False):
    """Check that the columns of a matrix form an orthonormal basis.

    Parameters
    ----------
    basis : (N, F) tensor
        `F` basis vectors stored as columns.
    tol : float, default=1e-10
        Tolerance on `max|B^H B - I|`.
    return_matrix : bool, default=False
        If True, also return the matrix of all inner products.

    Returns
    -------
    check : bool
    matrix : (F, F) tensor, if `return_matrix is True`

    """
    basis = torch.as_tensor(basis)
    mat = basis.conj().t() @ basis
    eye = torch.eye(mat.shape[0], dtype=mat.dtype)
    check = (mat - eye).abs().max().item() < tol
    return (check, mat) if return_matrix else check

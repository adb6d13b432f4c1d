import math
import pytest
import torch
from osctorch.core.errors import NotSymmetric, DomainError
from osctorch.core.linalg import (eig_sym, spectral_apply, pseudo_inverse,
                                  group_eigenvalues, distinct_index,
                                  eigenspace_projector, symplectic_form,
                                  is_orthonormal)
from osctorch.core.optionals import try_import
from osctorch.network import builtin, laplacian, spectrum

networks = ('toy4', 'zachary', 'sync-c', 'sync-e', 'cycle:7')
methods = ('eigh', 'jacobi')


@pytest.mark.parametrize('name', networks)
@pytest.mark.parametrize('method', methods)
def test_decomposition(name, method):
    lap = laplacian(builtin(name))
    decomp = eig_sym(lap, method=method)
    mu, phi = decomp
    assert (mu[:-1] >= mu[1:]).all(), "decreasing order"
    assert is_orthonormal(phi), "orthonormal basis"
    assert torch.allclose(lap @ phi, phi * mu, atol=1e-9), "eigenpairs"
    assert torch.allclose(decomp.reconstruct(), lap, atol=1e-9)


@pytest.mark.parametrize('name', networks)
def test_jacobi_matches_eigh(name):
    lap = laplacian(builtin(name))
    a = eig_sym(lap, method='eigh').eigenvalues
    b = eig_sym(lap, method='jacobi').eigenvalues
    assert torch.allclose(a, b, atol=1e-10)


def test_sign_convention():
    phi = spectrum(builtin('zachary')).eigenvectors
    largest = phi.abs().max(dim=0).values
    assert (phi.max(dim=0).values >= largest - 1e-12).all()


def test_not_symmetric():
    with pytest.raises(NotSymmetric):
        eig_sym([[1., 2.], [0., 1.]])
    with pytest.raises(NotSymmetric):
        eig_sym(torch.ones(2, 3, dtype=torch.double))


def test_spectral_apply():
    decomp = spectrum(builtin('toy4'))
    lap = laplacian(builtin('toy4'))
    root = spectral_apply(decomp, lambda mu: math.sqrt(1 + mu))
    assert torch.allclose(root @ root, torch.eye(4, dtype=torch.double) + lap,
                          atol=1e-12)
    with pytest.raises(DomainError):
        spectral_apply(decomp, lambda mu: 1 / mu)
    with pytest.raises(DomainError):
        spectral_apply(decomp, lambda mu: math.log(mu))


@pytest.mark.parametrize('name', networks)
def test_pseudo_inverse(name):
    g = builtin(name)
    lap = laplacian(g)
    pinv = pseudo_inverse(spectrum(g))
    assert torch.allclose(lap @ pinv @ lap, lap, atol=1e-9)
    assert torch.allclose(pinv @ lap @ pinv, pinv, atol=1e-9)
    assert torch.allclose(pinv, pinv.t())
    scipy_pinv = try_import('scipy.linalg', 'pinvh')
    if scipy_pinv is not None:
        ref = torch.as_tensor(scipy_pinv(lap.numpy()))
        assert torch.allclose(pinv, ref, atol=1e-8)


def test_zachary_groups():
    mu = spectrum(builtin('zachary')).eigenvalues
    groups = group_eigenvalues(mu)
    assert len(groups) == 30
    mult = {round(v, 3): len(idx) for v, idx in groups}
    assert mult[2.0] == 5
    assert sum(mult.values()) == 34
    omega = [math.sqrt(1 + v) for v, _ in groups]
    assert omega[0] == pytest.approx(4.37455, abs=1e-3)
    assert omega[28] == pytest.approx(1.21183, abs=1e-3)
    assert omega[29] == pytest.approx(1., abs=1e-9)


def test_distinct_index():
    values = [5., 2., 2., 0.]
    assert distinct_index(values, 1) == [0]
    assert distinct_index(values, 2) == [1, 2]
    assert distinct_index(values, 3) == [3]
    with pytest.raises(IndexError):
        distinct_index(values, 4)


def test_projector_is_basis_independent():
    decomp = spectrum(builtin('sync-c'))
    proj = eigenspace_projector(decomp, 0)
    # K4: the eigenspace of 4 is the complement of the constant vector
    ref = torch.eye(4, dtype=torch.double) - 0.25
    assert torch.allclose(proj, ref, atol=1e-12)
    assert torch.allclose(proj @ proj, proj, atol=1e-12)


def test_symplectic_form():
    J = symplectic_form(3)
    eye = torch.eye(6, dtype=torch.double)
    assert torch.equal(J @ J, -eye)
    assert torch.equal(J.t(), -J)

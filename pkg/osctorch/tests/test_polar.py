import math
import pytest
import torch
from osctorch.core.linalg import symplectic_form
from osctorch.core.optionals import try_import
from osctorch.core.utils import linspace_grid
from osctorch.dynamics import State, build_G, regime
from osctorch.network import builtin
from osctorch.tools.polar import (polar_decompose, p_eigenpairs,
                                  u_eigenpairs, u_blocks, evolve_unitary)
from osctorch.tools.synchronization import asymptotic_state

networks = ('toy4', 'sync-c', 'zachary')


@pytest.mark.parametrize('name', networks)
def test_structure(name):
    g = builtin(name)
    n = g.n
    J = symplectic_form(n)
    eye = torch.eye(2 * n, dtype=torch.double)
    G = build_G(g, regime('damped'))
    U, P = polar_decompose(g)[:2]
    assert torch.allclose(G.t() @ J @ G, J, atol=1e-9), "G symplectic"
    assert torch.allclose(U.t() @ U, eye, atol=1e-9), "U orthogonal"
    assert torch.allclose(U.t() @ J @ U, J, atol=1e-9), "U symplectic"
    assert torch.allclose(P, P.t(), atol=1e-12), "P symmetric"
    assert torch.linalg.eigvalsh(P).min() > 0, "P positive definite"
    assert torch.allclose(U @ P, G, atol=1e-9), "G = U P"


def test_against_scipy():
    polar = try_import('scipy.linalg', 'polar')
    if polar is None:
        pytest.skip('scipy not available')
    g = builtin('toy4')
    u, p = polar(build_G(g, regime('damped')).numpy())
    U, P = polar_decompose(g)[:2]
    assert torch.allclose(U, torch.as_tensor(u), atol=1e-9)
    assert torch.allclose(P, torch.as_tensor(p), atol=1e-9)


def test_toy_table():
    factors = polar_decompose(builtin('toy4'))
    p_val = sorted(factors.p_eigenvalues.reshape(-1).tolist())
    ref = [0.236, 0.303, 0.618, 1., 1., 1.618, 3.303, 4.236]
    assert all(abs(a - b) < 5e-4 for a, b in zip(p_val, ref))
    deg = factors.angles_deg.tolist()
    assert all(abs(a - b) < 0.5 for a, b in zip(deg, [153.4, 146.3, 116.6,
                                                      90.]))
    u = factors.u_eigenvalues
    assert torch.allclose(u.abs(), torch.ones(4, 2, dtype=torch.double))
    assert torch.allclose(u[:, 0].angle(), factors.angles)


def test_eigenpairs():
    g = builtin('toy4')
    P = polar_decompose(g).P
    for pair in p_eigenpairs(g):
        plus, minus = pair.values
        assert plus * minus == pytest.approx(1.)
        for val, vec in zip(pair.values, pair.vectors):
            assert torch.allclose(P @ vec, val * vec, atol=1e-10)
    U = polar_decompose(g).U.to(torch.complex128)
    for pair in u_eigenpairs(g):
        s = math.sqrt(pair.mu ** 2 + 4)
        assert math.cos(pair.angle) == pytest.approx(-pair.mu / s)
        assert math.sin(pair.angle) == pytest.approx(2 / s)
        for val, vec in zip(pair.values, pair.vectors):
            assert torch.allclose(U @ vec, val * vec, atol=1e-10)


def test_blocks():
    g = builtin('toy4')
    A, B = u_blocks(g)
    U = polar_decompose(g).U
    assert torch.allclose(U[:4, :4], A, atol=1e-10)
    assert torch.allclose(U[:4, 4:], B, atol=1e-10)
    assert torch.allclose(U[4:, :4], -B, atol=1e-10)
    assert torch.allclose(U[4:, 4:], A, atol=1e-10)


def test_evolve_unitary():
    g = builtin('toy4')
    y0 = State.make([1., 0., 0., 0.], [0., 0.5, 0., 0.])
    times = linspace_grid(3., 0.5)
    traj = evolve_unitary(g, y0, times)
    U = polar_decompose(g).U
    for k, t in enumerate(times.tolist()):
        ref = torch.matrix_exp(t * U) @ y0.as_vector()
        assert torch.allclose(torch.cat([traj.x[k], traj.v[k]]), ref,
                              atol=1e-10)
    # U is orthogonal but not skew: non-zero modes decay, the norm shrinks
    norms = torch.cat([traj.x, traj.v], 1).norm(dim=1)
    assert (norms[1:] <= norms[:-1] + 1e-12).all()


def test_unitary_flow_reaches_sync():
    g = builtin('toy4')
    y0 = State.make([1., 0., 0., 0.])
    traj = evolve_unitary(g, y0, [0., 60.])
    ref = asymptotic_state(y0, 60.)
    gap = torch.cat([traj.x[-1] - ref.x, traj.v[-1] - ref.v]).norm()
    assert gap.item() < 1e-4

import math
import pytest
import torch
from osctorch.core.errors import (InvalidConfig, InvalidMode, GridError,
                                  NonZeroInitialState, MomentumInconsistency)
from osctorch.core.optionals import try_import
from osctorch.core.utils import linspace_grid
from osctorch.dynamics import (CouplingConfig, regime, ScalarDrive, NoDrive,
                               Sinusoid, ConstantPower, State, Trajectory,
                               mode_solve, build_G, eig_G, evolve,
                               expm_via_modes, propagators, energy,
                               trajectory_energy)
from osctorch.dynamics._modal import mode_response
from osctorch.dynamics.oracle import rk4_solve
from osctorch.network import builtin, spectrum


def test_regimes():
    assert regime('coupled').as_tuple() == (1., 1., 0., 0.)
    assert regime('damped').as_tuple() == (1., 0., 0., 1.)
    assert regime('swing', gamma=0.4).as_tuple() == (0., 1., 0.4, 0.)
    with pytest.raises(InvalidConfig):
        regime('nope')


def test_coupling_validation():
    with pytest.raises(InvalidConfig):
        CouplingConfig(-1.)
    with pytest.raises(InvalidConfig):
        CouplingConfig(c2p=float('nan'))
    with pytest.raises(InvalidConfig):
        CouplingConfig(0., 0., 0., 0.).check()
    cfg = CouplingConfig(c2=2.)
    assert cfg.stiffness(3.) == 7.
    assert cfg.damping(3.) == 0.
    assert cfg.copy() == cfg
    assert cfg.update(c1p=0.5).as_tuple() == (1., 2., 0.5, 0.)
    assert CouplingConfig(0., 1.).is_free()
    with pytest.raises(KeyError):
        CouplingConfig(nope=1.)


modal_cases = [
    # w2, gamma, x0, v0, drive
    (2., 0., 1., 0.5, ScalarDrive()),                    # undamped
    (2., 0.5, 1., -1., ScalarDrive()),                   # underdamped
    (1., 2., 1., 0.3, ScalarDrive()),                    # critical
    (1., 3., -1., 2., ScalarDrive()),                    # overdamped
    (0., 1., 1., 1., ScalarDrive()),                     # no stiffness
    (0., 0., 1., 1., ScalarDrive()),                     # free
    (2., 0.5, 0., 0., ScalarDrive('constant', 1.5)),
    (0., 1., 0.2, 0., ScalarDrive('constant', 1.5)),
    (0., 0., 0.2, 0.1, ScalarDrive('constant', -1.)),
    (2., 0.3, 0., 0., ScalarDrive('sinusoid', 1., 1.2)),
    (4., 0., 0., 0., ScalarDrive('sinusoid', 1., 2.)),   # exact resonance
    (4., 0., 0.5, 0.5, ScalarDrive('sinusoid', 1., 2.)),
    (0., 0., 0., 0., ScalarDrive('sinusoid', 2., 0.7)),
    (1., 2., 0., 0., ScalarDrive('sinusoid', 1., 1.)),   # critical, driven
]


@pytest.mark.parametrize('w2,gamma,x0,v0,drive', modal_cases)
def test_mode_response_against_rk4(w2, gamma, x0, v0, drive):
    def func(t, y):
        return torch.stack([y[1], drive(t) - gamma * y[1] - w2 * y[0]])

    times, states = rk4_solve(func, torch.tensor([x0, v0],
                                                 dtype=torch.double),
                              dt=1e-3, horizon=10., sample_every=250)
    x, v = mode_response(w2, gamma, x0, v0, drive, times)
    assert torch.allclose(x, states[:, 0], atol=1e-8)
    assert torch.allclose(v, states[:, 1], atol=1e-8)


def test_mode_solve_scalar():
    x, v = mode_solve(3., regime('coupled'), 1., 0., t=0.)
    assert (x, v) == (1., 0.)
    x, v = mode_solve(3., regime('coupled'), 1., 0., t=math.pi / 2)
    assert isinstance(x, float)
    assert x == pytest.approx(math.cos(2 * math.pi / 2), abs=1e-12)
    assert v == pytest.approx(-2 * math.sin(math.pi), abs=1e-12)
    with pytest.raises(InvalidMode):
        mode_response(-1., 0., 1., 0., None, torch.zeros(1))


def test_initial_condition_echo():
    g = builtin('toy4')
    y0 = State.make([1., 0., 0., 0.], [0., 0.5, 0., 0.])
    for name in ('coupled', 'damped'):
        traj = evolve(g, regime(name), NoDrive(), y0, [0., 1.])
        assert torch.allclose(traj.x[0], y0.x, atol=1e-14)
        assert torch.allclose(traj.v[0], y0.v, atol=1e-14)


def test_expm():
    g = builtin('toy4')
    for name in ('coupled', 'damped', 'swing'):
        cfg = regime(name)
        mat = expm_via_modes(g, cfg, 0.7)
        ref = torch.matrix_exp(0.7 * build_G(g, cfg))
        assert torch.allclose(mat, ref, atol=1e-10), name
    expm = try_import('scipy.linalg', 'expm')
    if expm is not None:
        cfg = regime('coupled')
        ref = torch.as_tensor(expm(2.5 * build_G(g, cfg).numpy()))
        assert torch.allclose(expm_via_modes(g, cfg, 2.5), ref, atol=1e-10)


def test_propagators_identity_at_zero():
    prop = propagators(builtin('toy4'), regime('damped'), 0.)
    eye = torch.eye(2, dtype=torch.double).expand(4, 2, 2)
    assert torch.allclose(prop, eye, atol=1e-14)


def test_eig_G():
    g = builtin('toy4')
    G = build_G(g, CouplingConfig(1., 0., 0., 1.)).to(torch.complex128)
    for pair in eig_G(g):
        for lam, vec in ((pair.lam_plus, pair.vec_plus),
                         (pair.lam_minus, pair.vec_minus)):
            assert torch.allclose(G @ vec, lam * vec, atol=1e-12)
            assert vec.norm().item() == pytest.approx(1.)
        # reciprocal pair
        assert abs(pair.lam_plus * pair.lam_minus - 1) < 1e-12
    with pytest.raises(InvalidConfig):
        eig_G(g, alpha=0.)


def test_degenerate_basis_invariance():
    g = builtin('sync-c')
    y0 = State.make([1., 0., 0., 0.], [0., 0., 1., 0.])
    times = linspace_grid(5., 0.5)
    cfg = CouplingConfig(1., 1., 0.2, 0.3)
    ref = evolve(g, cfg, Sinusoid(2, 1., 1.3), y0, times, superpose=True)

    torch.manual_seed(0)
    q, _ = torch.linalg.qr(torch.randn(3, 3, dtype=torch.double))
    decomp = spectrum(g)
    phi = decomp.eigenvectors.clone()
    phi[:, :3] = phi[:, :3] @ q
    other = builtin('sync-c')
    other._spectrum = decomp._replace(eigenvectors=phi)
    traj = evolve(other, cfg, Sinusoid(2, 1., 1.3), y0, times,
                  superpose=True)
    assert torch.allclose(traj.x, ref.x, atol=1e-12)
    assert torch.allclose(traj.v, ref.v, atol=1e-12)


def test_energy_conservation():
    g = builtin('zachary')
    cfg = regime('coupled')
    x0 = torch.zeros(34, dtype=torch.double)
    x0[0] = 1.
    traj = evolve(g, cfg, NoDrive(), State.make(x0), linspace_grid(50., 0.5))
    e = trajectory_energy(g, cfg, traj)
    assert e[0].item() == pytest.approx(energy(g, cfg, State.make(x0)).item())
    assert (e - e[0]).abs().max().item() < 1e-8


def test_damped_energy_decreases():
    g = builtin('toy4')
    cfg = regime('damped')
    traj = evolve(g, cfg, NoDrive(), State.make([1., -1., 0., 0.]),
                  linspace_grid(20., 0.1))
    e = trajectory_energy(g, cfg, traj)
    assert (e[1:] <= e[:-1] + 1e-12).all()


def test_free_network_conserves_mean():
    g = builtin('toy4')
    cfg = CouplingConfig(0., 1., 0., 0.)
    y0 = State.make([1., 0., 0., 0.], [0.5, -0.5, 0., 0.])
    traj = evolve(g, cfg, NoDrive(), y0, linspace_grid(10., 0.5))
    assert torch.allclose(traj.x.mean(1), torch.full((21,), 0.25,
                                                     dtype=torch.double))
    with pytest.raises(MomentumInconsistency):
        evolve(g, cfg, NoDrive(), State.make(y0.x, [1., 0., 0., 0.]), [0.])


def test_forced_needs_rest():
    g = builtin('toy4')
    y0 = State.make([1., 0., 0., 0.])
    with pytest.raises(NonZeroInitialState):
        evolve(g, regime('forced'), Sinusoid(1), y0, [0., 1.])
    evolve(g, regime('forced'), Sinusoid(1), y0, [0., 1.], superpose=True)
    with pytest.raises(InvalidConfig):
        evolve(g, regime('forced'), Sinusoid(5), State.zeros(4), [0.])
    with pytest.raises(InvalidConfig):
        evolve(g, regime('forced'), Sinusoid(1, 1., 0.), State.zeros(4), [0.])


def test_constant_power_steady_state():
    g = builtin('toy4')
    p = [0.5, -0.5, 0., 0.]
    traj = evolve(g, regime('damped'), ConstantPower(p), State.zeros(4),
                  [0., 200.])
    # (I + 0 L) x = p at rest for c1 = 1
    assert torch.allclose(traj.x[-1], torch.tensor(p, dtype=torch.double),
                          atol=1e-8)


def test_state_validation():
    with pytest.raises(InvalidConfig):
        State.make([1., float('inf')])
    with pytest.raises(InvalidConfig):
        State.make([1., 0.], [0.])
    with pytest.raises(InvalidConfig):
        State.make([1., 0.], n=3)
    y = State.make([1., 2.], [3., 4.])
    back = State.from_vector(y.as_vector())
    assert torch.equal(back.x, y.x) and torch.equal(back.v, y.v)
    assert y.norm() == pytest.approx(math.sqrt(30.))


def test_trajectory():
    times = torch.tensor([0., 0.5, 1.], dtype=torch.double)
    traj = Trajectory(times, torch.zeros(3, 2), torch.ones(3, 2))
    assert traj.n == 2 and len(traj) == 3
    assert torch.equal(traj.at(0.5).v, torch.ones(2, dtype=torch.double))
    assert traj.as_matrix().shape == (3, 5)
    with pytest.raises(GridError):
        traj.index(0.25)
    with pytest.raises(GridError):
        Trajectory([0., 1., 1.], torch.zeros(3, 1), torch.zeros(3, 1))

import math
import pytest
import torch
from osctorch.core.errors import (UnbalancedPower, InvalidConfig, NoPeak,
                                  NotSettled)
from osctorch.core.utils import linspace_grid
from osctorch.dynamics import State, Trajectory, regime, evolve
from osctorch.network import builtin, laplacian
from osctorch.tools.swing import (PowerProfile, rebalance, steady_state,
                                  asymptotic_displacement, swing_solve,
                                  swing_drive, transient_metrics)

power = [-0.5, -0.2, 1.05, -0.35]
limit = [-0.1375, -0.0375, 0.2625, -0.0875]


def _tensor(values):
    return torch.tensor(values, dtype=torch.double)


def test_steady_state():
    g = builtin('toy4')
    prof = PowerProfile(power)
    x = steady_state(g, prof)
    assert (laplacian(g) @ x - prof.p).norm().item() < 1e-10
    assert torch.allclose(asymptotic_displacement(g, prof), _tensor(limit),
                          atol=1e-12)


@pytest.mark.parametrize('gamma', [0.4, 1.])
def test_convergence(gamma):
    g = builtin('toy4')
    prof = PowerProfile(power, gamma)
    traj = swing_solve(g, prof, times=linspace_grid(100., 0.05))
    assert torch.allclose(traj.x[0], torch.zeros(4, dtype=torch.double),
                          atol=1e-14)
    assert (traj.x[-1] - _tensor(limit)).abs().max().item() < 1e-4


def test_shift_invariance():
    g = builtin('toy4')
    prof = PowerProfile(power)
    times = linspace_grid(30., 0.1)
    a = swing_solve(g, prof, times=times)
    b = swing_solve(g, prof, times=times, shift=2.5)
    assert (a.x - b.x).abs().max().item() < 1e-10
    assert (a.v - b.v).abs().max().item() < 1e-10


def test_matches_forced_evolution():
    g = builtin('toy4')
    prof = PowerProfile(power, 0.4)
    times = linspace_grid(20., 0.5)
    y0 = State.make([0.1, 0., 0., -0.1], [0., 0.2, 0., 0.])
    a = swing_solve(g, prof, y0, times)
    b = evolve(g, regime('swing', 0.4), swing_drive(prof), y0, times)
    assert torch.allclose(a.x, b.x, atol=1e-10)
    assert torch.allclose(a.v, b.v, atol=1e-10)


def test_profile_validation():
    with pytest.raises(UnbalancedPower):
        PowerProfile([1., 0.]).check()
    with pytest.raises(InvalidConfig):
        PowerProfile([1., -1.], gamma=0.).check()
    with pytest.raises(InvalidConfig):
        PowerProfile([1., -1.]).check(3)
    p = rebalance([1., 0., 2.])
    assert torch.allclose(p, _tensor([0., -1., 1.]))
    assert abs(PowerProfile([3., 1.]).rebalanced().p.sum().item()) < 1e-12
    with pytest.raises(UnbalancedPower):
        steady_state(builtin('toy4'), PowerProfile([1., 0., 0., 0.]))


def test_transient_metrics():
    g = builtin('toy4')
    prof = PowerProfile(power, 0.4)
    traj = swing_solve(g, prof, times=linspace_grid(100., 0.01))
    m = transient_metrics(traj, 3)
    assert m.node == 3
    assert m.first_peak_value > limit[2]
    assert 0 < m.first_peak_time < 10
    assert m.steady_state_value == pytest.approx(limit[2], abs=1e-4)
    with pytest.raises(InvalidConfig):
        transient_metrics(traj, 5)
    short = swing_solve(g, prof, times=linspace_grid(2., 0.01))
    with pytest.raises(NotSettled):
        transient_metrics(short, 3)


def test_no_peak():
    g = builtin('toy4')
    # heavily damped relaxation along the mu = 1 eigenvector
    x0 = _tensor([-1., -1., 0., 2.]) / math.sqrt(6)
    prof = PowerProfile([0., 0., 0., 0.], gamma=10.)
    traj = swing_solve(g, prof, State.make(x0), linspace_grid(200., 0.1))
    with pytest.raises(NoPeak):
        transient_metrics(traj, 4)

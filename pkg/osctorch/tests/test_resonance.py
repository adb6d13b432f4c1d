import math
import pytest
import torch
from osctorch.core.errors import (DomainError, ResonantKickSingularity,
                                  NoPeak, InvalidConfig)
from osctorch.core.linalg import distinct_index
from osctorch.core.utils import linspace_grid
from osctorch.network import builtin, spectrum
from osctorch.tools.resonance import (
    SweepOptions, resonance_frequencies, forced_undamped, forced_damped,
    damped_forced_reference, influence, resonance_map,
    vibrational_communicability, single_oscillator, envelope_slope,
    frequency_sweep)


def test_frequencies():
    omega = resonance_frequencies(builtin('toy4'))
    ref = torch.tensor([math.sqrt(5), 2., math.sqrt(2), 1.],
                       dtype=torch.double)
    assert torch.allclose(omega, ref, atol=1e-10)
    omega = resonance_frequencies(builtin('zachary'))
    assert omega[0].item() == pytest.approx(4.37455, abs=1e-3)
    assert omega[-1].item() == pytest.approx(1.)


def test_undamped_secular_growth():
    g = builtin('toy4')
    times = linspace_grid(400., 0.01)
    traj = forced_undamped(g, 1, 1., 2., times)
    for k in (0, 1):
        slope = envelope_slope(times, traj.x[:, k])
        assert slope == pytest.approx(0.125, rel=0.02)
    early = times <= 200
    assert traj.x[early, 2:].abs().max().item() < 10.
    blocked = forced_undamped(g, 3, 1., 2., times[early])
    assert blocked.x.abs().max().item() < 10.


def test_undamped_linear_in_force():
    g = builtin('toy4')
    times = linspace_grid(10., 0.05)
    a = forced_undamped(g, 1, 0.7, 1.5, times)
    b = forced_undamped(g, 1, 1.3, 1.5, times)
    ab = forced_undamped(g, 1, 2.0, 1.5, times)
    unit = forced_undamped(g, 1, 1., 1.5, times)
    assert (ab.x - (a.x + b.x)).abs().max().item() < 1e-10
    assert (ab.v - (a.v + b.v)).abs().max().item() < 1e-10
    assert (a.x - 0.7 * unit.x).abs().max().item() < 1e-10


def test_damped_single_resonance():
    g = builtin('toy4')
    times = linspace_grid(400., 0.01)
    traj = forced_damped(g, 1, 1., 1., times)
    for k in range(4):
        slope = envelope_slope(times, traj.x[:, k])
        assert slope == pytest.approx(1 / 8, rel=0.02)
    off = forced_damped(g, 1, 1., math.sqrt(2), linspace_grid(200., 0.01))
    assert off.x.abs().max().item() < 10.


@pytest.mark.parametrize('omega', [0.5, 1.7, 3.])
def test_damped_reference(omega):
    g = builtin('toy4')
    times = linspace_grid(30., 0.1)
    ref, residue = damped_forced_reference(g, 2, 1.5, omega, times,
                                           return_residue=True)
    traj = forced_damped(g, 2, 1.5, omega, times)
    assert residue < 1e-10
    assert torch.allclose(traj.x, ref.x, atol=1e-9)
    assert torch.allclose(traj.v, ref.v, atol=1e-9)


def test_damped_reference_singular():
    g = builtin('toy4')
    with pytest.raises(DomainError):
        damped_forced_reference(g, 1, 1., 1., [0., 1.])
    with pytest.raises(DomainError):
        damped_forced_reference(builtin('path:2'), 1, 1., 0.5, [0., 1.])


def test_influence_and_map():
    g = builtin('toy4')
    # mu = 3 mode is (1, -1, 0, 0) / sqrt(2)
    assert influence(g, 1, 2, 2) == pytest.approx(-0.5)
    assert influence(g, 1, 3, 2) == pytest.approx(0., abs=1e-12)
    report = resonance_map(g, 1, 2)
    assert report.classification == ['resonant', 'resonant', 'transparent',
                                     'transparent']
    assert report.phase == [1, -1, 0, 0]
    report = resonance_map(g, 3, 2)
    assert report.classification == ['blocked'] * 4
    with pytest.raises(InvalidConfig):
        resonance_map(g, 5, 1)


def test_map_degenerate():
    # K4: every node is reached by the threefold eigenvalue 4
    report = resonance_map(builtin('sync-c'), 2, 1)
    assert report.classification == ['resonant'] * 4
    assert report.phase == [-1, 1, -1, -1]


def test_zachary_influencers():
    decomp = spectrum(builtin('zachary'))

    def mode(k):
        return decomp.eigenvectors[:, distinct_index(decomp.eigenvalues, k)[0]]

    assert abs(mode(9)[0].item()) < 1e-6
    assert abs(mode(22)[10] / mode(22)[29]).item() == pytest.approx(200.9,
                                                                    abs=5)
    assert abs(mode(6)[0].item()) == pytest.approx(0.00278, abs=1e-4)
    assert abs(mode(6)[3].item()) == pytest.approx(0.82317, abs=1e-4)


def test_vibrational_communicability():
    g = builtin('toy4')
    mat = vibrational_communicability(g)
    assert torch.allclose(mat.sum(0), torch.zeros(4, dtype=torch.double),
                          atol=1e-12)
    assert vibrational_communicability(g, 1, 2) == pytest.approx(
        mat[0, 1].item())


def test_single_oscillator():
    x, v = single_oscillator(2., 1., 1., 1., t=0.)
    assert (x, v) == (0., 0.)
    t = torch.linspace(0, 10, 11, dtype=torch.double)
    x, _ = single_oscillator(2., 1., 1., 1., t=t)
    ref = (torch.sin(t) - torch.sin(2 * t) / 2) / 3
    assert torch.allclose(x, ref, atol=1e-12)
    # resonance: amplitude grows like t / (2 m omega0)
    x, _ = single_oscillator(2., 1., 1., 2., t=t)
    ref = (torch.sin(2 * t) / 2 - t * torch.cos(2 * t)) / 4
    assert torch.allclose(x, ref, atol=1e-12)


def test_kicks():
    w0, w = 1.3, 1.
    period = 2 * math.pi / w
    # state right after the first kick: v = F0 / m
    x, v = single_oscillator(w0, 2., 1., w, 'delta_train', t=period)
    assert x == pytest.approx(0., abs=1e-9)
    assert v == pytest.approx(0.5)
    # between kicks the motion is free
    t1 = 1.5 * period
    x, v = single_oscillator(w0, 2., 1., w, 'delta_train', t=t1)
    tau = t1 - period
    assert x == pytest.approx(0.5 * math.sin(w0 * tau) / w0)
    assert v == pytest.approx(0.5 * math.cos(w0 * tau))
    x, v = single_oscillator(w0, 2., 1., w, 'delta_train', t=0.5 * period)
    assert (x, v) == (0., 0.)
    with pytest.raises(ResonantKickSingularity):
        single_oscillator(2., 1., 1., 1., 'delta_train', t=1.)
    with pytest.raises(InvalidConfig):
        single_oscillator(2., 1., 1., 1., 'square', t=1.)


def test_envelope_slope():
    t = linspace_grid(100., 0.01)
    assert envelope_slope(t, 0.5 * t * torch.sin(3 * t)) == pytest.approx(
        0.5, rel=1e-3)
    with pytest.raises(NoPeak):
        envelope_slope(t, t)


@pytest.mark.parametrize('jobs', [1, 3])
def test_sweep(jobs):
    g = builtin('toy4')
    omegas = [0.5, 2., 3.]
    peaks = frequency_sweep(g, 1, omegas, SweepOptions(t_max=50., jobs=jobs))
    assert peaks.shape == (3, 4)
    ref = forced_undamped(g, 1, 1., 2., linspace_grid(50., 0.05))
    assert torch.allclose(peaks[1], ref.x.abs().max(0).values)
    assert peaks[1, 0] > peaks[0, 0] and peaks[1, 0] > peaks[2, 0]

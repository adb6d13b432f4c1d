"""Acceptance checks run by `osctorch verify`.

Every check is deterministic and returns `(passed, detail)`. Reference
values are those of the toy network, the karate-club network and the
small comparison networks.
"""
import math
import logging
import torch
from ..core import optionals
from ..core.linalg import (group_eigenvalues, distinct_index, eig_sym,
                           symplectic_form)
from ..core.utils import linspace_grid
from ..dynamics import (regime, NoDrive, Sinusoid, ConstantPower, State,
                        evolve, eig_G, build_G, trajectory_energy, oracle)
from ..network import builtin, laplacian, spectrum
from ..tools import synchronization, resonance, swing, polar

logger = logging.getLogger(__name__)

toy_power = (-0.5, -0.2, 1.05, -0.35)


def _close(values, expected, tol):
    values = sorted(values)
    expected = sorted(expected)
    if len(values) != len(expected):
        return False, float('inf')
    err = max((abs(a - b) for a, b in zip(values, expected)), default=0.)
    return err < tol, err


def check_toy_spectrum():
    mu = spectrum(builtin('toy4')).eigenvalues.tolist()
    ok, err = _close(mu, [4., 3., 1., 0.], 1e-10)
    return ok, f'max error {err:.1e}'


def check_polar_table():
    g = builtin('toy4')
    pairs = eig_G(g)
    lam = [complex(z) for p in pairs for z in (p.lam_plus, p.lam_minus)]
    ref_g = [complex(-0.268, 0), complex(-3.732, 0), complex(-0.382, 0),
             complex(-2.618, 0), complex(-0.5, 0.866), complex(-0.5, -0.866),
             complex(0, 1), complex(0, -1)]
    key = (lambda z: (round(z.real, 3), round(z.imag, 3)))
    err_g = max(abs(a - b) for a, b in zip(sorted(lam, key=key),
                                           sorted(ref_g, key=key)))

    factors = polar.polar_decompose(g)
    p_num = torch.linalg.eigvalsh(factors.P).tolist()
    ok_p, err_p = _close(p_num, [4.236, 3.303, 1.618, 1., 1., 0.618, 0.303,
                                 0.236], 5e-4)
    ok_a, err_a = _close(factors.angles_deg.tolist(), [153.4, 146.3, 116.6,
                                                       90.], 0.5)
    u_num = torch.linalg.eigvals(factors.U)
    u_ref = factors.u_eigenvalues.reshape(-1)
    err_u = max(min(abs(complex(a) - complex(b)) for b in u_num.tolist())
                for a in u_ref.tolist())
    ok = err_g < 5e-4 and ok_p and ok_a and err_u < 5e-4
    return ok, (f'G {err_g:.1e}, P {err_p:.1e}, U {err_u:.1e}, '
                f'angles {err_a:.2f} deg')


def check_zachary_table():
    g = builtin('zachary')
    mu = spectrum(g).eigenvalues
    groups = group_eigenvalues(mu)
    mult = {round(v, 3): len(idx) for v, idx in groups}
    omega = [math.sqrt(1 + v) for v, _ in groups]
    jac = eig_sym(laplacian(g), method='jacobi').eigenvalues
    err_j = (jac - mu).abs().max().item()
    ok = (len(groups) == 30 and mult.get(2.0) == 5
          and abs(groups[0][0] - 18.137) < 1e-3
          and abs(omega[0] - 4.37455) < 1e-3
          and abs(omega[28] - 1.21183) < 1e-3
          and abs(omega[29] - 1.) < 1e-3 and err_j < 1e-9)
    return ok, (f'{len(groups)} distinct, mu=2 x{mult.get(2.0)}, '
                f'omega_1={omega[0]:.5f}, omega_29={omega[28]:.5f}, '
                f'jacobi {err_j:.1e}')


def check_zachary_sync():
    g = builtin('zachary')
    details, ok = [], True
    for node, (ref_max, ref_mean) in ((1, (91.70, 5.29)),
                                      (34, (96.20, 5.47))):
        v0 = torch.zeros(g.n, dtype=torch.float64)
        v0[node - 1] = 4.
        y0 = State.make(torch.zeros(g.n, dtype=torch.float64), v0)
        report = synchronization.measure_sync(g, y0, epsilon=1e-3, dt=0.025,
                                              settle='first')
        ok &= abs(report.empirical_max - ref_max) <= 1.
        ok &= abs(report.empirical_mean - ref_mean) <= 1.
        details.append(f'v0=4e{node} (first entry): '
                       f'max {report.empirical_max:.2f} '
                       f'mean {report.empirical_mean:.2f} '
                       f'(bound mean {report.mean_bound_time:.2f})')
    return ok, '; '.join(details)


def check_sync_ordering():
    rates = {name: synchronization.lambda_S(builtin(name))
             for name in ('sync-a', 'sync-b', 'sync-d', 'sync-e')}
    ref = {'sync-a': -0.2928932, 'sync-b': -0.2679492,
           'sync-d': -0.1909830, 'sync-e': -0.2087122}
    ok = all(abs(rates[k] - ref[k]) < 1e-6 for k in ref)

    def mean_bound(name, alpha):
        g = builtin(name)
        y0 = State.make(torch.eye(g.n, dtype=torch.float64)[0])
        return synchronization.sync_time_bounds(
            g, y0, epsilon=1e-6, alpha=alpha).mean_bound_time

    t = {name: mean_bound(name, 1.) for name in
         ('sync-a', 'sync-b', 'sync-c', 'sync-d', 'sync-e', 'sync-f')}
    ok &= t['sync-a'] < t['sync-b'] < t['sync-c']
    ok &= t['sync-d'] < t['sync-e'] < t['sync-f']
    slow = mean_bound('sync-d', 0.1)
    fast = mean_bound('sync-f', 0.1)
    ok &= slow > 5 * fast
    return ok, ('alpha=1: ' + ' '.join(f'{k[-1].upper()}={v:.2f}'
                                       for k, v in t.items())
                + f'; alpha=0.1: D={slow:.2f} F={fast:.2f}')


def check_undamped_resonance():
    g = builtin('toy4')
    times = linspace_grid(400., 0.01)
    traj = resonance.forced_undamped(g, 1, 1., 2., times)
    phi = spectrum(g).eigenvectors
    mode = 1    # mu = 3, omega = 2
    slope_ref = abs(phi[0, mode] * phi[1, mode]).item() / 4
    slopes = [resonance.envelope_slope(times, traj.x[:, k]) for k in (0, 1)]
    bounded = traj.x[times <= 200, 2:].abs().max().item()
    blocked = resonance.forced_undamped(g, 3, 1., 2., times[times <= 200])
    blocked = blocked.x.abs().max().item()
    ok = (all(abs(s - slope_ref) <= 0.02 * slope_ref for s in slopes)
          and bounded < 10 and blocked < 10)
    return ok, (f'slopes {slopes[0]:.4f}, {slopes[1]:.4f} '
                f'(expected {slope_ref:.4f}); sup nodes 3-4 {bounded:.3f}; '
                f'source 3 sup {blocked:.3f}')


def check_damped_resonance():
    g = builtin('toy4')
    times = linspace_grid(400., 0.01)
    traj = resonance.forced_damped(g, 1, 1., 1., times)
    slopes = [resonance.envelope_slope(times, traj.x[:, k])
              for k in range(g.n)]
    ref = 1. / (2 * g.n)
    off = resonance.forced_damped(g, 1, 1., math.sqrt(2),
                                  linspace_grid(200., 0.01))
    sup = off.x.abs().max().item()
    ok = all(abs(s - ref) <= 0.02 * ref for s in slopes) and sup < 10
    return ok, ('slopes ' + ', '.join(f'{s:.4f}' for s in slopes)
                + f' (expected {ref:.4f}); sup at sqrt(2) {sup:.3f}')


def _zachary_mode(decomp, k):
    idx = distinct_index(decomp.eigenvalues, k)
    return decomp.eigenvectors[:, idx[0]]


def check_zachary_influencers():
    decomp = spectrum(builtin('zachary'))
    phi9 = _zachary_mode(decomp, 9)
    phi22 = _zachary_mode(decomp, 22)
    phi6 = _zachary_mode(decomp, 6)
    ratio = abs(phi22[10] / phi22[29]).item()
    ok = (abs(phi9[0]).item() < 1e-6 and abs(ratio - 200.9) <= 5
          and abs(abs(phi6[0]).item() - 0.00278) < 1e-4
          and abs(abs(phi6[3]).item() - 0.82317) < 1e-4)
    return ok, (f'|phi9(1)| {abs(phi9[0]).item():.1e}, ratio {ratio:.1f}, '
                f'|phi6(1)| {abs(phi6[0]).item():.5f}, '
                f'|phi6(4)| {abs(phi6[3]).item():.5f}')


def check_swing():
    g = builtin('toy4')
    times = linspace_grid(100., 0.05)
    ok, details = True, []
    for gamma in (0.4, 1.):
        prof = swing.PowerProfile(toy_power, gamma)
        target = swing.steady_state(g, prof)
        residual = (laplacian(g) @ target - prof.p).norm().item()
        limit = swing.asymptotic_displacement(g, prof)
        traj = swing.swing_solve(g, prof, times=times)
        gap = (traj.x[-1] - limit).abs().max().item()
        shifted = swing.swing_solve(g, prof, times=times, shift=0.7)
        shift_err = (shifted.x - traj.x).abs().max().item()
        ok &= residual < 1e-10 and gap < 1e-4 and shift_err < 1e-10
        details.append(f'gamma={gamma:g}: residual {residual:.1e}, '
                       f'gap {gap:.1e}, shift {shift_err:.1e}')
    return ok, '; '.join(details)


def check_oracle():
    g = builtin('toy4')
    x0 = State.make([1., 0., 0., 0.])
    rest = State.zeros(g.n)
    cases = [
        (regime('coupled'), NoDrive(), x0, None),
        (regime('damped'), NoDrive(), x0, None),
        (regime('forced'), Sinusoid(1, 1., 1.5), rest, None),
        (regime('damped-forced'), Sinusoid(1, 1., 1.5), rest, None),
        (regime('swing'), ConstantPower(toy_power), rest,
         swing.PowerProfile(toy_power, 1.)),
    ]
    names = ('coupled', 'damped', 'forced', 'damped-forced', 'swing')
    ok, details = True, []
    for name, (cfg, drive, y0, prof) in zip(names, cases):
        ref = oracle.rk4_integrate(g, cfg, drive, y0, 1e-3, 20.,
                                   sample_every=100)
        if prof is not None:
            traj = swing.swing_solve(g, prof, y0, ref.times)
        else:
            traj = evolve(g, cfg, drive, y0, ref.times)
        err = oracle.max_deviation(traj, ref)
        ok &= err < 1e-6
        details.append(f'{name} {err:.1e}')
    return ok, ', '.join(details)


def check_structure():
    g = builtin('toy4')
    n = g.n
    J = symplectic_form(n)
    G = build_G(g, regime('damped'))
    U, P = polar.polar_decompose(g)[:2]
    eye = torch.eye(2 * n, dtype=torch.float64)
    errs = {
        'GtJG': (G.t() @ J @ G - J).abs().max().item(),
        'UtU': (U.t() @ U - eye).abs().max().item(),
        'UtJU': (U.t() @ J @ U - J).abs().max().item(),
        'P-Pt': (P - P.t()).abs().max().item(),
        'UP': (U @ P - G).abs().max().item(),
    }
    ok = all(e < 1e-9 for e in errs.values())
    ok &= torch.linalg.eigvalsh(P).min().item() > 0

    scipy_polar = optionals.try_import('scipy.linalg', 'polar')
    if scipy_polar is not None:
        u_ref, _ = scipy_polar(G.numpy())
        errs['scipy'] = abs(U.numpy() - u_ref).max()
        ok &= errs['scipy'] < 1e-9

    cfg = regime('coupled')
    traj = evolve(g, cfg, NoDrive(), State.make([1., 0., 0., 0.],
                                                [0., 1., 0., 0.]),
                  linspace_grid(100., 0.1))
    energy = trajectory_energy(g, cfg, traj)
    drift = (energy - energy[0]).abs().max().item()
    ok &= drift < 1e-8

    damped = evolve(g, synchronization.sync_config(), NoDrive(),
                    State.make([1., 0., 0., 0.]), linspace_grid(60., 0.025))
    rate = synchronization.decay_rate(damped, t_from=20.)
    lam = synchronization.lambda_S(g)
    ok &= abs(rate - lam) <= 0.05 * abs(lam)
    return ok, (', '.join(f'{k} {v:.1e}' for k, v in errs.items())
                + f', energy {drift:.1e}, decay {rate:.4f} vs {lam:.4f}')


CHECKS = {
    1: ('toy spectrum', check_toy_spectrum),
    2: ('toy eigen-data of G, P, U', check_polar_table),
    3: ('karate-club spectrum', check_zachary_table),
    4: ('karate-club synchronization times', check_zachary_sync),
    5: ('synchronization ordering', check_sync_ordering),
    6: ('undamped resonance', check_undamped_resonance),
    7: ('damped resonance', check_damped_resonance),
    8: ('karate-club influencers', check_zachary_influencers),
    9: ('swing equation', check_swing),
    10: ('closed forms against RK4', check_oracle),
    11: ('structural properties', check_structure),
}


def run_checks(out, only=None):
    """Run the checks, print one PASS/FAIL line each, return success."""
    success = True
    for key, (name, check) in CHECKS.items():
        if only is not None and key not in only:
            continue
        logger.info('running check %d: %s', key, name)
        try:
            ok, detail = check()
        except Exception as e:
            logger.debug('check %d raised', key, exc_info=True)
            ok, detail = False, f'{type(e).__name__}: {e}'
        success &= bool(ok)
        print(f'[{"PASS" if ok else "FAIL"}] {key:>2} {name}: {detail}',
              file=out)
    print(f'verify: {"PASS" if success else "FAIL"}', file=out)
    return success

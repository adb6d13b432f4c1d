"""Command-line front end.

```
osctorch spectrum  --builtin toy4
osctorch simulate  --builtin toy4 --case damped --x0 1,0,0,0 --out traj.csv
osctorch sync      --builtin zachary --v0 e:1=4 --empirical
osctorch resonance --builtin toy4 --source 1 --mode 2 --omega 2
osctorch swing     --builtin toy4 --p=-0.5,-0.2,1.05,-0.35
osctorch polar     --builtin toy4
osctorch verify
```

Reports go to stdout, logs and error messages to stderr.
Exit codes: 0 success, 1 domain error, 2 usage error, 3 failed
verification.
"""
import argparse
import contextlib
import logging
import math
import sys
import torch
from ..core import constants
from ..core.errors import (OscError, NoPeak, NotSettled, InvalidConfig,
                           ParseError)
from ..core.linalg import group_eigenvalues
from ..core.options import Option, Validated, positive, one_of
from ..core.utils import linspace_grid
from ..dynamics import (REGIMES, regime, NoDrive, Sinusoid, State, evolve,
                        eig_G, build_G)
from ..network import load, spectrum, algebraic_connectivity, density
from ..tools import synchronization, resonance, swing, polar
from .. import io
from . import _verify

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3


class RunOptions(Option):
    """Options shared by all subcommands"""
    dt: float = Validated(0.025, positive)          # Grid step
    t_max: float = Validated(60., positive)         # Grid horizon
    epsilon: float = Validated(1e-3, positive)      # Synchronization threshold
    out: str = None                                 # Trajectory CSV path
    format: str = Validated('text', one_of('text', 'csv'))
    verbose: int = Validated(0, lambda x: isinstance(x, int) and x >= 0)
    jobs: int = Validated(1, lambda x: isinstance(x, int) and x >= 1)


# ----------------------------------------------------------------------
#   parser
# ----------------------------------------------------------------------

def _common(graph=True):
    parent = argparse.ArgumentParser(add_help=False)
    if graph:
        source = parent.add_mutually_exclusive_group(required=True)
        source.add_argument('--builtin', metavar='NAME',
                            help='Builtin network (toy4, zachary, sync-a..f, '
                                 'path:N, cycle:N, complete:N, star:N)')
        source.add_argument('--edges', metavar='FILE',
                            help='Edge-list file (two 1-based ids per line)')
    parent.add_argument('-v', '--verbose', action='count', default=0,
                        help='Increase verbosity (-v info, -vv debug)')
    return parent


def _grid(parser, t_max=60.):
    parser.add_argument('--dt', type=float, default=0.025,
                        help='Grid step (default: %(default)s)')
    parser.add_argument('--t-max', dest='t_max', type=float, default=t_max,
                        help='Grid horizon (default: %(default)s)')
    parser.add_argument('--out', metavar='CSV',
                        help='Write the trajectory to this CSV file')


def _state(parser):
    parser.add_argument('--x0', default='',
                        help="Initial positions: '1,0,0,0', 'e:1=4' or a "
                             "file path (default: zeros)")
    parser.add_argument('--v0', default='',
                        help='Initial velocities, same syntax as --x0')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='osctorch',
        description='Coupled harmonic oscillators on networks.')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True
    graph = _common()

    p = sub.add_parser('spectrum', parents=[graph],
                       help='Laplacian eigenvalues and frequencies')
    p.add_argument('--method', choices=('eigh', 'jacobi'), default='eigh')
    p.add_argument('--format', choices=('text', 'csv'), default='text')

    p = sub.add_parser('simulate', parents=[graph],
                       help='Trajectory of one regime')
    p.add_argument('--case', choices=list(REGIMES), default='coupled')
    _state(p)
    _grid(p)
    p.add_argument('--node', type=int, default=1,
                   help='Driven node for forced cases (default: 1)')
    p.add_argument('--omega', type=float, default=1.,
                   help='Drive frequency (default: 1)')
    p.add_argument('--F0', type=float, default=1.,
                   help='Drive amplitude (default: 1)')
    p.add_argument('--gamma', type=float, default=1.,
                   help='Node damping of the swing case (default: 1)')
    p.add_argument('--power', metavar='FILE',
                   help='Power profile of the swing case')
    p.add_argument('--p', metavar='LIST',
                   help='Power profile as a comma list')
    p.add_argument('--rebalance', action='store_true',
                   help='Subtract the mean of an unbalanced profile')
    p.add_argument('--superpose', action='store_true',
                   help='Allow a forced case to start away from rest')

    p = sub.add_parser('sync', parents=[graph],
                       help='Synchronization time bounds')
    _state(p)
    p.add_argument('--epsilon', type=float, default=1e-3)
    p.add_argument('--alpha', type=float, default=1.,
                   help='Inter-node damping scale (default: 1)')
    p.add_argument('--order', type=int, default=1,
                   help='Rank of the dominant decay rate (default: 1)')
    p.add_argument('--fallback', action='store_true',
                   help='Use the next mode if the dominant one is '
                        'not excited')
    p.add_argument('--empirical', action='store_true',
                   help='Also measure settling times on a grid')
    p.add_argument('--dt', type=float, default=0.025)
    p.add_argument('--horizon', type=float, default=None,
                   help='Empirical grid horizon (default: automatic)')
    p.add_argument('--settle', choices=('stay', 'first'), default='stay',
                   help='Empirical settling: stay within epsilon for the '
                        'rest of the grid, or first entry after leaving '
                        '(default: stay)')

    p = sub.add_parser('resonance', parents=[graph],
                       help='Resonance frequencies and influence')
    p.add_argument('--source', type=int, default=1,
                   help='Driven node (default: 1)')
    p.add_argument('--mode', type=int, default=None,
                   help='Mode to classify nodes against')
    p.add_argument('--omega', type=float, default=None,
                   help='Simulate the response at this frequency')
    p.add_argument('--F0', type=float, default=1.)
    p.add_argument('--damped', action='store_true',
                   help='Damped coupling (c1 = 1, c2p = 1)')
    p.add_argument('--sweep', metavar='START,STOP,COUNT',
                   help='Peak amplitudes over a frequency range')
    p.add_argument('--jobs', type=int, default=1,
                   help='Worker threads for --sweep (default: 1)')
    _grid(p, t_max=100.)

    p = sub.add_parser('swing', parents=[graph],
                       help='Linear swing equation')
    p.add_argument('--power', metavar='FILE')
    p.add_argument('--p', metavar='LIST')
    p.add_argument('--gamma', type=float, default=1.)
    p.add_argument('--rebalance', action='store_true')
    p.add_argument('--shift', type=float, default=0.,
                   help='Uniform offset of the steady state')
    _state(p)
    _grid(p, t_max=100.)

    sub.add_parser('polar', parents=[graph],
                   help='Polar decomposition G = U P')

    p = sub.add_parser('verify', parents=[_common(graph=False)],
                       help='Run the acceptance checks')
    p.add_argument('--only', metavar='IDS',
                   help='Comma-separated check ids (default: all)')
    return parser


# ----------------------------------------------------------------------
#   helpers
# ----------------------------------------------------------------------

def _options(ns):
    kw = {key: getattr(ns, key) for key in RunOptions().keys()
          if getattr(ns, key, None) is not None}
    return RunOptions(**kw)


def _graph(ns):
    return load(ns.edges if ns.edges else ns.builtin)


def _initial(ns, n):
    return State.make(io.parse_state(ns.x0, n), io.parse_state(ns.v0, n))


def _power(ns, n):
    if ns.power:
        return io.read_power_profile(ns.power, n, rebalance=ns.rebalance)
    if ns.p:
        p = io.parse_state(ns.p, n)
        return swing.rebalance(p) if ns.rebalance else p
    raise InvalidConfig('A power profile is required (--power FILE or --p LIST)')


def _header(out, command, g, **values):
    print(f'# osctorch {command}: network={g.name or "-"} n={g.n} '
          f'edges={len(g.edges())}', file=out)
    if values:
        print('# ' + ' '.join(f'{k}={v}' for k, v in values.items()),
              file=out)


def _vector(vec, fmt='{:.6f}'):
    return ' '.join(fmt.format(x) for x in vec.tolist())


def _write(opt, traj):
    if opt.out:
        io.write_trajectory(opt.out, traj)
        logger.info('trajectory written to %s', opt.out)


# ----------------------------------------------------------------------
#   subcommands
# ----------------------------------------------------------------------

def cmd_spectrum(ns, opt, out):
    g = _graph(ns)
    decomp = spectrum(g, method=ns.method)
    mu = decomp.eigenvalues
    groups = group_eigenvalues(mu)
    if ns.format == 'csv':
        print('k,mu,multiplicity,omega', file=out)
        for k, (value, idx) in enumerate(groups, 1):
            print(f'{k},{value:.12g},{len(idx)},'
                  f'{math.sqrt(1 + max(value, 0.)):.12g}', file=out)
        return EXIT_OK
    _header(out, 'spectrum', g, method=ns.method)
    print(f'{"k":>4} {"mu":>12} {"mult":>5} {"omega":>10}', file=out)
    for k, (value, idx) in enumerate(groups, 1):
        omega = math.sqrt(1 + max(value, 0.))
        print(f'{k:>4} {value:>12.4f} {len(idx):>5} {omega:>10.4f}',
              file=out)
    print(f'algebraic connectivity: {algebraic_connectivity(g):.6f}',
          file=out)
    if g.n > 1:
        print(f'density: {density(g):.6f}', file=out)
    return EXIT_OK


def cmd_simulate(ns, opt, out):
    g = _graph(ns)
    times = linspace_grid(opt.t_max, opt.dt)
    y0 = _initial(ns, g.n)
    if ns.case == 'swing':
        prof = swing.PowerProfile(_power(ns, g.n), ns.gamma)
        traj = swing.swing_solve(g, prof, y0, times)
    else:
        cfg = regime(ns.case)
        drive = NoDrive()
        if REGIMES[ns.case][1] == 'sinusoid':
            drive = Sinusoid(ns.node, ns.F0, ns.omega)
        traj = evolve(g, cfg, drive, y0, times, superpose=ns.superpose)
    if opt.out:
        _write(opt, traj)
        _header(out, 'simulate', g, case=ns.case, dt=opt.dt,
                t_max=opt.t_max, csv=opt.out)
    else:
        io.write_trajectory(out, traj)
    return EXIT_OK


def cmd_sync(ns, opt, out):
    g = _graph(ns)
    if not ns.x0 and not ns.v0:
        ns.x0 = 'e:1=1'
    y0 = _initial(ns, g.n)
    sopt = synchronization.SyncOptions(
        epsilon=opt.epsilon, alpha=ns.alpha, order=ns.order, dt=opt.dt,
        horizon=ns.horizon, on_unexcited='next' if ns.fallback else 'raise',
        settle=ns.settle)
    if ns.empirical:
        report = synchronization.measure_sync(g, y0, sopt)
    else:
        report = synchronization.sync_time_bounds(
            g, y0, sopt.epsilon, sopt.alpha, sopt.order, sopt.on_unexcited)
    mode = report.dominant_mode
    _header(out, 'sync', g, epsilon=report.epsilon, alpha=report.alpha,
            order=ns.order, dt=opt.dt)
    print(f'lambda_S: {report.lambda_S:.7f}', file=out)
    print(f'dominant mode: {mode.index + 1} (mu={mode.mu:.6f}, '
          f'{mode.branch} branch)', file=out)
    print(f'{"node":>5} {"bound":>10}' +
          (f' {"empirical":>10}' if ns.empirical else ''), file=out)
    for i in range(g.n):
        line = f'{i + 1:>5} {report.per_node_bound_times[i].item():>10.3f}'
        if ns.empirical:
            line += f' {report.empirical_times[i].item():>10.3f}'
        print(line, file=out)
    print(f'mean bound time: {report.mean_bound_time:.3f}', file=out)
    if ns.empirical:
        print(f'empirical mean: {report.empirical_mean:.3f}', file=out)
        print(f'empirical max: {report.empirical_max:.3f}', file=out)
        print(f'horizon: {report.horizon:.3f}', file=out)
    return EXIT_OK


def _parse_sweep(text):
    try:
        start, stop, count = text.split(',')
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise ParseError(f'Bad --sweep {text!r}; expected START,STOP,COUNT') \
            from None
    if count < 1:
        raise ParseError('--sweep needs at least one frequency')
    if count == 1:
        return [start]
    return torch.linspace(start, stop, count, dtype=torch.float64).tolist()


def cmd_resonance(ns, opt, out):
    g = _graph(ns)
    h = ns.source
    freq = resonance.resonance_frequencies(g)
    mu = spectrum(g).eigenvalues
    _header(out, 'resonance', g, source=h, F0=ns.F0, damped=ns.damped,
            dt=opt.dt, t_max=opt.t_max)
    print(f'{"mode":>5} {"mu":>10} {"omega":>10}  influence phi_i(h) '
          f'phi_i(k), k = 1..n', file=out)
    for i in range(g.n):
        infl = [resonance.influence(g, h, k, i + 1)
                for k in range(1, g.n + 1)]
        print(f'{i + 1:>5} {mu[i].item():>10.4f} {freq[i].item():>10.4f}  '
              + ' '.join(f'{x:+.4f}' for x in infl), file=out)
    if ns.mode is not None:
        report = resonance.resonance_map(g, h, ns.mode)
        print(f'mode {ns.mode} (omega={freq[ns.mode - 1].item():.4f}):',
              file=out)
        for k, (label, phase) in enumerate(zip(report.classification,
                                               report.phase), 1):
            print(f'{k:>5} {label:<12} {phase:+d}', file=out)
    if ns.sweep:
        omegas = _parse_sweep(ns.sweep)
        peaks = resonance.frequency_sweep(
            g, h, omegas, F0=ns.F0, damped=ns.damped, t_max=opt.t_max,
            dt=opt.dt, jobs=opt.jobs)
        print('sweep: omega, sup|x_k| for k = 1..n', file=out)
        for w, row in zip(omegas, peaks):
            print(f'{w:.4f} ' + _vector(row, '{:.4f}'), file=out)
    if ns.omega is not None:
        times = linspace_grid(opt.t_max, opt.dt)
        if ns.damped:
            traj = resonance.forced_damped(g, h, ns.F0, ns.omega, times)
        else:
            traj = resonance.forced_undamped(g, h, ns.F0, ns.omega, times)
        print(f'omega={ns.omega:g}: sup|x_k| = '
              + _vector(traj.x.abs().max(dim=0).values, '{:.4f}'), file=out)
        _write(opt, traj)
    return EXIT_OK


def cmd_swing(ns, opt, out):
    g = _graph(ns)
    prof = swing.PowerProfile(_power(ns, g.n), ns.gamma)
    target = swing.steady_state(g, prof)
    limit = swing.asymptotic_displacement(g, prof)
    times = linspace_grid(opt.t_max, opt.dt)
    traj = swing.swing_solve(g, prof, _initial(ns, g.n), times,
                             shift=ns.shift)
    _header(out, 'swing', g, gamma=prof.gamma, dt=opt.dt, t_max=opt.t_max)
    print('p: ' + _vector(prof.p), file=out)
    print('steady state: ' + _vector(target), file=out)
    print('asymptotic displacement: ' + _vector(limit), file=out)
    print(f'{"node":>5} {"peak":>10} {"t_peak":>8} {"steady":>10}',
          file=out)
    for node in range(1, g.n + 1):
        try:
            m = swing.transient_metrics(traj, node)
        except (NoPeak, NotSettled) as e:
            logger.info('node %d: %s', node, e)
            final = traj.x[-1, node - 1].item()
            print(f'{node:>5} {"-":>10} {"-":>8} {final:>10.6f}', file=out)
            continue
        print(f'{node:>5} {m.first_peak_value:>10.6f} '
              f'{m.first_peak_time:>8.3f} {m.steady_state_value:>10.6f}',
              file=out)
    _write(opt, traj)
    return EXIT_OK


def cmd_polar(ns, opt, out):
    g = _graph(ns)
    factors = polar.polar_decompose(g)
    _header(out, 'polar', g, alpha=1)
    print(f'{"mode":>5} {"mu":>8} {"lam_G+":>20} {"lam_G-":>20} '
          f'{"lam_P+":>8} {"lam_P-":>8} {"theta":>8}', file=out)
    for pair, p_val, deg in zip(eig_G(g), factors.p_eigenvalues,
                                factors.angles_deg):
        print(f'{pair.index + 1:>5} {pair.mu:>8.4f} '
              f'{_complex(pair.lam_plus):>20} {_complex(pair.lam_minus):>20} '
              f'{p_val[0].item():>8.4f} {p_val[1].item():>8.4f} '
              f'{deg.item():>7.2f}d', file=out)
    G = factors.U @ factors.P
    print(f'max|UP - G|: {_residual(G, build_G(g, regime("damped"))):.2e}',
          file=out)
    return EXIT_OK


def _complex(z, fmt='{:.4f}'):
    z = complex(z)
    if abs(z.imag) < constants.zero_eig:
        return fmt.format(z.real)
    sign = '+' if z.imag >= 0 else '-'
    return f'{fmt.format(z.real)}{sign}{fmt.format(abs(z.imag))}i'


def _residual(a, b):
    return (a - b).abs().max().item()


def cmd_verify(ns, opt, out):
    only = None
    if ns.only:
        try:
            only = {int(x) for x in ns.only.split(',')}
        except ValueError:
            raise ParseError(f'Bad --only {ns.only!r}') from None
    ok = _verify.run_checks(out, only)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    'spectrum': cmd_spectrum,
    'simulate': cmd_simulate,
    'sync': cmd_sync,
    'resonance': cmd_resonance,
    'swing': cmd_swing,
    'polar': cmd_polar,
    'verify': cmd_verify,
}


# ----------------------------------------------------------------------
#   entry points
# ----------------------------------------------------------------------

def run(argv=None, stdout=None, stderr=None):
    """Run one command and return its exit code.

    Parameters
    ----------
    argv : list[str], optional
        Arguments without the program name. Default: `sys.argv[1:]`.
    stdout, stderr : text streams, optional

    Returns
    -------
    int

    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), \
                contextlib.redirect_stderr(stderr):
            ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    level = (logging.WARNING, logging.INFO)[ns.verbose] \
        if ns.verbose < 2 else logging.DEBUG
    logging.basicConfig(stream=stderr, level=level, force=True,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        opt = _options(ns)
        return COMMANDS[ns.command](ns, opt, stdout)
    except OscError as e:
        print(f'osctorch: error: {e}', file=stderr)
        return EXIT_DOMAIN


def main():
    sys.exit(run())

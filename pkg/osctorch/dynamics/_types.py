"""Value types shared by the solvers."""
import math
from typing import NamedTuple
import torch
from ..core.errors import InvalidConfig, GridError
from ..core.options import Option, Validated, non_negative
from ..core.utils import as_tensor, as_vector, as_times, default_dtype


class CouplingConfig(Option):
    """Coefficients of the equation of motion

        x'' = -(c1 I + c2 L) x - (c1p I + c2p L) x' + f(t)

    c1 ties each node to its support, c2 couples neighbours, c1p damps
    each node and c2p damps relative motion across edges.
    """
    c1: float = Validated(1., non_negative)
    c2: float = Validated(1., non_negative)
    c1p: float = Validated(0., non_negative)
    c2p: float = Validated(0., non_negative)

    def check(self):
        if not any(v > 0 for v in self.values()):
            raise InvalidConfig('At least one coupling coefficient must be '
                                'strictly positive')
        return self

    def stiffness(self, mu):
        """Squared modal frequency c1 + c2*mu."""
        return self.c1 + self.c2 * mu

    def damping(self, mu):
        """Modal damping c1p + c2p*mu."""
        return self.c1p + self.c2p * mu

    def is_free(self):
        """True when nothing ties the network to a fixed frame."""
        return self.c1 == 0 and self.c1p == 0 and self.c2p == 0

    def as_tuple(self):
        return tuple(self.values())


# name -> ((c1, c2, c1p, c2p), drive kind); 'gamma' stands for the
# node damping of the swing case.
REGIMES = {
    'coupled': ((1., 1., 0., 0.), None),
    'damped': ((1., 0., 0., 1.), None),
    'forced': ((1., 1., 0., 0.), 'sinusoid'),
    'damped-forced': ((1., 0., 0., 1.), 'sinusoid'),
    'swing': ((0., 1., 'gamma', 0.), 'constant'),
}


def regime(name, gamma=1.):
    """Coupling configuration of a named regime."""
    if name not in REGIMES:
        raise InvalidConfig(f'Unknown regime {name!r}; expected one of '
                            f'{list(REGIMES)}')
    coefs = [gamma if c == 'gamma' else c for c in REGIMES[name][0]]
    return CouplingConfig(*coefs).check()


# ----------------------------------------------------------------------
#   forcing terms
# ----------------------------------------------------------------------

class ScalarDrive(NamedTuple):
    """Forcing of a single mode: 0, a*sin(frequency*t), or a constant a."""
    kind: str = 'zero'
    amplitude: float = 0.
    frequency: float = 0.

    def __call__(self, t):
        t = torch.as_tensor(t, dtype=default_dtype)
        if self.kind == 'sinusoid':
            return self.amplitude * torch.sin(self.frequency * t)
        if self.kind == 'constant':
            return torch.full_like(t, self.amplitude)
        return torch.zeros_like(t)


class NoDrive:
    """No external forcing."""
    kind = None

    def check(self, n):
        return self

    def force(self, t, n):
        return torch.zeros(n, dtype=default_dtype)

    def modal(self, phi):
        return [ScalarDrive()] * phi.shape[1]

    def __repr__(self):
        return 'NoDrive()'


class Sinusoid(NoDrive):
    """Force `amplitude * sin(frequency * t)` acting on one node."""
    kind = 'sinusoid'

    def __init__(self, node, amplitude=1., frequency=1.):
        """

        Parameters
        ----------
        node : int
            1-based id of the driven node.
        amplitude : float, default=1
        frequency : float, default=1

        """
        self.node = int(node)
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)

    def check(self, n):
        if not 1 <= self.node <= n:
            raise InvalidConfig(f'Driven node {self.node} out of range '
                                f'[1, {n}]')
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise InvalidConfig(f'Drive frequency must be > 0, '
                                f'got {self.frequency}')
        if not math.isfinite(self.amplitude):
            raise InvalidConfig('Drive amplitude must be finite')
        return self

    def force(self, t, n):
        f = torch.zeros(n, dtype=default_dtype)
        f[self.node - 1] = self.amplitude * math.sin(self.frequency * t)
        return f

    def modal(self, phi):
        coefs = self.amplitude * phi[self.node - 1]
        return [ScalarDrive('sinusoid', a, self.frequency)
                for a in coefs.tolist()]

    def __repr__(self):
        return (f'Sinusoid(node={self.node}, amplitude={self.amplitude:g}, '
                f'frequency={self.frequency:g})')


class ConstantPower(NoDrive):
    """Constant per-node forcing vector p."""
    kind = 'constant'

    def __init__(self, p):
        self.p = as_tensor(p).reshape(-1)

    def check(self, n):
        try:
            as_vector(self.p, n, 'power vector')
        except ValueError as e:
            raise InvalidConfig(str(e)) from None
        return self

    def force(self, t, n):
        return self.p.clone()

    def modal(self, phi):
        coefs = phi.t() @ self.p
        return [ScalarDrive('constant', a) for a in coefs.tolist()]

    def __repr__(self):
        return f'ConstantPower(p={self.p.tolist()})'


# ----------------------------------------------------------------------
#   states and trajectories
# ----------------------------------------------------------------------

class State(NamedTuple):
    """Positions `x` and velocities `v` of all nodes."""
    x: torch.Tensor
    v: torch.Tensor

    @classmethod
    def make(cls, x, v=None, n=None):
        """Build a validated state; a missing `v` means at rest."""
        try:
            x = as_vector(x, n, 'x0')
            v = torch.zeros_like(x) if v is None else \
                as_vector(v, len(x), 'v0')
        except ValueError as e:
            raise InvalidConfig(str(e)) from None
        return cls(x, v)

    @classmethod
    def zeros(cls, n):
        return cls(torch.zeros(n, dtype=default_dtype),
                   torch.zeros(n, dtype=default_dtype))

    @classmethod
    def from_vector(cls, y):
        n = len(y) // 2
        return cls(y[:n], y[n:])

    def as_vector(self):
        return torch.cat([self.x, self.v])

    @property
    def n(self):
        return len(self.x)

    def norm(self):
        return self.as_vector().norm().item()


class Trajectory:
    """Positions and velocities of all nodes on a time grid.

    Attributes
    ----------
    times : (T,) tensor
        Strictly increasing.
    x, v : (T, N) tensor
    """

    def __init__(self, times, x, v):
        times = as_times(times)
        x = as_tensor(x).reshape(len(times), -1)
        v = as_tensor(v).reshape(len(times), -1)
        if len(times) < 1:
            raise GridError('A trajectory needs at least one time point')
        if len(times) > 1 and not (times[1:] > times[:-1]).all():
            raise GridError('Time grid must be strictly increasing')
        if x.shape != v.shape:
            raise GridError('Positions and velocities differ in shape')
        self.times = times
        self.x = x
        self.v = v

    @property
    def n(self):
        return self.x.shape[1]

    def __len__(self):
        return len(self.times)

    def index(self, t, tol=1e-9):
        """Index of grid time `t`, or GridError."""
        k = int(torch.argmin((self.times - t).abs()))
        if abs(self.times[k].item() - t) > tol * max(1., abs(t)):
            raise GridError(f't={t:g} is not on the trajectory grid')
        return k

    def state(self, k):
        return State(self.x[k], self.v[k])

    def at(self, t):
        return self.state(self.index(t))

    @property
    def initial(self):
        return self.state(0)

    def as_matrix(self):
        """(T, 1 + 2N) matrix of columns `t, x_1..x_N, v_1..v_N`."""
        return torch.cat([self.times[:, None], self.x, self.v], dim=1)

    def __repr__(self):
        return (f'Trajectory(n={self.n}, t=[{self.times[0].item():g}, '
                f'{self.times[-1].item():g}], samples={len(self)})')


class GEigenpair(NamedTuple):
    """Pair of eigenvalues and eigenvectors of G attached to one mode.

    Attributes
    ----------
    index : int
        0-based Laplacian mode index.
    mu : float
        Laplacian eigenvalue.
    lam_plus, lam_minus : complex
        Roots of `lam**2 + alpha*mu*lam + 1 = 0`.
    norm : tuple[float, float]
        Normalization factors `1/sqrt(1 + |lam|**2)`.
    vec_plus, vec_minus : (2N,) complex tensor
        `(phi, lam*phi) / sqrt(1 + |lam|**2)`.
    """
    index: int
    mu: float
    lam_plus: complex
    lam_minus: complex
    norm: tuple
    vec_plus: torch.Tensor
    vec_minus: torch.Tensor

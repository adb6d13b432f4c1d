"""Parsers for initial states and power profiles."""
import os
import re
import numpy as np
import torch
from ..core import constants
from ..core.errors import ParseError, UnbalancedPower
from ..core.utils import default_dtype

_sparse_entry = re.compile(r'^e:(\d+)=(.+)$')


def parse_state(spec, n):
    """Parse a vector of initial positions or velocities.

    Accepted forms:

    * empty or None: all zeros;
    * a comma list with `n` values, e.g. '1,0,0,0';
    * sparse entries 'e:<node>=<value>', comma-separated, e.g.
      'e:1=4' or 'e:1=4,e:3=-1' (1-based nodes, others zero);
    * the path of a text file with `n` values (one per line, or
      comma/whitespace separated).

    Returns
    -------
    (n,) tensor

    Raises
    ------
    ParseError

    """
    if spec is None or not str(spec).strip():
        return torch.zeros(n, dtype=default_dtype)
    spec = str(spec).strip()
    if spec.startswith('e:'):
        vec = torch.zeros(n, dtype=default_dtype)
        for token in spec.split(','):
            match = _sparse_entry.match(token.strip())
            if not match:
                raise ParseError(f'Bad sparse entry {token!r}; expected '
                                 f'e:<node>=<value>')
            node = int(match.group(1))
            if not 1 <= node <= n:
                raise ParseError(f'Node {node} out of range [1, {n}]')
            vec[node - 1] = _float(match.group(2))
        return vec
    if os.path.isfile(spec):
        return read_vector(spec, n)
    values = [_float(v) for v in spec.split(',')]
    if len(values) != n:
        raise ParseError(f'Expected {n} values, got {len(values)} in '
                         f'{spec!r}')
    return torch.as_tensor(values, dtype=default_dtype)


def _float(token):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f'Not a number: {token!r}') from None
    if not np.isfinite(value):
        raise ParseError(f'Not a finite number: {token!r}')
    return value


def read_vector(path, n=None):
    """Read a vector of reals from a text file."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read().replace(',', ' ')
        data = np.loadtxt(text.splitlines(), ndmin=1, comments='#')
    except ValueError as e:
        raise ParseError(f'{path}: {e}') from None
    data = data.reshape(-1)
    if n is not None and len(data) != n:
        raise ParseError(f'{path}: expected {n} values, got {len(data)}')
    if not np.isfinite(data).all():
        raise ParseError(f'{path}: non-finite values')
    return torch.as_tensor(data, dtype=default_dtype)


def read_power_profile(path, n=None, rebalance=False):
    """Read per-node power injections (one value per line).

    Parameters
    ----------
    path : str
    n : int, optional
        Expected number of nodes.
    rebalance : bool, default=False
        Subtract the mean instead of rejecting an unbalanced profile.

    Raises
    ------
    ParseError
    UnbalancedPower
        If `|sum(p)| > 1e-9` and `rebalance` is False.

    """
    p = read_vector(path, n)
    total = p.sum().item()
    if abs(total) > constants.balance_tol:
        if not rebalance:
            raise UnbalancedPower(f'{path}: sum(p) = {total:.6g}; use '
                                  f'rebalance to subtract the mean')
        p = p - p.mean()
    return p

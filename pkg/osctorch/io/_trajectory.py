"""Trajectory CSV files.

Layout: a header `t,x_1,...,x_n,v_1,...,v_n` then one row per sample,
values written with 12 significant digits, LF line endings.
"""
import logging
import numpy as np
import torch
from ..core.errors import ParseError
from ..core.utils import default_dtype
from ..dynamics import Trajectory

logger = logging.getLogger(__name__)

float_format = '%.12g'


def header(n):
    cols = ['t'] + [f'x_{i}' for i in range(1, n + 1)] \
        + [f'v_{i}' for i in range(1, n + 1)]
    return ','.join(cols)


def write_trajectory(path, traj):
    """Write a trajectory as CSV.

    Parameters
    ----------
    path : str or path_like or file object
    traj : Trajectory

    """
    data = traj.as_matrix().cpu().numpy()
    np.savetxt(path, data, fmt=float_format, delimiter=',', newline='\n',
               header=header(traj.n), comments='')
    logger.debug('wrote %d samples to %s', len(traj), path)


def read_trajectory(path, numpy=False):
    """Read a trajectory CSV file.

    Parameters
    ----------
    path : str or path_like
    numpy : bool, default=False
        Return the raw `(T, 1 + 2n)` numpy array instead of a Trajectory.

    Returns
    -------
    Trajectory or np.ndarray

    Raises
    ------
    ParseError
        Missing or inconsistent header, non-numeric values.

    """
    with open(path, 'r', encoding='utf-8') as f:
        first = f.readline().strip()
        cols = first.split(',')
        if not cols or cols[0] != 't' or len(cols) % 2 != 1:
            raise ParseError(f'{path}: not a trajectory file (header '
                             f'{first!r})')
        n = (len(cols) - 1) // 2
        if first != header(n):
            raise ParseError(f'{path}: unexpected header {first!r}')
        try:
            data = np.loadtxt(f, delimiter=',', ndmin=2)
        except ValueError as e:
            raise ParseError(f'{path}: {e}') from None
    if data.shape[1] != len(cols):
        raise ParseError(f'{path}: expected {len(cols)} columns, got '
                         f'{data.shape[1]}')
    if numpy:
        return data
    data = torch.as_tensor(data, dtype=default_dtype)
    return Trajectory(data[:, 0], data[:, 1:n + 1], data[:, n + 1:])

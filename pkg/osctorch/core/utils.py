"""PyTorch utilities."""

import torch

default_dtype = torch.float64


def as_tensor(input, dtype=default_dtype, device=None):
    """Convert object to tensor.

    This function expands ``torch.as_tensor`` by accepting nested lists
    of tensors. It works by recursively stacking elements of the input
    list.

    Parameters
    ----------
    input : tensor_like
        Input object: tensor or (nested) list/tuple of tensors/scalars
    dtype : torch.dtype, default=float64
        Output data type.
    device : torch.device, optional
        Output device

    Returns
    -------
    output : tensor
        Output tensor.

    """
    def _stack(x, dtype, device):
        if torch.is_tensor(x):
            return x.to(device if device is not None else x.device,
                        dtype if dtype is not None else x.dtype)
        if isinstance(x, (list, tuple)) and any(torch.is_tensor(e) for e in x):
            return torch.stack([_stack(e, dtype, device) for e in x])
        return torch.as_tensor(x, dtype=dtype, device=device)

    return _stack(input, dtype, device)


def as_vector(input, n=None, name='vector'):
    """Convert to a finite float64 vector, optionally of length `n`.

    Raises
    ------
    ValueError
        If the input is not one-dimensional, has the wrong length,
        or holds non-finite values.
    """
    vec = as_tensor(input).reshape(-1)
    if n is not None and vec.numel() != n:
        raise ValueError(f'{name}: expected {n} values, got {vec.numel()}')
    if not torch.isfinite(vec).all():
        raise ValueError(f'{name}: non-finite entries')
    return vec


def as_times(times):
    """Convert a time grid to a 1D float64 tensor.

    Scalars are promoted to a grid of one point.
    """
    times = as_tensor(times).reshape(-1)
    return times


def linspace_grid(t_max, dt, t0=0.):
    """Uniform grid `t0, t0 + dt, ...` up to `t_max` (included).

    Grid points are computed as `t0 + k*dt` rather than accumulated, so
    that long grids do not drift.
    """
    steps = int(round((t_max - t0) / dt))
    return t0 + dt * torch.arange(steps + 1, dtype=default_dtype)


def outer_sum(coeffs, vectors):
    """Assemble `sum_i coeffs[:, i] (x) vectors[:, i]`.

    Parameters
    ----------
    coeffs : (T, K) tensor
        Time courses of K modes.
    vectors : (N, K) tensor
        Mode shapes.

    Returns
    -------
    (T, N) tensor

    """
    return coeffs @ vectors.transpose(-1, -2)

"""Deterministic compensated reductions.

All floating-point sums in the package go through :func:`pairwise_sum`, a
pairwise tree reduction in which every addition is an error-free TwoSum and
the rounding errors are accumulated alongside.  The tree shape depends only on
the length of the input, so equal inputs give bit-identical output.
"""

from __future__ import annotations

import numpy as np


def _two_sum(a, b):
    s = a + b
    bp = s - a
    err = (a - (s - bp)) + (b - bp)
    return s, err


def pairwise_sum(values, axis: int = -1):
    """Compensated pairwise sum of ``values`` along ``axis``.

    Works for real and complex arrays.  Returns a scalar for 1-D input.
    """
    arr = np.asarray(values)
    if arr.dtype.kind not in "fc":
        arr = arr.astype(np.float64)
    arr = np.moveaxis(arr, axis, -1)
    if arr.shape[-1] == 0:
        out = np.zeros(arr.shape[:-1], dtype=arr.dtype)
        return out[()] if out.ndim == 0 else out
    err = np.zeros(arr.shape[:-1], dtype=arr.dtype)
    while arr.shape[-1] > 1:
        n = arr.shape[-1]
        if n % 2:
            tail = arr[..., -1:]
            arr = arr[..., :-1]
        else:
            tail = None
        s, e = _two_sum(arr[..., 0::2], arr[..., 1::2])
        err = err + np.sum(e, axis=-1)
        arr = s if tail is None else np.concatenate([s, tail], axis=-1)
    out = arr[..., 0] + err
    return out[()] if out.ndim == 0 else out

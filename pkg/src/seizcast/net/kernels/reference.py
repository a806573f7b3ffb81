"""Numpy kernel backend.

The dilated correlation is expressed as one big tensor contraction over a
strided tap view of the input, so the heavy lifting lands in BLAS. The
tap view enumerates, for every output position, the input values each
kernel tap touches; no data is copied until the contraction itself.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import as_strided


def _tap_view(x: np.ndarray, kernel_shape, dilation, out_spatial) -> np.ndarray:
    """Read-only view (Min, kC, kF, kT, oC, oF, oT) of the input taps."""
    m, _, _, _ = x.shape
    k_c, k_f, k_t = kernel_shape
    d_c, d_f, d_t = dilation
    s_m, s_c, s_f, s_t = x.strides
    return as_strided(
        x,
        shape=(m, k_c, k_f, k_t, *out_spatial),
        strides=(s_m, s_c * d_c, s_f * d_f, s_t * d_t, s_c, s_f, s_t),
        writeable=False,
    )


def _out_spatial(in_spatial, kernel_shape, dilation):
    return tuple(
        n - ((k - 1) * d + 1) + 1
        for n, k, d in zip(in_spatial, kernel_shape, dilation)
    )


def conv3d_valid_forward(x, w, dilation):
    out_spatial = _out_spatial(x.shape[1:], w.shape[2:], dilation)
    taps = _tap_view(x, w.shape[2:], dilation, out_spatial)
    return np.tensordot(w, taps, axes=([1, 2, 3, 4], [0, 1, 2, 3]))


def conv3d_valid_grad_w(x, grad_out, kernel_shape, dilation):
    taps = _tap_view(x, kernel_shape, dilation, grad_out.shape[1:])
    return np.tensordot(grad_out, taps, axes=([1, 2, 3], [4, 5, 6]))


def conv3d_valid_grad_x(w, grad_out, in_shape, dilation):
    grad_x = np.zeros(in_shape, dtype=np.float64)
    o_c, o_f, o_t = grad_out.shape[1:]
    d_c, d_f, d_t = dilation
    # One rank-reducing contraction per kernel tap, scattered back at the
    # tap's dilated offset. Kernels here have at most 12 taps.
    for i in range(w.shape[2]):
        for j in range(w.shape[3]):
            for k in range(w.shape[4]):
                contrib = np.tensordot(w[:, :, i, j, k], grad_out, axes=(0, 0))
                grad_x[
                    :,
                    i * d_c : i * d_c + o_c,
                    j * d_f : j * d_f + o_f,
                    k * d_t : k * d_t + o_t,
                ] += contrib
    return grad_x

"""Valid-mode dilated 3D convolution kernels with selectable backends.

Two interchangeable implementations of the same three primitives:

- "python": numpy stride tricks plus BLAS-backed tensordot contractions.
- "cython": compiled typed-memoryview loops, present when the extension
  built.

The active backend is chosen at import from the SEIZCAST_KERNELS
environment variable ("auto", "python" or "cython") and can be switched
at runtime with set_backend. "auto" resolves to the python backend: at
the tensor sizes this model produces, the BLAS contractions win (see
benchmarks/bench_kernels.py), and numpy is always available.

All functions take float64 C-contiguous arrays. Shapes follow the
valid-convolution law: for input (Min, C, F, T), weights
(Mout, Min, kC, kF, kT) and dilation (dC, dF, dT), the output is
(Mout, C - eC + 1, F - eF + 1, T - eT + 1) where e = (k - 1) * d + 1 per
axis. Padding is the caller's job.
"""

from __future__ import annotations

import os

import numpy as np

from ...errors import ConfigError, ShapeMismatch
from . import reference

_BACKENDS = {"python": reference}
try:
    from . import _conv3d_cy
except ImportError:
    _conv3d_cy = None
else:
    _BACKENDS["cython"] = _conv3d_cy

_active_name = "python"
_active = reference


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return _active_name


def set_backend(name: str) -> None:
    """Select the kernel implementation ("auto", "python" or "cython")."""
    global _active_name, _active
    if name == "auto":
        name = "python"
    if name not in ("python", "cython"):
        raise ConfigError(f"unknown kernel backend {name!r}")
    if name not in _BACKENDS:
        raise ConfigError(
            f"kernel backend {name!r} is unavailable (extension not built)"
        )
    _active_name = name
    _active = _BACKENDS[name]


def extents(
    kernel_shape: tuple[int, int, int], dilation: tuple[int, int, int]
) -> tuple[int, int, int]:
    """Span covered by each kernel axis: (k - 1) * d + 1."""
    return tuple((k - 1) * d + 1 for k, d in zip(kernel_shape, dilation))


def _check_dilation(dilation: tuple[int, int, int]) -> None:
    if len(dilation) != 3 or any(d < 1 or d != int(d) for d in dilation):
        raise ShapeMismatch(f"dilation must be three positive ints, got {dilation}")


def _as_input(arr: np.ndarray, ndim: int, what: str) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if arr.ndim != ndim:
        raise ShapeMismatch(f"{what} must be {ndim}D, got shape {arr.shape}")
    return arr


def _out_shape(
    in_shape: tuple[int, ...],
    w_shape: tuple[int, ...],
    dilation: tuple[int, int, int],
) -> tuple[int, int, int, int]:
    m_out, m_in = w_shape[0], w_shape[1]
    if in_shape[0] != m_in:
        raise ShapeMismatch(
            f"input has {in_shape[0]} maps, weights expect {m_in}"
        )
    ext = extents(w_shape[2:], dilation)
    spatial = tuple(n - e + 1 for n, e in zip(in_shape[1:], ext))
    if any(s < 1 for s in spatial):
        raise ShapeMismatch(
            f"kernel extent {ext} exceeds input spatial dims {in_shape[1:]}"
        )
    return (m_out, *spatial)


def conv3d_valid_forward(
    x: np.ndarray, w: np.ndarray, dilation: tuple[int, int, int]
) -> np.ndarray:
    """Correlate x (Min, C, F, T) with dilated taps of w (Mout, Min, kC, kF, kT)."""
    x = _as_input(x, 4, "input")
    w = _as_input(w, 5, "weights")
    _check_dilation(dilation)
    _out_shape(x.shape, w.shape, dilation)
    return _active.conv3d_valid_forward(x, w, dilation)


def conv3d_valid_grad_w(
    x: np.ndarray,
    grad_out: np.ndarray,
    kernel_shape: tuple[int, int, int],
    dilation: tuple[int, int, int],
) -> np.ndarray:
    """Adjoint of the forward pass with respect to the weights."""
    x = _as_input(x, 4, "input")
    grad_out = _as_input(grad_out, 4, "grad_out")
    _check_dilation(dilation)
    w_shape = (grad_out.shape[0], x.shape[0], *kernel_shape)
    expect = _out_shape(x.shape, w_shape, dilation)
    if grad_out.shape != expect:
        raise ShapeMismatch(f"grad_out shape {grad_out.shape}, expected {expect}")
    return _active.conv3d_valid_grad_w(x, grad_out, tuple(kernel_shape), dilation)


def conv3d_valid_grad_x(
    w: np.ndarray,
    grad_out: np.ndarray,
    in_shape: tuple[int, int, int, int],
    dilation: tuple[int, int, int],
) -> np.ndarray:
    """Adjoint of the forward pass with respect to the input."""
    w = _as_input(w, 5, "weights")
    grad_out = _as_input(grad_out, 4, "grad_out")
    _check_dilation(dilation)
    expect = _out_shape(tuple(in_shape), w.shape, dilation)
    if grad_out.shape != expect:
        raise ShapeMismatch(f"grad_out shape {grad_out.shape}, expected {expect}")
    return _active.conv3d_valid_grad_x(w, grad_out, tuple(in_shape), dilation)


set_backend(os.environ.get("SEIZCAST_KERNELS", "auto"))

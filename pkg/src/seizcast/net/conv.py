"""Dilated 3D convolution layer with shape-preserving zero padding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeMismatch
from . import kernels


def effective_extent(k: int, d: int) -> int:
    """Span covered by a size-k kernel with taps d apart: (k - 1) * d + 1."""
    if k < 1 or d < 1:
        raise ShapeMismatch(f"kernel size and dilation must be >= 1, got {k}, {d}")
    return (k - 1) * d + 1


def same_padding(extent: int) -> tuple[int, int]:
    """Zero pad (before, after) keeping output length equal to input length."""
    before = (extent - 1) // 2
    return before, extent - 1 - before


@dataclass(frozen=True)
class ConvSpec:
    """One convolution layer: kernel geometry, dilation, and map counts."""

    kernel: tuple[int, int, int]
    dilation: tuple[int, int, int]
    n_filters: int
    in_maps: int

    def __post_init__(self) -> None:
        if len(self.kernel) != 3 or any(k < 1 for k in self.kernel):
            raise ShapeMismatch(f"kernel must be three sizes >= 1, got {self.kernel}")
        if len(self.dilation) != 3 or any(d < 1 for d in self.dilation):
            raise ShapeMismatch(
                f"dilation must be three sizes >= 1, got {self.dilation}"
            )
        if self.n_filters < 1 or self.in_maps < 1:
            raise ShapeMismatch("n_filters and in_maps must be >= 1")

    @property
    def extents(self) -> tuple[int, int, int]:
        return tuple(
            effective_extent(k, d) for k, d in zip(self.kernel, self.dilation)
        )

    @property
    def weight_shape(self) -> tuple[int, int, int, int, int]:
        return (self.n_filters, self.in_maps, *self.kernel)


def _pad_same(x: np.ndarray, spec: ConvSpec) -> np.ndarray:
    pads = [(0, 0)] + [same_padding(e) for e in spec.extents]
    return np.pad(x, pads)


def _check_forward_shapes(x: np.ndarray, spec: ConvSpec, w: np.ndarray,
                          b: np.ndarray | None) -> None:
    if x.ndim != 4 or x.shape[0] != spec.in_maps:
        raise ShapeMismatch(
            f"input shape {x.shape} does not provide {spec.in_maps} maps"
        )
    if w.shape != spec.weight_shape:
        raise ShapeMismatch(f"weights {w.shape}, spec wants {spec.weight_shape}")
    if b is not None and b.shape != (spec.n_filters,):
        raise ShapeMismatch(f"bias {b.shape}, spec wants ({spec.n_filters},)")


def conv3d_forward(
    x: np.ndarray, spec: ConvSpec, weights: np.ndarray, bias: np.ndarray
) -> np.ndarray:
    """Dilated correlation with zero padding that preserves spatial shape.

    Args:
        x: input maps, shape (in_maps, C, F, T) float64.
        spec: layer geometry.
        weights: (n_filters, in_maps, kC, kF, kT).
        bias: (n_filters,).

    Returns:
        (n_filters, C, F, T) array.
    """
    _check_forward_shapes(x, spec, weights, bias)
    out = kernels.conv3d_valid_forward(_pad_same(x, spec), weights, spec.dilation)
    return out + bias[:, None, None, None]


def conv3d_backward(
    x: np.ndarray, spec: ConvSpec, weights: np.ndarray, grad_out: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact adjoints of conv3d_forward.

    Args:
        x: the forward input (unpadded).
        spec: layer geometry.
        weights: forward weights.
        grad_out: upstream gradient, same shape as the forward output.

    Returns:
        (grad_x, grad_w, grad_b). Gradient contributions that the forward
        pass read from padding are dropped from grad_x.
    """
    _check_forward_shapes(x, spec, weights, None)
    if grad_out.shape != (spec.n_filters, *x.shape[1:]):
        raise ShapeMismatch(
            f"grad_out {grad_out.shape}, expected {(spec.n_filters, *x.shape[1:])}"
        )
    xp = _pad_same(x, spec)
    grad_b = grad_out.sum(axis=(1, 2, 3))
    grad_w = kernels.conv3d_valid_grad_w(xp, grad_out, spec.kernel, spec.dilation)
    grad_xp = kernels.conv3d_valid_grad_x(weights, grad_out, xp.shape, spec.dilation)
    crops = [same_padding(e) for e in spec.extents]
    grad_x = grad_xp[
        :,
        crops[0][0] : grad_xp.shape[1] - crops[0][1],
        crops[1][0] : grad_xp.shape[2] - crops[1][1],
        crops[2][0] : grad_xp.shape[3] - crops[2][1],
    ]
    return np.ascontiguousarray(grad_x), grad_w, grad_b

"""Pointwise, pooling and classifier-head layers with exact adjoints."""

from __future__ import annotations

import numpy as np

from ..errors import NonFiniteInput, PoolLargerThanInput, ShapeMismatch


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(x: np.ndarray, grad_out: np.ndarray) -> np.ndarray:
    # subgradient 0 at exactly 0
    return np.where(x > 0.0, grad_out, 0.0)


def maxpool3d(
    x: np.ndarray, pool: tuple[int, int, int]
) -> tuple[np.ndarray, np.ndarray]:
    """Non-overlapping max pooling over the three spatial axes.

    Stride equals the pool size; trailing elements that do not fill a
    window are discarded. Ties go to the first position in row-major
    order inside the window.

    Args:
        x: (maps, C, F, T) array.
        pool: window size (pC, pF, pT).

    Returns:
        (pooled, indices): pooled has shape (maps, C//pC, F//pF, T//pT);
        indices holds, per pooled cell, the flat row-major position of
        its maximum within x, for use by maxpool3d_backward.
    """
    if x.ndim != 4:
        raise ShapeMismatch(f"expected (maps, C, F, T), got {x.shape}")
    p_c, p_f, p_t = pool
    m, c, f, t = x.shape
    if p_c > c or p_f > f or p_t > t:
        raise PoolLargerThanInput(f"pool {pool} exceeds input dims {x.shape[1:]}")
    o_c, o_f, o_t = c // p_c, f // p_f, t // p_t
    win = (
        x[:, : o_c * p_c, : o_f * p_f, : o_t * p_t]
        .reshape(m, o_c, p_c, o_f, p_f, o_t, p_t)
        .transpose(0, 1, 3, 5, 2, 4, 6)
        .reshape(m, o_c, o_f, o_t, p_c * p_f * p_t)
    )
    flat_in_window = win.argmax(axis=4)
    i_c, i_f, i_t = np.unravel_index(flat_in_window, (p_c, p_f, p_t))
    grid_m, grid_c, grid_f, grid_t = np.meshgrid(
        np.arange(m), np.arange(o_c), np.arange(o_f), np.arange(o_t), indexing="ij"
    )
    abs_c = grid_c * p_c + i_c
    abs_f = grid_f * p_f + i_f
    abs_t = grid_t * p_t + i_t
    indices = ((grid_m * c + abs_c) * f + abs_f) * t + abs_t
    return win.max(axis=4), indices


def maxpool3d_backward(
    indices: np.ndarray, grad_out: np.ndarray, in_shape: tuple[int, int, int, int]
) -> np.ndarray:
    """Route each upstream gradient to its recorded argmax position."""
    if indices.shape != grad_out.shape:
        raise ShapeMismatch(
            f"indices {indices.shape} and grad_out {grad_out.shape} differ"
        )
    grad_x = np.zeros(int(np.prod(in_shape)), dtype=np.float64)
    np.add.at(grad_x, indices.ravel(), grad_out.ravel())
    return grad_x.reshape(in_shape)


def global_avg_pool(x: np.ndarray) -> np.ndarray:
    """Mean of each map over all spatial positions: (maps, C, F, T) -> (maps,)."""
    if x.ndim != 4:
        raise ShapeMismatch(f"expected (maps, C, F, T), got {x.shape}")
    return x.mean(axis=(1, 2, 3))


def global_avg_pool_backward(
    grad_out: np.ndarray, in_shape: tuple[int, int, int, int]
) -> np.ndarray:
    n = in_shape[1] * in_shape[2] * in_shape[3]
    return np.broadcast_to(
        grad_out[:, None, None, None] / n, in_shape
    ).copy()


def softmax(logits: np.ndarray) -> np.ndarray:
    """Numerically stable softmax (max subtraction)."""
    shifted = logits - logits.max()
    e = np.exp(shifted)
    return e / e.sum()


def xent_from_logits(logits: np.ndarray, label: int) -> float:
    """Cross-entropy -ln softmax(logits)[label] via log-sum-exp."""
    m = logits.max()
    return float(np.log(np.exp(logits - m).sum()) - (logits[label] - m))


def dense_softmax_xent(
    features: np.ndarray, w: np.ndarray, b: np.ndarray, label: int
) -> tuple[np.ndarray, float, dict[str, np.ndarray]]:
    """Dense layer, softmax, and cross-entropy loss in one fused op.

    Args:
        features: (n_features,) vector.
        w: (n_classes, n_features) weight matrix.
        b: (n_classes,) bias.
        label: true class index.

    Returns:
        (probs, loss, grads) where grads holds exact adjoints under keys
        "w", "b" and "features".

    Raises:
        NonFiniteInput: any input value is NaN or infinite.
    """
    if w.ndim != 2 or features.shape != (w.shape[1],) or b.shape != (w.shape[0],):
        raise ShapeMismatch(
            f"inconsistent shapes features={features.shape} w={w.shape} b={b.shape}"
        )
    if not 0 <= label < w.shape[0]:
        raise ShapeMismatch(f"label {label} outside {w.shape[0]} classes")
    if not (
        np.isfinite(features).all() and np.isfinite(w).all() and np.isfinite(b).all()
    ):
        raise NonFiniteInput("dense layer received non-finite values")
    logits = w @ features + b
    probs = softmax(logits)
    loss = xent_from_logits(logits, label)
    dlogits = probs.copy()
    dlogits[label] -= 1.0
    grads = {
        "w": np.outer(dlogits, features),
        "b": dlogits,
        "features": w.T @ dlogits,
    }
    return probs, loss, grads

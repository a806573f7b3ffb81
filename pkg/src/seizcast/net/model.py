"""Four-branch multi-scale dilated 3D CNN.

Each branch applies [conv -> relu -> maxpool] three times with its own
dilation, then collapses to an n_filters vector by global average
pooling. The four vectors are concatenated in fixed branch order and a
dense layer with softmax produces the two class probabilities (class 1 =
preictal). All arithmetic is float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidSpec, ShapeMismatch, StaleCache
from . import conv
from .conv import ConvSpec
from .layers import (
    global_avg_pool,
    global_avg_pool_backward,
    maxpool3d,
    maxpool3d_backward,
    relu,
    relu_backward,
    softmax,
    xent_from_logits,
)

LAYER_KERNELS = [(1, 2, 3), (2, 2, 3), (2, 2, 3)]
LAYER_POOLS = [(1, 2, 2), (2, 2, 2), (2, 2, 2)]
BRANCH_DILATIONS = [(1, 1, 3), (1, 1, 5), (3, 1, 3), (3, 1, 5)]
N_CLASSES = 2


@dataclass(frozen=True)
class ModelConfig:
    """Input geometry, width and init seed of the network."""

    input_shape: tuple[int, int, int]
    n_filters: int = 16
    seed: int = 0

    def __post_init__(self) -> None:
        if len(self.input_shape) != 3 or any(s < 1 for s in self.input_shape):
            raise InvalidSpec(f"bad input shape {self.input_shape}")
        if self.n_filters < 1:
            raise InvalidSpec("n_filters must be >= 1")
        dims = self.input_shape
        for pool in LAYER_POOLS:
            dims = tuple(n // p for n, p in zip(dims, pool))
            if any(d < 1 for d in dims):
                raise InvalidSpec(
                    f"input {self.input_shape} collapses to {dims} under "
                    f"pooling; every dim must stay >= 1"
                )

    @property
    def n_branches(self) -> int:
        return len(BRANCH_DILATIONS)

    @property
    def feature_len(self) -> int:
        return self.n_branches * self.n_filters

    def branch_specs(self, branch: int) -> list[ConvSpec]:
        dilation = BRANCH_DILATIONS[branch]
        specs = []
        for layer, kernel in enumerate(LAYER_KERNELS):
            specs.append(
                ConvSpec(
                    kernel=kernel,
                    dilation=dilation,
                    n_filters=self.n_filters,
                    in_maps=1 if layer == 0 else self.n_filters,
                )
            )
        return specs


@dataclass
class ModelParams:
    """All trainable arrays, ordered branch-major, layer-major, dense last."""

    conv_w: list[list[np.ndarray]]
    conv_b: list[list[np.ndarray]]
    dense_w: np.ndarray
    dense_b: np.ndarray

    def named_arrays(self) -> list[tuple[str, np.ndarray]]:
        """Canonical (name, array) order: per branch per layer weights then
        bias, then the dense weights and bias."""
        out = []
        for b, (ws, bs) in enumerate(zip(self.conv_w, self.conv_b)):
            for layer, (w, bias) in enumerate(zip(ws, bs)):
                out.append((f"branch{b}.layer{layer}.w", w))
                out.append((f"branch{b}.layer{layer}.b", bias))
        out.append(("dense.w", self.dense_w))
        out.append(("dense.b", self.dense_b))
        return out

    @property
    def n_params(self) -> int:
        return sum(arr.size for _, arr in self.named_arrays())

    def flatten(self) -> np.ndarray:
        return np.concatenate([arr.ravel() for _, arr in self.named_arrays()])

    def map(self, fn) -> "ModelParams":
        return ModelParams(
            conv_w=[[fn(w) for w in ws] for ws in self.conv_w],
            conv_b=[[fn(b) for b in bs] for bs in self.conv_b],
            dense_w=fn(self.dense_w),
            dense_b=fn(self.dense_b),
        )


def param_shapes(config: ModelConfig) -> list[tuple[str, tuple[int, ...]]]:
    shapes: list[tuple[str, tuple[int, ...]]] = []
    for b in range(config.n_branches):
        for layer, spec in enumerate(config.branch_specs(b)):
            shapes.append((f"branch{b}.layer{layer}.w", spec.weight_shape))
            shapes.append((f"branch{b}.layer{layer}.b", (spec.n_filters,)))
    shapes.append(("dense.w", (N_CLASSES, config.feature_len)))
    shapes.append(("dense.b", (N_CLASSES,)))
    return shapes


def params_from_flat(flat: np.ndarray, config: ModelConfig) -> ModelParams:
    """Inverse of ModelParams.flatten for a given config."""
    shapes = param_shapes(config)
    total = sum(int(np.prod(s)) for _, s in shapes)
    if flat.shape != (total,):
        raise ShapeMismatch(f"flat vector has {flat.shape}, expected ({total},)")
    arrays: dict[str, np.ndarray] = {}
    pos = 0
    for name, shape in shapes:
        size = int(np.prod(shape))
        arrays[name] = flat[pos : pos + size].reshape(shape).copy()
        pos += size
    conv_w = [
        [arrays[f"branch{b}.layer{l}.w"] for l in range(len(LAYER_KERNELS))]
        for b in range(config.n_branches)
    ]
    conv_b = [
        [arrays[f"branch{b}.layer{l}.b"] for l in range(len(LAYER_KERNELS))]
        for b in range(config.n_branches)
    ]
    return ModelParams(conv_w, conv_b, arrays["dense.w"], arrays["dense.b"])


def init_params(config: ModelConfig) -> ModelParams:
    """He-style initialization: normal(0, sqrt(2/fan_in)) weights, zero biases."""
    rng = np.random.default_rng(config.seed)
    conv_w: list[list[np.ndarray]] = []
    conv_b: list[list[np.ndarray]] = []
    for b in range(config.n_branches):
        ws, bs = [], []
        for spec in config.branch_specs(b):
            fan_in = spec.in_maps * int(np.prod(spec.kernel))
            ws.append(
                rng.normal(0.0, np.sqrt(2.0 / fan_in), size=spec.weight_shape)
            )
            bs.append(np.zeros(spec.n_filters))
        conv_w.append(ws)
        conv_b.append(bs)
    dense_w = rng.normal(
        0.0, np.sqrt(2.0 / config.feature_len), size=(N_CLASSES, config.feature_len)
    )
    return ModelParams(conv_w, conv_b, dense_w, np.zeros(N_CLASSES))


def _check_params(params: ModelParams, config: ModelConfig) -> None:
    expect = dict(param_shapes(config))
    for name, arr in params.named_arrays():
        if name not in expect or arr.shape != expect[name]:
            raise ShapeMismatch(
                f"parameter {name} has shape {arr.shape}, "
                f"expected {expect.get(name)}"
            )


def model_forward(
    params: ModelParams, config: ModelConfig, sample: np.ndarray
) -> tuple[np.ndarray, dict]:
    """Run the network on one (C, F, T) sample.

    Returns:
        (probs, cache): class probabilities (2,) and every intermediate
        needed by model_backward.
    """
    _check_params(params, config)
    sample = np.asarray(sample, dtype=np.float64)
    if sample.shape != tuple(config.input_shape):
        raise ShapeMismatch(
            f"sample shape {sample.shape} != configured {config.input_shape}"
        )
    x0 = sample[None]
    branches = []
    feature_parts = []
    for b in range(config.n_branches):
        x = x0
        layer_caches = []
        for layer, spec in enumerate(config.branch_specs(b)):
            pre = conv.conv3d_forward(
                x, spec, params.conv_w[b][layer], params.conv_b[b][layer]
            )
            act = relu(pre)
            pooled, idx = maxpool3d(act, LAYER_POOLS[layer])
            layer_caches.append(
                {"x": x, "pre": pre, "act_shape": act.shape, "idx": idx,
                 "pooled_shape": pooled.shape}
            )
            x = pooled
        branches.append(layer_caches)
        feature_parts.append(global_avg_pool(x))
    features = np.concatenate(feature_parts)
    logits = params.dense_w @ features + params.dense_b
    probs = softmax(logits)
    cache = {
        "branches": branches,
        "features": features,
        "logits": logits,
        "probs": probs,
        "n_filters": config.n_filters,
    }
    return probs, cache


def model_loss(cache: dict, label: int) -> float:
    return xent_from_logits(cache["logits"], label)


def model_backward(
    params: ModelParams, config: ModelConfig, cache: dict, label: int
) -> ModelParams:
    """Exact loss gradients for every parameter.

    Args:
        params: the parameters used in the matching forward pass.
        config: model geometry.
        cache: second output of model_forward.
        label: true class (0 interictal, 1 preictal).

    Returns:
        ModelParams holding gradients, same shapes as params.

    Raises:
        StaleCache: cache does not match params/config geometry.
    """
    _check_params(params, config)
    if not 0 <= label < N_CLASSES:
        raise ShapeMismatch(f"label {label} outside {N_CLASSES} classes")
    if (
        cache.get("n_filters") != config.n_filters
        or len(cache.get("branches", [])) != config.n_branches
        or cache["features"].shape != (config.feature_len,)
    ):
        raise StaleCache("forward cache does not match this config")

    dlogits = cache["probs"].copy()
    dlogits[label] -= 1.0
    grad_dense_w = np.outer(dlogits, cache["features"])
    grad_dense_b = dlogits
    dfeatures = params.dense_w.T @ dlogits

    grad_w: list[list[np.ndarray]] = []
    grad_b: list[list[np.ndarray]] = []
    nf = config.n_filters
    for b in range(config.n_branches):
        layer_caches = cache["branches"][b]
        specs = config.branch_specs(b)
        if len(layer_caches) != len(specs):
            raise StaleCache(f"branch {b} cache depth mismatch")
        dvec = dfeatures[b * nf : (b + 1) * nf]
        dx = global_avg_pool_backward(dvec, layer_caches[-1]["pooled_shape"])
        gws: list[np.ndarray] = [None] * len(specs)
        gbs: list[np.ndarray] = [None] * len(specs)
        for layer in range(len(specs) - 1, -1, -1):
            lc = layer_caches[layer]
            if lc["x"].shape[0] != specs[layer].in_maps:
                raise StaleCache(f"branch {b} layer {layer} cache shape mismatch")
            dact = maxpool3d_backward(lc["idx"], dx, lc["act_shape"])
            dpre = relu_backward(lc["pre"], dact)
            dx, gws[layer], gbs[layer] = conv.conv3d_backward(
                lc["x"], specs[layer], params.conv_w[b][layer], dpre
            )
        grad_w.append(gws)
        grad_b.append(gbs)
    return ModelParams(grad_w, grad_b, grad_dense_w, grad_dense_b)

from .checkpoint import load_checkpoint, save_checkpoint
from .conv import ConvSpec, conv3d_backward, conv3d_forward, effective_extent, same_padding
from .gradcheck import CheckRow, run_all
from .layers import (
    dense_softmax_xent,
    global_avg_pool,
    global_avg_pool_backward,
    maxpool3d,
    maxpool3d_backward,
    relu,
    relu_backward,
    softmax,
    xent_from_logits,
)
from .model import (
    BRANCH_DILATIONS,
    LAYER_KERNELS,
    LAYER_POOLS,
    N_CLASSES,
    ModelConfig,
    ModelParams,
    init_params,
    model_backward,
    model_forward,
    model_loss,
    param_shapes,
    params_from_flat,
)

__all__ = [
    "BRANCH_DILATIONS",
    "CheckRow",
    "ConvSpec",
    "LAYER_KERNELS",
    "LAYER_POOLS",
    "ModelConfig",
    "ModelParams",
    "N_CLASSES",
    "conv3d_backward",
    "conv3d_forward",
    "dense_softmax_xent",
    "effective_extent",
    "global_avg_pool",
    "global_avg_pool_backward",
    "init_params",
    "load_checkpoint",
    "maxpool3d",
    "maxpool3d_backward",
    "model_backward",
    "model_forward",
    "model_loss",
    "param_shapes",
    "params_from_flat",
    "relu",
    "relu_backward",
    "run_all",
    "same_padding",
    "save_checkpoint",
    "softmax",
    "xent_from_logits",
]

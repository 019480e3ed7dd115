"""Trainable-array machinery: autodiff, parameters, AdaDelta, checkpoints."""

from .autodiff import (
    Tensor,
    add,
    as_tensor,
    clamp,
    concat,
    constant,
    log,
    lookup,
    matmul,
    mean,
    mul,
    relu,
    sigmoid,
    softmax,
    tanh,
    transpose,
)
from .checkpoint import load_checkpoint, save_checkpoint
from .params import (
    AdaDeltaConfig,
    ParamStore,
    adadelta_step,
    glorot_uniform,
    gradient_check,
)

__all__ = [
    "AdaDeltaConfig",
    "ParamStore",
    "Tensor",
    "adadelta_step",
    "add",
    "as_tensor",
    "clamp",
    "concat",
    "constant",
    "glorot_uniform",
    "gradient_check",
    "load_checkpoint",
    "log",
    "lookup",
    "matmul",
    "mean",
    "mul",
    "relu",
    "save_checkpoint",
    "sigmoid",
    "softmax",
    "tanh",
    "transpose",
]

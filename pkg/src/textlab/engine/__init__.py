from textlab.engine.core import Tape, Tensor, active_tape, backward, recording
from textlab.engine.ops import (
    add,
    concat_last_dim,
    cross_entropy,
    embedding_lookup,
    gather_time,
    masked_pool,
    masked_softmax,
    matmul,
    mul,
    nll_from_logits,
    nll_from_probs,
    pad_axis1,
    relu,
    reshape,
    scale,
    sigmoid,
    slice_axis,
    stack_axis1,
    sub,
    sum_all,
    tanh,
)
from textlab.engine.weights_io import (
    BadMagicError,
    TruncatedWeightsError,
    UnsupportedVersionError,
    WeightsFormatError,
    read_weights,
    write_weights,
)

__all__ = [
    "BadMagicError",
    "Tape",
    "Tensor",
    "TruncatedWeightsError",
    "UnsupportedVersionError",
    "WeightsFormatError",
    "active_tape",
    "add",
    "backward",
    "concat_last_dim",
    "cross_entropy",
    "embedding_lookup",
    "gather_time",
    "masked_pool",
    "masked_softmax",
    "matmul",
    "mul",
    "nll_from_logits",
    "nll_from_probs",
    "pad_axis1",
    "read_weights",
    "recording",
    "relu",
    "reshape",
    "scale",
    "sigmoid",
    "slice_axis",
    "stack_axis1",
    "sub",
    "sum_all",
    "tanh",
    "write_weights",
]

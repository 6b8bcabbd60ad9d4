"""Shared 1-D convolution + max-over-time used by the CNN encoders.

A window of width w starting at position p is valid when it fits inside the
row's effective length, where the effective length is the true length padded
up to the largest filter width.  Validity therefore depends only on the row
itself, never on how much batch padding it received, which is what keeps the
CNN encoders padding-neutral.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from textlab.engine.core import Tensor
from textlab.engine.ops import (
    add,
    concat_last_dim,
    masked_pool,
    matmul,
    pad_axis1,
    reshape,
    slice_axis,
    stack_axis1,
)


def conv_max_over_time(
    x: Tensor,
    lengths: np.ndarray,
    widths: Sequence[int],
    weights: Sequence[Tensor],
    biases: Sequence[Tensor],
) -> Tensor:
    """Convolve [N, T, D] with per-width filters and max over valid windows.

    ``weights[i]`` has shape [widths[i] * D, F]; the result is [N, F * len(widths)].
    """
    n_rows, time, dim = x.shape
    widest = max(widths)
    if time < widest:
        x = pad_axis1(x, widest)
        time = widest
    effective = np.maximum(np.asarray(lengths, dtype=np.int64), widest)
    pooled = []
    for width, weight, bias in zip(widths, weights, biases):
        positions = time - width + 1
        scores = []
        for p in range(positions):
            window = reshape(slice_axis(x, 1, p, p + width), (n_rows, width * dim))
            scores.append(add(matmul(window, weight), bias))
        stacked = stack_axis1(scores)  # [N, positions, F]
        valid = (np.arange(positions)[None, :] + width) <= effective[:, None]
        pooled.append(masked_pool("max", stacked, valid.astype(np.int64)))
    return concat_last_dim(pooled)

"""Differentiable operations over Tensors.

Every op computes its forward result with numpy and, when a tape is active,
records a closure implementing its backward rule.  Masks and integer ids are
plain numpy arrays, never Tensors: they are data, not differentiable values.

Broadcasting for elementwise ops is trailing-aligned: shapes must match from
the right, with missing leading dimensions or explicit 1s broadcasting.
Nothing wider is supported, on purpose.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from textlab.engine.core import Tensor, accumulate_grad, active_tape, check_finite


def _broadcast_check(sa: tuple[int, ...], sb: tuple[int, ...]):
    for da, db in zip(reversed(sa), reversed(sb)):
        if da != db and da != 1 and db != 1:
            raise ValueError(f"shapes {sa} and {sb} are not broadcast-compatible")


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to ``shape``."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _as_mask(mask: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    mask = np.asarray(mask)
    if mask.shape != shape:
        raise ValueError(f"mask shape {mask.shape} does not match {shape}")
    if not np.isin(mask, (0, 1)).all():
        raise ValueError("mask entries must be 0 or 1")
    return mask.astype(bool)


def _as_ids(ids: np.ndarray, upper: int, what: str) -> np.ndarray:
    ids = np.asarray(ids)
    if not np.issubdtype(ids.dtype, np.integer):
        raise ValueError(f"{what} must be integers")
    if ids.size and (ids.min() < 0 or ids.max() >= upper):
        raise ValueError(f"{what} out of range [0, {upper})")
    return ids


def _binary(a: Tensor, b: Tensor, out_data, da_fn, db_fn) -> Tensor:
    _broadcast_check(a.shape, b.shape)
    out = Tensor(out_data)
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            accumulate_grad(a, _unbroadcast(da_fn(g), a.shape))
            accumulate_grad(b, _unbroadcast(db_fn(g), b.shape))

        tape.record(backward_fn)
    return check_finite(out)


def add(a: Tensor, b: Tensor) -> Tensor:
    return _binary(a, b, a.data + b.data, lambda g: g, lambda g: g)


def sub(a: Tensor, b: Tensor) -> Tensor:
    return _binary(a, b, a.data - b.data, lambda g: g, lambda g: -g)


def mul(a: Tensor, b: Tensor) -> Tensor:
    return _binary(a, b, a.data * b.data, lambda g: g * b.data, lambda g: g * a.data)


def scale(a: Tensor, factor: float) -> Tensor:
    factor = float(factor)
    out = Tensor(a.data * factor)
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            if out.grad is not None:
                accumulate_grad(a, out.grad * factor)

        tape.record(backward_fn)
    return check_finite(out)


def _unary(a: Tensor, out_data, dx_fn) -> Tensor:
    out = Tensor(out_data)
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            if out.grad is not None:
                accumulate_grad(a, dx_fn(out.grad))

        tape.record(backward_fn)
    return check_finite(out)


def tanh(a: Tensor) -> Tensor:
    out_data = np.tanh(a.data)
    return _unary(a, out_data, lambda g: g * (1.0 - out_data * out_data))


def sigmoid(a: Tensor) -> Tensor:
    # exp(-|x|) never overflows; the two branches cover both signs.
    e = np.exp(-np.abs(a.data))
    out_data = np.where(a.data >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return _unary(a, out_data, lambda g: g * out_data * (1.0 - out_data))


def relu(a: Tensor) -> Tensor:
    positive = a.data > 0
    return _unary(a, np.where(positive, a.data, 0.0), lambda g: g * positive)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Batched matrix product; leading batch dimensions equal or absent."""
    if a.ndim < 2 or b.ndim < 2:
        raise ValueError("matmul operands must have rank >= 2")
    if a.shape[-1] != b.shape[-2]:
        raise ValueError(f"inner dimensions disagree: {a.shape} x {b.shape}")
    lead_a, lead_b = a.shape[:-2], b.shape[:-2]
    if lead_a and lead_b and lead_a != lead_b:
        raise ValueError(f"batch dimensions disagree: {a.shape} x {b.shape}")
    out = Tensor(np.matmul(a.data, b.data))
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            da = np.matmul(g, np.swapaxes(b.data, -1, -2))
            db = np.matmul(np.swapaxes(a.data, -1, -2), g)
            accumulate_grad(a, _unbroadcast(da, a.shape))
            accumulate_grad(b, _unbroadcast(db, b.shape))

        tape.record(backward_fn)
    return check_finite(out)


def embedding_lookup(table: Tensor, ids: np.ndarray) -> Tensor:
    """Gather rows of ``table`` ([V, D]) for integer ``ids`` of any shape."""
    if table.ndim != 2:
        raise ValueError("embedding table must be 2-D")
    ids = _as_ids(ids, table.shape[0], "embedding ids")
    out = Tensor(table.data[ids])
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            if table.grad is None:
                table.grad = np.zeros_like(table.data)
            np.add.at(table.grad, ids.ravel(), g.reshape(-1, table.shape[1]))

        tape.record(backward_fn)
    return check_finite(out)


def masked_softmax(logits: Tensor, mask: np.ndarray) -> Tensor:
    """Softmax over the last dimension restricted to unmasked positions.

    Masked positions get probability exactly 0; each row of unmasked
    probabilities sums to 1.  Computed with max-subtraction for stability.
    """
    mask = _as_mask(mask, logits.shape)
    if not mask.any(axis=-1).all():
        raise ValueError("masked_softmax requires at least one unmasked entry per row")
    z = np.where(mask, logits.data, -np.inf)
    z_max = z.max(axis=-1, keepdims=True)
    exp = np.exp(z - z_max)
    probs = exp / exp.sum(axis=-1, keepdims=True)
    out = Tensor(probs)
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            inner = (probs * g).sum(axis=-1, keepdims=True)
            accumulate_grad(logits, probs * (g - inner))

        tape.record(backward_fn)
    return check_finite(out)


def nll_from_logits(logits: Tensor, targets: np.ndarray) -> Tensor:
    """Per-row negative log-likelihood from logits, via stable log-sum-exp."""
    if logits.ndim != 2:
        raise ValueError("logits must be [rows, classes]")
    rows, classes = logits.shape
    targets = _as_ids(targets, classes, "targets")
    if targets.shape != (rows,):
        raise ValueError(f"targets shape {targets.shape} does not match rows {rows}")
    x = logits.data
    x_max = x.max(axis=1)
    lse = x_max + np.log(np.exp(x - x_max[:, None]).sum(axis=1))
    picked = x[np.arange(rows), targets]
    out = Tensor(lse - picked)
    softmax = np.exp(x - lse[:, None])
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            dx = softmax * g[:, None]
            dx[np.arange(rows), targets] -= g
            accumulate_grad(logits, dx)

        tape.record(backward_fn)
    return check_finite(out)


def nll_from_probs(probs: Tensor, targets: np.ndarray) -> Tensor:
    """Per-row negative log-likelihood from an explicit distribution."""
    if probs.ndim != 2:
        raise ValueError("probs must be [rows, classes]")
    rows, classes = probs.shape
    targets = _as_ids(targets, classes, "targets")
    if targets.shape != (rows,):
        raise ValueError(f"targets shape {targets.shape} does not match rows {rows}")
    picked = probs.data[np.arange(rows), targets]
    if (picked <= 0).any():
        raise ValueError("probability of the target class must be positive")
    out = Tensor(-np.log(picked))
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            dp = np.zeros_like(probs.data)
            dp[np.arange(rows), targets] = -g / picked
            accumulate_grad(probs, dp)

        tape.record(backward_fn)
    return check_finite(out)


def cross_entropy(values: Tensor, targets: np.ndarray, from_logits: bool = True) -> Tensor:
    """Mean negative log-likelihood over the batch."""
    nll = nll_from_logits(values, targets) if from_logits else nll_from_probs(values, targets)
    return scale(sum_all(nll), 1.0 / values.shape[0])


def masked_pool(kind: str, x: Tensor, mask: np.ndarray) -> Tensor:
    """Pool [B, T, D] down to [B, D] over unmasked positions only.

    Mean divides by the per-row mask sum; max ignores masked positions and,
    on ties, routes gradient to the first maximal unmasked position.
    """
    if x.ndim != 3:
        raise ValueError("masked_pool input must be [batch, time, dim]")
    mask = _as_mask(mask, x.shape[:2])
    if not mask.any(axis=1).all():
        raise ValueError("masked_pool requires at least one unmasked position per row")
    fmask = mask.astype(np.float64)[:, :, None]
    tape = active_tape()
    if kind == "mean":
        denom = fmask.sum(axis=1)
        out = Tensor((x.data * fmask).sum(axis=1) / denom)
        if tape is not None:

            def backward_mean():
                g = out.grad
                if g is None:
                    return
                accumulate_grad(x, (g / denom)[:, None, :] * fmask)

            tape.record(backward_mean)
    elif kind == "max":
        z = np.where(mask[:, :, None], x.data, -np.inf)
        argmax = z.argmax(axis=1)  # first maximal unmasked position
        out = Tensor(np.take_along_axis(z, argmax[:, None, :], axis=1)[:, 0, :])
        if tape is not None:

            def backward_max():
                g = out.grad
                if g is None:
                    return
                dx = np.zeros_like(x.data)
                np.put_along_axis(dx, argmax[:, None, :], g[:, None, :], axis=1)
                accumulate_grad(x, dx)

            tape.record(backward_max)
    else:
        raise ValueError(f"unknown pooling kind '{kind}'")
    return check_finite(out)


def concat_last_dim(xs: Sequence[Tensor]) -> Tensor:
    """Concatenate along the last dimension; all other dimensions must match."""
    if not xs:
        raise ValueError("concat_last_dim needs at least one input")
    base = xs[0].shape[:-1]
    for x in xs[1:]:
        if x.shape[:-1] != base:
            raise ValueError(
                f"all shapes must agree except the last dimension: "
                f"{[x.shape for x in xs]}"
            )
    out = Tensor(np.concatenate([x.data for x in xs], axis=-1))
    tape = active_tape()
    if tape is not None:
        widths = [x.shape[-1] for x in xs]

        def backward_fn():
            g = out.grad
            if g is None:
                return
            offset = 0
            for x, width in zip(xs, widths):
                accumulate_grad(x, g[..., offset : offset + width])
                offset += width

        tape.record(backward_fn)
    return check_finite(out)


def slice_axis(x: Tensor, axis: int, start: int, stop: int) -> Tensor:
    """Take a contiguous slice along one axis."""
    axis = axis % x.ndim
    if not (0 <= start <= stop <= x.shape[axis]):
        raise ValueError(f"slice [{start}:{stop}) outside axis {axis} of {x.shape}")
    index = (slice(None),) * axis + (slice(start, stop),)
    out = Tensor(np.ascontiguousarray(x.data[index]))
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            dx = np.zeros_like(x.data)
            dx[index] = g
            accumulate_grad(x, dx)

        tape.record(backward_fn)
    return check_finite(out)


def pad_axis1(x: Tensor, target_len: int) -> Tensor:
    """Right-pad axis 1 with zeros up to ``target_len``."""
    if x.ndim < 2:
        raise ValueError("pad_axis1 input must have rank >= 2")
    current = x.shape[1]
    if target_len < current:
        raise ValueError(f"target length {target_len} shorter than axis ({current})")
    if target_len == current:
        return x
    pad_spec = [(0, 0)] * x.ndim
    pad_spec[1] = (0, target_len - current)
    out = Tensor(np.pad(x.data, pad_spec))
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            if out.grad is not None:
                accumulate_grad(x, out.grad[:, :current])

        tape.record(backward_fn)
    return check_finite(out)


def stack_axis1(xs: Sequence[Tensor]) -> Tensor:
    """Stack same-shaped tensors along a new axis 1 ([B, ...] -> [B, T, ...])."""
    if not xs:
        raise ValueError("stack_axis1 needs at least one input")
    shape = xs[0].shape
    for x in xs[1:]:
        if x.shape != shape:
            raise ValueError("stack_axis1 inputs must share one shape")
    out = Tensor(np.stack([x.data for x in xs], axis=1))
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            for i, x in enumerate(xs):
                accumulate_grad(x, g[:, i])

        tape.record(backward_fn)
    return check_finite(out)


def gather_time(x: Tensor, idx: np.ndarray) -> Tensor:
    """Gather positions along axis 1: out[b, s] = x[b, idx[b, s]]."""
    if x.ndim < 2:
        raise ValueError("gather_time input must have rank >= 2")
    idx = _as_ids(idx, x.shape[1], "gather indices")
    if idx.ndim != 2 or idx.shape[0] != x.shape[0]:
        raise ValueError(f"indices must be [batch, slots], got {idx.shape}")
    batch_idx = np.arange(x.shape[0])[:, None]
    out = Tensor(x.data[batch_idx, idx])
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            g = out.grad
            if g is None:
                return
            dx = np.zeros_like(x.data)
            np.add.at(dx, (batch_idx, idx), g)
            accumulate_grad(x, dx)

        tape.record(backward_fn)
    return check_finite(out)


def reshape(x: Tensor, shape: tuple[int, ...]) -> Tensor:
    out = Tensor(x.data.reshape(shape))
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            if out.grad is not None:
                accumulate_grad(x, out.grad.reshape(x.shape))

        tape.record(backward_fn)
    return check_finite(out)


def sum_all(x: Tensor) -> Tensor:
    """Sum every element down to a scalar."""
    out = Tensor(x.data.sum())
    tape = active_tape()
    if tape is not None:

        def backward_fn():
            if out.grad is not None:
                accumulate_grad(x, np.broadcast_to(out.grad, x.shape))

        tape.record(backward_fn)
    return check_finite(out)

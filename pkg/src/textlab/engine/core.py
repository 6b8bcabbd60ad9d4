"""Dense 64-bit tensors on a define-by-run differentiation tape.

A Tape is an append-only list of backward closures; because operations are
recorded in execution order, the append order is already topological and
backward simply walks it once in reverse.  Tapes are thread-local: training
and serving threads each record on their own tape (or none at all, for
gradient-free inference).
"""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from typing import Callable, Iterator, Optional

import numpy as np

# When enabled, every op asserts its output is NaN-free.  Cheap insurance for
# debugging; off by default in normal runs.
DEBUG_NAN_CHECKS = bool(os.environ.get("TEXTLAB_DEBUG"))


class Tensor:
    """A dense float64 array with an optional gradient buffer."""

    __slots__ = ("data", "grad")

    def __init__(self, data):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: Optional[np.ndarray] = None

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    def item(self) -> float:
        return float(self.data)

    def zero_grad(self):
        self.grad = None

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape})"


class Tape:
    """Append-only record of backward rules for one forward pass."""

    def __init__(self):
        self._nodes: list[Callable[[], None]] = []
        self._consumed = False

    def record(self, backward_fn: Callable[[], None]):
        self._nodes.append(backward_fn)

    def __len__(self) -> int:
        return len(self._nodes)

    def run_backward(self, loss: Tensor):
        if self._consumed:
            raise RuntimeError("this tape has already been walked backward")
        if loss.shape != ():
            raise ValueError(f"backward requires a scalar loss, got shape {loss.shape}")
        self._consumed = True
        accumulate_grad(loss, np.ones((), dtype=np.float64))
        for backward_fn in reversed(self._nodes):
            backward_fn()


_LOCAL = threading.local()


def active_tape() -> Optional[Tape]:
    return getattr(_LOCAL, "tape", None)


@contextmanager
def recording(tape: Optional[Tape] = None) -> Iterator[Tape]:
    """Make a tape active on this thread for the duration of the block."""
    tape = tape if tape is not None else Tape()
    previous = active_tape()
    _LOCAL.tape = tape
    try:
        yield tape
    finally:
        _LOCAL.tape = previous


def accumulate_grad(tensor: Tensor, grad: np.ndarray):
    if tensor.grad is None:
        tensor.grad = np.array(grad, dtype=np.float64, copy=True)
    else:
        tensor.grad += grad


def backward(loss: Tensor):
    """Populate gradients for every tensor reachable from ``loss``.

    Gradients accumulate until explicitly zeroed, so repeated backward passes
    (on fresh tapes) sum their contributions.
    """
    tape = active_tape()
    if tape is None:
        raise RuntimeError("backward called with no active tape")
    tape.run_backward(loss)


def check_finite(out: Tensor) -> Tensor:
    if DEBUG_NAN_CHECKS and not np.all(np.isfinite(out.data)):
        raise FloatingPointError("non-finite values produced by a forward op")
    return out

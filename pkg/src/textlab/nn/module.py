"""Minimal parameter-owning building block.

Modules register parameters and child modules in insertion order, which makes
parameter traversal (and therefore weight archives and optimizer state)
deterministic.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from textlab.engine.core import Tensor


class Module:
    def __init__(self):
        self._params: dict[str, Tensor] = {}
        self._children: dict[str, "Module"] = {}

    def add_parameter(self, name: str, data: np.ndarray) -> Tensor:
        if name in self._params or name in self._children:
            raise ValueError(f"duplicate parameter or child name '{name}'")
        tensor = Tensor(np.asarray(data, dtype=np.float64))
        self._params[name] = tensor
        return tensor

    def add_child(self, name: str, child: "Module") -> "Module":
        if name in self._params or name in self._children:
            raise ValueError(f"duplicate parameter or child name '{name}'")
        self._children[name] = child
        return child

    def named_parameters(self, prefix: str = "") -> Iterator[tuple[str, Tensor]]:
        for name, tensor in self._params.items():
            yield (f"{prefix}{name}", tensor)
        for name, child in self._children.items():
            yield from child.named_parameters(prefix=f"{prefix}{name}.")

    def parameters(self) -> list[Tensor]:
        return [tensor for _, tensor in self.named_parameters()]

    def parameter_count(self) -> int:
        return sum(t.data.size for t in self.parameters())

    def state(self) -> dict[str, np.ndarray]:
        return {name: tensor.data.copy() for name, tensor in self.named_parameters()}

    def load_state(self, state: dict[str, np.ndarray]):
        """Assign weights by name; the name sets must match exactly."""
        own = dict(self.named_parameters())
        missing = sorted(set(own) - set(state))
        unexpected = sorted(set(state) - set(own))
        if missing or unexpected:
            raise ValueError(
                f"weight names do not match the model: missing {missing}, "
                f"unexpected {unexpected}"
            )
        for name, tensor in own.items():
            incoming = np.asarray(state[name], dtype=np.float64)
            if incoming.shape != tensor.data.shape:
                raise ValueError(
                    f"shape mismatch for '{name}': expected {tensor.data.shape}, "
                    f"got {incoming.shape}"
                )
            tensor.data = incoming.copy()

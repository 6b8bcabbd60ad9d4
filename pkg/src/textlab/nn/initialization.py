"""Seed-deterministic parameter initialization.

Weight matrices draw uniformly from [-1/sqrt(fan_in), +1/sqrt(fan_in)];
biases start at zero (recurrent cells overlay their own gate-specific
constants afterwards).
"""

from __future__ import annotations

import numpy as np


def uniform_fan_in(rng: np.random.Generator, fan_in: int, shape: tuple[int, ...]) -> np.ndarray:
    if fan_in < 1:
        raise ValueError("fan_in must be >= 1")
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)

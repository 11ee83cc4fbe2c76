import math

import numpy as np

from tbtlrr.common.errors import DegenerateInputError
from tbtlrr.common.types import Tensor3


def normalize_unit_range(x: Tensor3) -> Tensor3:
    """Scale a tensor linearly so its entries span [0, 1].

    Args:
        x - Input tensor

    Returns:
        (x - min) / (max - min)

    Raises:
        DegenerateInputError if every entry is the same.
    """
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        raise DegenerateInputError("Can't normalize a constant tensor")
    return (x - lo) / (hi - lo)


def add_sparse_noise(x: Tensor3, fraction: float, seed: int) -> Tensor3:
    """Replace a random subset of entries with uniform [0, 1] values.

    Exactly floor(fraction * size) distinct entries are replaced.

    Args:
        x - Clean tensor, expected in [0, 1]
        fraction - Share of entries to corrupt, in [0, 1]
        seed - Random seed

    Returns:
        Corrupted copy of `x`.
    """
    if not 0 <= fraction <= 1:
        raise ValueError(f"Noise fraction must be in [0, 1], got {fraction}")
    rng = np.random.default_rng(seed)
    flat = np.array(x, dtype=np.float64).ravel(order="F")
    count = math.floor(fraction * flat.size)
    idx = rng.choice(flat.size, size=count, replace=False)
    flat[idx] = rng.uniform(0.0, 1.0, size=count)
    return flat.reshape(x.shape, order="F")


def add_gaussian_noise(x: Tensor3, level: float, seed: int) -> Tensor3:
    """Add i.i.d. zero-mean Gaussian noise scaled to the data.

    The standard deviation is level * ||x||_F / sqrt(size), i.e. `level`
    times the root mean square of the data.

    Args:
        x - Clean tensor
        level - Relative noise level, nonnegative
        seed - Random seed

    Returns:
        Noisy copy of `x`.
    """
    if not level >= 0:
        raise ValueError(f"Noise level must be nonnegative, got {level}")
    rng = np.random.default_rng(seed)
    std = level * float(np.linalg.norm(x.ravel())) / math.sqrt(x.size)
    return x + rng.normal(0.0, 1.0, size=x.shape) * std

import math
from dataclasses import dataclass, field

import numpy as np

from tbtlrr.common.errors import DimensionError
from tbtlrr.common.types import Tensor3


@dataclass(frozen=True)
class HalfThreshParams:
    """Parameters of the l1/2 proximal operator.

    Minimizes alpha * |x|^(1/2) + (x - y)^2 / 2 for every entry y.
    """

    alpha: float
    # Entries with |y| <= tau are set to zero.
    tau: float = field(init=False)

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        object.__setattr__(self, "tau", 1.5 * self.alpha ** (2.0 / 3.0))


def half_threshold(y: Tensor3, alpha: float) -> Tensor3:
    """Proximal operator of the separable l1/2 penalty.

    For |y| <= tau(alpha) = 3/2 * alpha^(2/3) the result is 0. Otherwise it is

        sgn(y) * 2/3 * |y| * (1 + cos(2*pi/3 - 2/3 * arccos(g)))

    with g = 3 * sqrt(3) * alpha / (4 * |y|^(3/2)). This is the
    phase of the global minimizer.

    At |y| == tau both the zero and the nonzero candidate are optimal; zero
    is returned.

    Args:
        y - Input tensor
        alpha - Penalty weight (lambda / mu in the solver)

    Returns:
        Tensor of the same shape. |output| <= |y| entrywise.
    """
    params = HalfThreshParams(alpha)
    y = np.asarray(y, dtype=np.float64)
    a = np.abs(y)
    out = np.zeros_like(y)
    big = a > params.tau
    if not np.any(big):
        return out

    ab = a[big]
    g = np.clip(3.0 * math.sqrt(3.0) * params.alpha / (4.0 * ab**1.5), -1.0, 1.0)
    phi = (2.0 / 3.0) * np.arccos(g)
    out[big] = np.sign(y[big]) * (2.0 / 3.0) * ab * (1.0 + np.cos(2.0 * np.pi / 3.0 - phi))
    return out


def soft_threshold(y: Tensor3, thresh: float) -> Tensor3:
    """Proximal operator of the l1 norm.

    Args:
        y - Input tensor
        thresh - Shrinkage amount

    Returns:
        sgn(y) * max(|y| - thresh, 0) entrywise.
    """
    if not thresh > 0:
        raise ValueError(f"Threshold must be positive, got {thresh}")
    y = np.asarray(y, dtype=np.float64)
    return np.sign(y) * np.maximum(np.abs(y) - thresh, 0.0)


def frobenius_shrink(c: Tensor3, p: Tensor3, mu: float, beta: float) -> Tensor3:
    """Minimize beta * ||N||_F^2 + mu/2 * ||N - (c + p / mu)||_F^2.

    Args:
        c - Residual the noise should absorb
        p - Multiplier of the data constraint
        mu - Penalty parameter
        beta - Weight of the Frobenius term; 0 disables shrinkage

    Returns:
        (p + mu * c) / (2 * beta + mu)

    Raises:
        DimensionError if `c` and `p` differ in shape.
    """
    if c.shape != p.shape:
        raise DimensionError(f"Shapes differ: {c.shape} and {p.shape}")
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if not beta >= 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    return (p + mu * c) / (2.0 * beta + mu)

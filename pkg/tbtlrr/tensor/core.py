from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from tbtlrr.common.errors import DimensionError
from tbtlrr.common.types import Dims, Tensor3


class Norms(NamedTuple):
    """Entrywise norms of a tensor."""

    l1: float
    # (sum of |b|^(1/2))^2
    l_half: float
    frobenius: float
    l_inf: float


def as_tensor3(b: npt.ArrayLike, name: str = "tensor") -> Tensor3:
    """Validate and convert input to a third-order float64 tensor.

    Args:
        b - Anything numpy can turn into a 3-d array
        name - Name used in error messages

    Returns:
        The input as a float64 array with three positive dimensions.

    Raises:
        DimensionError if the input is not three-dimensional or has an empty
        dimension.
        ValueError if any entry is NaN or infinite.
    """
    arr = np.asarray(b, dtype=np.float64)
    if arr.ndim != 3:
        raise DimensionError(f"{name} must be third-order, got shape {arr.shape}")
    if min(arr.shape) < 1:
        raise DimensionError(f"{name} has an empty dimension: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def zeros(shape: Dims) -> Tensor3:
    """Get an all-zero tensor of the given shape."""
    return np.zeros(shape, dtype=np.float64, order="F")


def to_slices(b: Tensor3) -> np.ndarray:
    """View a tensor as a stack of frontal slices, shape (n3, n1, n2)."""
    return np.moveaxis(b, 2, 0)


def from_slices(s: np.ndarray) -> Tensor3:
    """Inverse of `to_slices`."""
    return np.moveaxis(s, 0, 2)


def unfold3(b: Tensor3) -> np.ndarray:
    """Unfold a tensor along the third mode.

    Row k is the column-major vectorization of frontal slice k.

    Args:
        b - Tensor of shape (n1, n2, n3)

    Returns:
        Matrix of shape (n3, n1 * n2)
    """
    n1, n2, n3 = b.shape
    return b.reshape(n1 * n2, n3, order="F").T


def norms(b: Tensor3) -> Norms:
    """Compute the l1, l1/2, Frobenius and max norms of a tensor.

    Args:
        b - Input tensor

    Returns:
        Norms tuple. All values are nonnegative.
    """
    a = np.abs(b)
    return Norms(
        l1=float(a.sum()),
        l_half=float(np.sqrt(a).sum() ** 2),
        frobenius=float(np.linalg.norm(a.ravel())),
        l_inf=float(a.max()),
    )

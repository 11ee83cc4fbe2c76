import numpy as np

from tbtlrr.common.errors import DimensionError
from tbtlrr.common.types import Tensor3

from .core import from_slices, to_slices
from .transform import OrthoTransform, apply_transform, inverse_transform


def t_product(a: Tensor3, b: Tensor3, t: OrthoTransform) -> Tensor3:
    """Multiply two tensors under a transform.

    Each pair of transform-domain frontal slices is multiplied as matrices and
    the result is brought back to the original domain.

    Args:
        a - Tensor of shape (n1, n2, n3)
        b - Tensor of shape (n2, n4, n3)
        t - Transform of size n3

    Returns:
        Tensor of shape (n1, n4, n3)

    Raises:
        DimensionError if the inner dimensions or tube lengths don't match.
    """
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise DimensionError(f"Can't multiply tensors of shape {a.shape} and {b.shape}")
    a_bar = to_slices(apply_transform(t, a))
    b_bar = to_slices(apply_transform(t, b))
    return inverse_transform(t, from_slices(a_bar @ b_bar))


def t_transpose(b: Tensor3, t: OrthoTransform) -> Tensor3:
    """Get the tensor transpose under a transform.

    Every transform-domain frontal slice is transposed. The transform acts on
    tubes only, so this is the same as transposing the original frontal
    slices and does not depend on `t` beyond its size.

    Args:
        b - Tensor of shape (n1, n2, n3)
        t - Transform of size n3

    Returns:
        Tensor of shape (n2, n1, n3)
    """
    if b.shape[2] != t.n3:
        raise DimensionError(
            f"Transform of size {t.n3} does not fit tensor of shape {b.shape}"
        )
    return np.transpose(b, (1, 0, 2))


def t_identity(n: int, n3: int, t: OrthoTransform) -> Tensor3:
    """Get the identity tensor under a transform.

    Args:
        n - Size of each (square) frontal slice
        n3 - Tube length
        t - Transform of size n3

    Returns:
        Tensor of shape (n, n, n3) whose transform-domain slices are all I.
    """
    if n < 1 or n3 < 1:
        raise ValueError(f"Identity tensor needs positive sizes, got {(n, n3)}")
    eye = np.broadcast_to(np.eye(n)[:, :, None], (n, n, n3))
    return inverse_transform(t, np.array(eye))

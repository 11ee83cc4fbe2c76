import numpy as np

from tbtlrr.common.types import Tensor3
from tbtlrr.tensor.core import from_slices
from tbtlrr.tensor.transform import OrthoTransform, apply_transform, inverse_transform
from tbtlrr.tensor.tsvd import slice_svd


def svt_transform(y: Tensor3, t: OrthoTransform, thresh: float) -> Tensor3:
    """Singular value thresholding in the transform domain.

    Every transform-domain singular value s becomes max(s - thresh, 0). Since
    the transform is orthogonal, the result minimizes

        sum_k ||J_bar^(k)||_* + 1 / (2 * thresh) * ||J - y||_F^2

    where J_bar^(k) are the transform-domain frontal slices of J.

    Args:
        y - Input tensor
        t - Transform
        thresh - Amount subtracted from every singular value

    Returns:
        Tensor of the same shape as `y`.
    """
    if not thresh > 0:
        raise ValueError(f"Threshold must be positive, got {thresh}")
    u, s, vt = slice_svd(apply_transform(t, y), op="svt_transform")
    s = np.maximum(s - thresh, 0.0)
    return inverse_transform(t, from_slices((u * s[:, None, :]) @ vt))

import enum
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.linalg

import tbtlrr.settings
from tbtlrr.common.errors import DegenerateInputError, DimensionError
from tbtlrr.common.types import Matrix, Tensor3

from .core import unfold3


class TransformKind(str, enum.Enum):
    """Where a transform came from."""

    LEARNED = "learned"
    DCT = "dct"
    IDENTITY = "identity"


@dataclass(frozen=True, eq=False)
class OrthoTransform:
    """Real orthogonal n3 x n3 matrix applied to every tube of a tensor."""

    matrix: Matrix
    kind: TransformKind

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"Transform must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("Transform contains non-finite entries")
        dev = np.abs(m @ m.T - np.eye(m.shape[0])).max()
        if dev > tbtlrr.settings.ORTHO_TOLERANCE:
            raise ValueError(f"Transform is not orthogonal (max deviation {dev:.3e})")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "kind", TransformKind(self.kind))

    @property
    def n3(self) -> int:
        return self.matrix.shape[0]


def identity_transform(n3: int) -> OrthoTransform:
    """Get the identity transform, which leaves tubes unchanged.

    Args:
        n3 - Tube length

    Returns:
        Identity OrthoTransform.
    """
    return OrthoTransform(np.eye(n3), TransformKind.IDENTITY)


def dct_transform(n3: int) -> OrthoTransform:
    """Get the orthonormal type-II discrete cosine transform.

    Args:
        n3 - Tube length

    Returns:
        OrthoTransform whose product with a tube is `scipy.fft.dct(tube,
        norm="ortho")`.
    """
    m = scipy.fft.dct(np.eye(n3), type=2, norm="ortho", axis=0)
    return OrthoTransform(m, TransformKind.DCT)


def learn_transform(x: Tensor3) -> OrthoTransform:
    """Learn a data-adaptive transform from the tensor itself.

    The tensor is unfolded along the third mode (row k is the column-major
    vectorization of frontal slice k) and factored as U S V'. The transform is
    U'. Each row is flipped so that its largest-magnitude entry is positive,
    which makes the result deterministic.

    Args:
        x - Data tensor

    Returns:
        Learned OrthoTransform of size n3 x n3.

    Raises:
        DegenerateInputError if `x` is all zeros.
    """
    if not np.any(x):
        raise DegenerateInputError("Can't learn a transform from an all-zero tensor")
    u, _, _ = scipy.linalg.svd(unfold3(x), full_matrices=True)
    t = u.T
    # First index wins among entries tied in magnitude up to rounding.
    mag = np.abs(t)
    tied = mag >= mag.max(axis=1, keepdims=True) * (1 - tbtlrr.settings.SIGN_TIE_RTOL)
    lead = np.argmax(tied, axis=1)
    signs = np.sign(t[np.arange(t.shape[0]), lead])
    return OrthoTransform(t * signs[:, None], TransformKind.LEARNED)


def make_transform(kind: TransformKind | str, x: Tensor3) -> OrthoTransform:
    """Build the transform of the requested kind for a data tensor.

    Args:
        kind - Transform kind (or its name)
        x - Data tensor; only its size matters unless the transform is learned

    Returns:
        OrthoTransform for tubes of length `x.shape[2]`.
    """
    n3 = x.shape[2]
    match TransformKind(kind):
        case TransformKind.LEARNED:
            return learn_transform(x)
        case TransformKind.DCT:
            return dct_transform(n3)
        case TransformKind.IDENTITY:
            return identity_transform(n3)


def _check_fit(t: OrthoTransform, b: Tensor3):
    if b.ndim != 3 or b.shape[2] != t.n3:
        raise DimensionError(
            f"Transform of size {t.n3} does not fit tensor of shape {b.shape}"
        )


def apply_transform(t: OrthoTransform, b: Tensor3) -> Tensor3:
    """Multiply every tube of `b` by the transform matrix.

    Args:
        t - Transform
        b - Tensor in the original domain

    Returns:
        Tensor in the transform domain with the same dimensions.
    """
    _check_fit(t, b)
    # Tubes are the last axis, so T @ tube is tube @ T'.
    return b @ t.matrix.T


def inverse_transform(t: OrthoTransform, b_bar: Tensor3) -> Tensor3:
    """Bring a transform-domain tensor back to the original domain.

    Args:
        t - Transform
        b_bar - Tensor in the transform domain

    Returns:
        Tensor in the original domain.
    """
    _check_fit(t, b_bar)
    return b_bar @ t.matrix

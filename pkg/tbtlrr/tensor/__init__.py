from .core import Norms, as_tensor3, norms, unfold3, zeros
from .io import decode_t3b, encode_t3b, read_t3b, write_t3b
from .product import t_identity, t_product, t_transpose
from .transform import (
    OrthoTransform,
    TransformKind,
    apply_transform,
    dct_transform,
    identity_transform,
    inverse_transform,
    learn_transform,
    make_transform,
)
from .tsvd import (
    TTsvdFactors,
    energy_concentration,
    transform_spectrum,
    t_tsvd,
    ttnn,
)

__all__ = [
    "Norms",
    "OrthoTransform",
    "TransformKind",
    "TTsvdFactors",
    "as_tensor3",
    "zeros",
    "norms",
    "unfold3",
    "apply_transform",
    "inverse_transform",
    "identity_transform",
    "dct_transform",
    "learn_transform",
    "make_transform",
    "t_product",
    "t_transpose",
    "t_identity",
    "t_tsvd",
    "ttnn",
    "transform_spectrum",
    "energy_concentration",
    "read_t3b",
    "write_t3b",
    "encode_t3b",
    "decode_t3b",
]

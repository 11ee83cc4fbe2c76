from .elementwise import HalfThreshParams, frobenius_shrink, half_threshold, soft_threshold
from .svt import svt_transform

__all__ = [
    "HalfThreshParams",
    "half_threshold",
    "soft_threshold",
    "frobenius_shrink",
    "svt_transform",
]

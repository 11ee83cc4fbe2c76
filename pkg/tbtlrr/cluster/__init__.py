from .affinity import (
    AffinityMatrix,
    SliceWeights,
    affinity_average,
    affinity_weighted,
    diag_ratio_weights,
)
from .labels import read_labels, write_labels
from .metrics import ClusterResult, acc, contingency, evaluate, nmi
from .noise import add_gaussian_noise, add_sparse_noise, normalize_unit_range
from .spectral import SpectralResult, spectral_clustering, spectral_embedding

__all__ = [
    "AffinityMatrix",
    "SliceWeights",
    "ClusterResult",
    "SpectralResult",
    "affinity_average",
    "affinity_weighted",
    "diag_ratio_weights",
    "spectral_embedding",
    "spectral_clustering",
    "acc",
    "nmi",
    "contingency",
    "evaluate",
    "add_sparse_noise",
    "add_gaussian_noise",
    "normalize_unit_range",
    "read_labels",
    "write_labels",
]

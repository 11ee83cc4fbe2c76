from dataclasses import dataclass

import numpy as np
import scipy.linalg

from tbtlrr.cluster.noise import add_gaussian_noise, add_sparse_noise, normalize_unit_range
from tbtlrr.common.seeds import derive_seeds
from tbtlrr.common.types import Labels, Tensor3
from tbtlrr.tensor import dct_transform, inverse_transform
from tbtlrr.tensor.core import from_slices


@dataclass(frozen=True)
class SyntheticParams:
    """Union-of-subspaces data set parameters.

    The default instance has four subspaces of tubal rank 3 with 20 samples
    each in a 30 x 80 x 4 tensor.
    """

    k_subspaces: int = 4
    samples_per_cluster: int = 20
    n1: int = 30
    n3: int = 4
    tubal_rank_per_subspace: int = 3
    sparse_fraction: float = 0.0
    gaussian_level: float = 0.0
    seed: int = 0
    # Amplitude ratio between consecutive transform-domain slices. 1.0 keeps
    # the coefficients i.i.d. standard normal.
    spectral_decay: float = 1.0
    # Min-max scale the clean data to [0, 1]. This adds a constant offset,
    # which raises the tubal rank by one.
    normalize: bool = True

    def __post_init__(self):
        for name in ("k_subspaces", "samples_per_cluster", "n1", "n3", "tubal_rank_per_subspace"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.tubal_rank_per_subspace > self.n1:
            raise ValueError(
                f"Tubal rank {self.tubal_rank_per_subspace} exceeds n1 = {self.n1}"
            )
        if not 0 <= self.sparse_fraction <= 1:
            raise ValueError(f"sparse_fraction must be in [0, 1], got {self.sparse_fraction}")
        if not self.gaussian_level >= 0:
            raise ValueError(f"gaussian_level must be nonnegative, got {self.gaussian_level}")
        if not 0 < self.spectral_decay <= 1:
            raise ValueError(f"spectral_decay must be in (0, 1], got {self.spectral_decay}")
        if self.seed < 0:
            raise ValueError(f"seed must be unsigned, got {self.seed}")

    @property
    def n_samples(self) -> int:
        return self.k_subspaces * self.samples_per_cluster


def generate_synthetic(p: SyntheticParams) -> tuple[Tensor3, Labels]:
    """Draw samples from a union of low tubal-rank subspaces.

    Subspace c has a basis U_c of shape (n1, r, n3) whose DCT-domain slices
    have orthonormal columns, and samples U_c * C_c with Gaussian
    coefficients C_c of shape (r, m, n3). Coefficients in DCT slice k are
    scaled by `spectral_decay ** k`, so the default of 1 leaves them i.i.d.
    Samples are lateral slices, grouped by subspace, then the data is scaled
    to [0, 1] and corrupted with sparse and Gaussian noise.

    Args:
        p - Generator parameters

    Returns:
        (data of shape (n1, k * m, n3), 1-based subspace labels)
    """
    data_seed, sparse_seed, gaussian_seed = derive_seeds(p.seed, 3)
    rng = np.random.default_rng(data_seed)
    t = dct_transform(p.n3)
    r, m = p.tubal_rank_per_subspace, p.samples_per_cluster
    scale = p.spectral_decay ** np.arange(p.n3)

    blocks = []
    for _ in range(p.k_subspaces):
        basis = np.stack(
            [
                scipy.linalg.qr(rng.standard_normal((p.n1, r)), mode="economic")[0]
                for _ in range(p.n3)
            ]
        )
        coef = rng.standard_normal((p.n3, r, m)) * scale[:, None, None]
        blocks.append(inverse_transform(t, from_slices(basis @ coef)))

    x = np.concatenate(blocks, axis=1)
    if p.normalize:
        x = normalize_unit_range(x)
    if p.sparse_fraction > 0:
        x = add_sparse_noise(x, p.sparse_fraction, sparse_seed)
    if p.gaussian_level > 0:
        x = add_gaussian_noise(x, p.gaussian_level, gaussian_seed)

    labels = np.repeat(np.arange(1, p.k_subspaces + 1, dtype=np.int64), m)
    return x, labels

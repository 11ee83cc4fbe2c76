from dataclasses import dataclass

import numpy as np
import scipy.linalg
from sklearn.cluster import KMeans

import tbtlrr.settings
from tbtlrr.common.errors import TbtlrrError
from tbtlrr.common.seeds import derive_seeds
from tbtlrr.common.types import Labels, Matrix

from .affinity import AffinityMatrix


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Labels from every k-means restart on one spectral embedding."""

    # 1-based labels of the restart with the lowest distortion
    labels: Labels
    # 1-based labels of every restart, shape (restarts, n)
    restart_labels: np.ndarray
    # k-means distortion (inertia) of every restart
    distortions: np.ndarray
    best: int


def spectral_embedding(w: AffinityMatrix, k: int) -> Matrix:
    """Row-normalized top-k eigenvectors of D^-1/2 W D^-1/2.

    Args:
        w - Affinity matrix
        k - Embedding dimension

    Returns:
        Matrix of shape (n, k). Rows have unit length except all-zero rows,
        which stay zero.
    """
    deg = w.w.sum(axis=1) + tbtlrr.settings.DEGREE_GUARD
    inv_sqrt = 1.0 / np.sqrt(deg)
    m = inv_sqrt[:, None] * w.w * inv_sqrt[None, :]
    n = w.n
    try:
        # Eigenvalues come back ascending; keep the k largest, largest first.
        _, vecs = scipy.linalg.eigh(m, subset_by_index=[n - k, n - 1])
    except (np.linalg.LinAlgError, ValueError) as e:
        raise TbtlrrError(f"Eigendecomposition of the affinity failed: {e}") from e
    emb = vecs[:, ::-1]

    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    return np.divide(emb, norms, out=np.zeros_like(emb), where=norms > 0)


def spectral_clustering(
    w: AffinityMatrix,
    k: int,
    restarts: int = tbtlrr.settings.DEFAULT_RESTARTS,
    seed: int = 0,
) -> SpectralResult:
    """Normalized spectral clustering with k-means restarts.

    Every restart runs k-means (k-means++ init, up to 300 iterations, until
    assignments stop changing) on the same embedding with its own seed.

    Args:
        w - Affinity matrix
        k - Number of clusters, 2 <= k <= n
        restarts - Number of k-means runs
        seed - Base seed

    Returns:
        SpectralResult with the best restart and all restarts' labels.
    """
    if not 2 <= k <= w.n:
        raise ValueError(f"Need 2 <= k <= {w.n}, got k = {k}")
    if restarts < 1:
        raise ValueError(f"Need at least one restart, got {restarts}")

    emb = spectral_embedding(w, k)
    labels, distortions = [], []
    for s in derive_seeds(seed, restarts):
        km = KMeans(
            n_clusters=k,
            init="k-means++",
            n_init=1,
            max_iter=tbtlrr.settings.KMEANS_MAX_ITER,
            tol=0.0,
            random_state=s,
        ).fit(emb)
        labels.append(km.labels_.astype(np.int64) + 1)
        distortions.append(float(km.inertia_))

    # Ties go to the earliest restart.
    best = int(np.argmin(distortions))
    all_labels = np.stack(labels)
    return SpectralResult(
        labels=all_labels[best],
        restart_labels=all_labels,
        distortions=np.asarray(distortions),
        best=best,
    )

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

import tbtlrr.settings
from tbtlrr.common.errors import DimensionError
from tbtlrr.common.types import Matrix, Tensor3
from tbtlrr.tensor.core import to_slices


@dataclass(frozen=True, eq=False)
class AffinityMatrix:
    """Symmetric nonnegative sample similarity matrix."""

    w: Matrix

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionError(f"Affinity must be square, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("Affinity contains non-finite entries")
        if np.any(w < 0):
            raise ValueError("Affinity has negative entries")
        if np.abs(w - w.T).max() > 1e-12:
            raise ValueError("Affinity is not symmetric")
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.w.shape[0]


@dataclass(frozen=True, eq=False)
class SliceWeights:
    """Diagonal-ratio weights of the frontal slices of Z."""

    # Diagonal mass over total mass, per slice
    r: npt.NDArray[np.float64]
    # Normalized weights, summing to 1
    w: npt.NDArray[np.float64]
    eps_guard: float
    # True when every ratio was zero and uniform weights were used instead
    degenerate: bool = False


def _square_slices(z: Tensor3) -> np.ndarray:
    if z.ndim != 3 or z.shape[0] != z.shape[1]:
        raise DimensionError(f"Coefficient tensor needs square slices, got {z.shape}")
    return to_slices(z)


def _sym_abs(s: np.ndarray) -> np.ndarray:
    """(|Z| + |Z'|) / 2 for every slice of a (n3, n, n) stack."""
    a = np.abs(s)
    return 0.5 * (a + np.transpose(a, (0, 2, 1)))


def affinity_average(z: Tensor3) -> AffinityMatrix:
    """Fuse the frontal slices of Z by plain averaging.

    W = 1 / (2 n3) * sum_i (|Z_i| + |Z_i'|)

    Args:
        z - Coefficient tensor, shape (n2, n2, n3)

    Returns:
        AffinityMatrix of size n2.
    """
    return AffinityMatrix(_sym_abs(_square_slices(z)).mean(axis=0))


def diag_ratio_weights(
    z: Tensor3, eps_guard: float = tbtlrr.settings.DEFAULT_EPS_GUARD
) -> SliceWeights:
    """Weight each frontal slice by how concentrated it is on the diagonal.

    r_i = sum_j |Z_i[j, j]| / (sum_jk |Z_i[j, k]| + eps_guard), and the
    weights are r_i / sum(r). Well-structured slices have most of their mass
    on the diagonal blocks and get more weight. If every ratio is zero the
    weights fall back to uniform and the result is flagged `degenerate`.

    Args:
        z - Coefficient tensor, shape (n2, n2, n3)
        eps_guard - Guard against division by zero

    Returns:
        SliceWeights with one weight per slice.
    """
    if not eps_guard > 0:
        raise ValueError(f"eps_guard must be positive, got {eps_guard}")
    a = np.abs(_square_slices(z))
    diag = np.trace(a, axis1=1, axis2=2)
    r = diag / (a.sum(axis=(1, 2)) + eps_guard)

    total = r.sum()
    if total == 0:
        n3 = len(r)
        return SliceWeights(r=r, w=np.full(n3, 1.0 / n3), eps_guard=eps_guard, degenerate=True)
    return SliceWeights(r=r, w=r / total, eps_guard=eps_guard)


def affinity_weighted(z: Tensor3, weights: SliceWeights) -> AffinityMatrix:
    """Fuse the frontal slices of Z with per-slice weights.

    W = sum_i w_i * (|Z_i| + |Z_i'|) / 2

    The absolute value and symmetrization are applied per slice so the
    result is a valid affinity, as in the plain average.

    Args:
        z - Coefficient tensor, shape (n2, n2, n3)
        weights - One weight per frontal slice

    Returns:
        AffinityMatrix of size n2.
    """
    s = _sym_abs(_square_slices(z))
    w = np.asarray(weights.w, dtype=np.float64)
    if w.shape != (s.shape[0],):
        raise DimensionError(f"Need {s.shape[0]} slice weights, got {w.shape}")
    return AffinityMatrix(np.tensordot(w, s, axes=1))

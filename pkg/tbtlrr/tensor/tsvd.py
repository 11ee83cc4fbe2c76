from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from tbtlrr.common.errors import DegenerateInputError, SliceDecompositionError
from tbtlrr.common.types import Matrix, Tensor3

from .core import from_slices, to_slices
from .product import t_product, t_transpose
from .transform import OrthoTransform, apply_transform, inverse_transform


@dataclass(frozen=True, eq=False)
class TTsvdFactors:
    """Factors of the transformed tensor SVD, b = u * s * v'.

    All three tensors are in the original domain.
    """

    # Orthogonal tensor, shape (n1, r, n3)
    u: Tensor3
    # f-diagonal in the transform domain, shape (r, r, n3)
    s: Tensor3
    # Orthogonal tensor, shape (n2, r, n3)
    v: Tensor3
    transform: OrthoTransform
    r: int
    # Transform-domain singular values, shape (n3, r). Row k is nonincreasing.
    sigma: Matrix

    def truncated(self, r: int) -> "TTsvdFactors":
        """Keep the leading r singular tubes.

        Slicing lateral slices commutes with a transform along tubes, so this
        is done in the original domain.

        Args:
            r - New tubal rank, at most the current one

        Returns:
            Truncated factors.
        """
        if not 1 <= r <= self.r:
            raise ValueError(f"Can't truncate rank {self.r} factors to {r}")
        return TTsvdFactors(
            u=self.u[:, :r, :],
            s=self.s[:r, :r, :],
            v=self.v[:, :r, :],
            transform=self.transform,
            r=r,
            sigma=self.sigma[:, :r],
        )

    def reconstruct(self) -> Tensor3:
        """Multiply the factors back together."""
        us = t_product(self.u, self.s, self.transform)
        return t_product(us, t_transpose(self.v, self.transform), self.transform)


def slice_svd(b_bar: Tensor3, op: str = "svd") -> tuple[np.ndarray, ...]:
    """Thin SVD of every frontal slice of a transform-domain tensor.

    Args:
        b_bar - Tensor in the transform domain, shape (n1, n2, n3)
        op - Name of the calling operation, used in error messages

    Returns:
        Stacks (u, s, vt) with shapes (n3, n1, m), (n3, m) and (n3, m, n2)
        where m = min(n1, n2).

    Raises:
        SliceDecompositionError naming the slice whose SVD failed.
    """
    us, ss, vts = [], [], []
    for k, piece in enumerate(to_slices(b_bar)):
        try:
            u, s, vt = scipy.linalg.svd(piece, full_matrices=False)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SliceDecompositionError(op, k, str(e)) from e
        us.append(u)
        ss.append(s)
        vts.append(vt)
    return np.stack(us), np.stack(ss), np.stack(vts)


def slice_singular_values(b_bar: Tensor3, op: str = "svd") -> Matrix:
    """Singular values of every transform-domain frontal slice.

    Args:
        b_bar - Tensor in the transform domain
        op - Name of the calling operation, used in error messages

    Returns:
        Matrix of shape (n3, min(n1, n2)); row k is nonincreasing.
    """
    rows = []
    for k, piece in enumerate(to_slices(b_bar)):
        try:
            rows.append(scipy.linalg.svdvals(piece))
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SliceDecompositionError(op, k, str(e)) from e
    return np.stack(rows)


def t_tsvd(b: Tensor3, t: OrthoTransform, r: Optional[int] = None) -> TTsvdFactors:
    """Transformed tensor SVD, optionally truncated to tubal rank r.

    Args:
        b - Tensor of shape (n1, n2, n3)
        t - Transform of size n3
        r - Tubal rank to keep; defaults to min(n1, n2)

    Returns:
        TTsvdFactors with u (n1, r, n3), s (r, r, n3), v (n2, r, n3).

    Raises:
        ValueError if r is outside [1, min(n1, n2)].
        SliceDecompositionError if a slice SVD fails.
    """
    n1, n2, n3 = b.shape
    m = min(n1, n2)
    if r is None:
        r = m
    if not 1 <= r <= m:
        raise ValueError(f"Tubal rank {r} must be in [1, {m}] for shape {b.shape}")

    u, s, vt = slice_svd(apply_transform(t, b), op="t_tsvd")
    u, s, vt = u[:, :, :r], s[:, :r], vt[:, :r, :]

    s_bar = np.zeros((n3, r, r))
    idx = np.arange(r)
    s_bar[:, idx, idx] = s

    return TTsvdFactors(
        u=inverse_transform(t, from_slices(u)),
        s=inverse_transform(t, from_slices(s_bar)),
        v=inverse_transform(t, from_slices(np.transpose(vt, (0, 2, 1)))),
        transform=t,
        r=r,
        sigma=s,
    )


def ttnn(b: Tensor3, t: OrthoTransform) -> float:
    """Transformed tensor nuclear norm.

    Mean over transform-domain frontal slices of their nuclear norms.

    Args:
        b - Input tensor
        t - Transform

    Returns:
        Nonnegative TTNN value.
    """
    sv = slice_singular_values(apply_transform(t, b), op="ttnn")
    return float(sv.sum() / b.shape[2])


def transform_spectrum(b: Tensor3, t: OrthoTransform) -> Matrix:
    """Singular values of every transform-domain slice.

    Args:
        b - Input tensor
        t - Transform

    Returns:
        Matrix of shape (n3, min(n1, n2)).
    """
    return slice_singular_values(apply_transform(t, b), op="spectrum")


def energy_concentration(b: Tensor3, t: OrthoTransform, leading: int) -> float:
    """Share of squared singular-value mass held by the largest values.

    All transform-domain singular values are ranked together, regardless of
    which slice they come from.

    Args:
        b - Input tensor
        t - Transform
        leading - How many of the largest values to count

    Returns:
        Fraction in [0, 1].
    """
    if leading < 1:
        raise ValueError(f"Need at least one leading component, got {leading}")
    sq = np.sort(transform_spectrum(b, t).ravel())[::-1] ** 2
    total = sq.sum()
    if total == 0:
        raise DegenerateInputError("All singular values are zero")
    return float(sq[:leading].sum() / total)

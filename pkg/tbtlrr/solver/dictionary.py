import logging
import math
from dataclasses import dataclass

import numpy as np

import tbtlrr.settings
from tbtlrr.common.errors import DegenerateInputError
from tbtlrr.common.types import Tensor3
from tbtlrr.prox import soft_threshold, svt_transform
from tbtlrr.tensor import OrthoTransform, t_product, t_transpose, t_tsvd, zeros

from .config import SelfRepresentation, SolverConfig, Trpca, TruncatedTtsvd

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Dictionary:
    """Factors of the skinny T-TSVD of the dictionary X~ = U * S * V'.

    The representation terms become X~ * Z = A * (V' * Z) and
    L * X~ = (L * U) * B, so the solver works with the smaller projected
    variables Z_bar = V' * Z and L_bar = L * U.
    """

    # U * S, shape (n1, r, n3)
    a: Tensor3
    # S * V', shape (r, n2, n3)
    b: Tensor3
    # Shape (n1, r, n3)
    u: Tensor3
    # Shape (n2, r, n3); recovers Z = V * Z_bar
    v: Tensor3
    r: int
    transform: OrthoTransform


@dataclass(frozen=True, eq=False)
class TrpcaResult:
    """Low-rank plus sparse split of a tensor."""

    low_rank: Tensor3
    sparse: Tensor3
    iterations: int
    converged: bool


def default_trpca_lambda(shape: tuple[int, ...]) -> float:
    """Standard TRPCA sparsity weight, 1 / sqrt(max(n1, n2) * n3)."""
    n1, n2, n3 = shape
    return 1.0 / math.sqrt(max(n1, n2) * n3)


def trpca(x: Tensor3, t: OrthoTransform, lam: float, cfg: SolverConfig) -> TrpcaResult:
    """Split a tensor into low-rank and sparse parts.

    Solves min ttnn(L) + lam * ||E||_1 s.t. X = L + E with a two-block ADMM
    that shares the mu schedule, tolerance and iteration cap of `cfg`.

    Args:
        x - Data tensor
        t - Transform defining the TTNN
        lam - Weight of the sparse term
        cfg - Solver config supplying mu0, mu_max, rho, eps and max_iters

    Returns:
        TrpcaResult with the low-rank and sparse parts.
    """
    n3 = x.shape[2]
    low, sparse, y = zeros(x.shape), zeros(x.shape), zeros(x.shape)
    mu = cfg.mu0

    for it in range(1, cfg.max_iters + 1):
        # TTNN averages over slices, hence the 1/n3 on the threshold.
        low_next = svt_transform(x - sparse + y / mu, t, 1.0 / (n3 * mu))
        sparse_next = soft_threshold(x - low_next + y / mu, lam / mu)
        resid = x - low_next - sparse_next

        change = max(
            np.abs(low_next - low).max(),
            np.abs(sparse_next - sparse).max(),
            np.abs(resid).max(),
        )
        low, sparse = low_next, sparse_next
        if change < cfg.eps:
            logger.debug("TRPCA converged after %d iterations", it)
            return TrpcaResult(low, sparse, it, True)

        y = y + mu * resid
        mu = min(cfg.rho * mu, cfg.mu_max)

    logger.warning("TRPCA stopped at the iteration cap (%d)", cfg.max_iters)
    return TrpcaResult(low, sparse, cfg.max_iters, False)


def denoise_dictionary(x: Tensor3, cfg: SolverConfig, t: OrthoTransform) -> Tensor3:
    """Derive the dictionary X~ from the data.

    Args:
        x - Data tensor
        cfg - Solver config; `cfg.dict_mode` picks the method
        t - Transform

    Returns:
        Dictionary tensor with the same shape as `x`.

    Raises:
        ValueError if a truncation rank exceeds min(n1, n2).
    """
    match cfg.dict_mode:
        case SelfRepresentation():
            return x
        case TruncatedTtsvd(rank=r):
            m = min(x.shape[0], x.shape[1])
            if r > m:
                raise ValueError(f"Dictionary rank {r} exceeds min(n1, n2) = {m}")
            return t_tsvd(x, t, r).reconstruct()
        case Trpca(lam=lam):
            lam = default_trpca_lambda(x.shape) if lam is None else lam
            return trpca(x, t, lam, cfg).low_rank
        case _:
            raise TypeError(f"Unsupported dictionary mode {cfg.dict_mode!r}")


def build_dictionary(
    x_tilde: Tensor3,
    t: OrthoTransform,
    rtol: float = tbtlrr.settings.DICTIONARY_RTOL,
) -> Dictionary:
    """Build the projected dictionary factors from the skinny T-TSVD.

    The rank is shared by all slices: the largest per-slice count of
    transform-domain singular values above `rtol` times the largest one.
    Slices of lower rank are padded with zero singular values.

    Args:
        x_tilde - Dictionary tensor
        t - Transform
        rtol - Relative singular value cutoff

    Returns:
        Dictionary with A = U * S and B = S * V'.

    Raises:
        DegenerateInputError if `x_tilde` is all zeros.
    """
    if not np.any(x_tilde):
        raise DegenerateInputError("Can't build a dictionary from an all-zero tensor")

    full = t_tsvd(x_tilde, t)
    cutoff = rtol * full.sigma.max()
    r = int((full.sigma > cutoff).sum(axis=1).max())
    f = full.truncated(r)

    return Dictionary(
        a=t_product(f.u, f.s, t),
        b=t_product(f.s, t_transpose(f.v, t), t),
        u=f.u,
        v=f.v,
        r=r,
        transform=t,
    )

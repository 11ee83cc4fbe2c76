"""The primal and dual steps of the ADMM sweep.

Each function reads the iterates it needs from the state and returns the new
value without mutating anything. The sweep order is J, Z_bar, T_aux, L_bar,
N, E, then the multipliers; each step must see the outputs of the previous
ones, so callers assign results back into the state before the next call.
"""
import math

import numpy as np
import scipy.linalg

from tbtlrr.common.errors import SliceDecompositionError
from tbtlrr.common.types import Tensor3
from tbtlrr.prox import frobenius_shrink, half_threshold, svt_transform
from tbtlrr.tensor import apply_transform, inverse_transform, t_product, ttnn
from tbtlrr.tensor.core import from_slices, to_slices
from tbtlrr.tensor.tsvd import slice_singular_values

from .dictionary import Dictionary
from .state import Residuals, SolverState


def _bar(d: Dictionary, b: Tensor3) -> np.ndarray:
    """Transform-domain frontal slices, shape (n3, rows, cols)."""
    return to_slices(apply_transform(d.transform, b))


def _unbar(d: Dictionary, s: np.ndarray) -> Tensor3:
    return inverse_transform(d.transform, from_slices(s))


def _spd_solve(m: np.ndarray, rhs: np.ndarray, op: str, k: int) -> np.ndarray:
    """Solve m @ x = rhs for a symmetric positive definite m."""
    try:
        return scipy.linalg.cho_solve(scipy.linalg.cho_factor(m), rhs)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SliceDecompositionError(op, k, str(e)) from e


def az(state: SolverState, d: Dictionary) -> Tensor3:
    """A * Z_bar"""
    return t_product(d.a, state.z_bar, d.transform)


def lb(state: SolverState, d: Dictionary) -> Tensor3:
    """L_bar * B"""
    return t_product(state.l_bar, d.b, d.transform)


def data_residual(state: SolverState, d: Dictionary, x: Tensor3) -> Tensor3:
    """X - A * Z_bar - L_bar * B - E - N"""
    return x - az(state, d) - lb(state, d) - state.e - state.n


def update_j(state: SolverState, d: Dictionary, mu: float) -> Tensor3:
    """Threshold the singular values of Z_bar + G / mu at 1 / mu.

    Args:
        state - Current iterates
        d - Dictionary (supplies the transform)
        mu - Penalty

    Returns:
        New J
    """
    return svt_transform(state.z_bar + state.g / mu, d.transform, 1.0 / mu)


def update_z_bar(state: SolverState, d: Dictionary, x: Tensor3, mu: float) -> Tensor3:
    """Least-squares step for Z_bar.

    With C1 = X - L_bar * B - E - N, every transform-domain slice solves

        (I + A_k' A_k) Z_k = A_k' (C1_k + P_k / mu) + J_k - G_k / mu

    by Cholesky factorization.

    Args:
        state - Current iterates, with the fresh J
        d - Dictionary
        x - Data tensor
        mu - Penalty

    Returns:
        New Z_bar
    """
    c1 = x - lb(state, d) - state.e - state.n
    a = _bar(d, d.a)
    at = np.transpose(a, (0, 2, 1))
    rhs = at @ _bar(d, c1 + state.p / mu) + _bar(d, state.j - state.g / mu)
    eye = np.eye(d.r)

    out = np.empty_like(rhs)
    for k in range(rhs.shape[0]):
        out[k] = _spd_solve(eye + at[k] @ a[k], rhs[k], "update_z_bar", k)
    return _unbar(d, out)


def update_t_aux(state: SolverState, d: Dictionary, mu: float) -> Tensor3:
    """Threshold the singular values of L_bar + W / mu at 1 / mu.

    Args:
        state - Current iterates
        d - Dictionary (supplies the transform)
        mu - Penalty

    Returns:
        New T_aux
    """
    return svt_transform(state.l_bar + state.w / mu, d.transform, 1.0 / mu)


def update_l_bar(state: SolverState, d: Dictionary, x: Tensor3, mu: float) -> Tensor3:
    """Least-squares step for L_bar.

    With C2 = X - A * Z_bar - E - N, every transform-domain slice solves

        L_k (I + B_k B_k') = (C2_k + P_k / mu) B_k' + T_k - W_k / mu

    The system is symmetric, so it is solved transposed from the left.

    Args:
        state - Current iterates, with the fresh Z_bar and T_aux
        d - Dictionary
        x - Data tensor
        mu - Penalty

    Returns:
        New L_bar
    """
    c2 = x - az(state, d) - state.e - state.n
    b = _bar(d, d.b)
    bt = np.transpose(b, (0, 2, 1))
    rhs = _bar(d, c2 + state.p / mu) @ bt + _bar(d, state.t_aux - state.w / mu)
    eye = np.eye(d.r)

    out = np.empty_like(rhs)
    for k in range(rhs.shape[0]):
        m = eye + b[k] @ bt[k]
        out[k] = _spd_solve(m, rhs[k].T, "update_l_bar", k).T
    return _unbar(d, out)


def update_n(
    state: SolverState, d: Dictionary, x: Tensor3, mu: float, beta: float
) -> Tensor3:
    """Frobenius shrinkage step for the Gaussian noise.

    Args:
        state - Current iterates, with the fresh Z_bar and L_bar
        d - Dictionary
        x - Data tensor
        mu - Penalty
        beta - Weight of the Frobenius term

    Returns:
        New N
    """
    c3 = x - az(state, d) - lb(state, d) - state.e
    return frobenius_shrink(c3, state.p, mu, beta)


def update_e(
    state: SolverState, d: Dictionary, x: Tensor3, mu: float, lam: float
) -> Tensor3:
    """Half-thresholding step for the sparse noise.

    Args:
        state - Current iterates, with the fresh Z_bar, L_bar and N
        d - Dictionary
        x - Data tensor
        mu - Penalty
        lam - Weight of the l1/2 term

    Returns:
        New E
    """
    c4 = x - az(state, d) - lb(state, d) - state.n
    return half_threshold(c4 + state.p / mu, lam / mu)


def update_multipliers(
    state: SolverState,
    d: Dictionary,
    x: Tensor3,
    mu: float,
    rho: float,
    mu_max: float,
) -> tuple[Tensor3, Tensor3, Tensor3, float]:
    """Dual ascent on the three constraints and the penalty increase.

    Args:
        state - Iterates after the full primal sweep
        d - Dictionary
        x - Data tensor
        mu - Penalty used in this sweep
        rho - Penalty growth factor
        mu_max - Penalty cap

    Returns:
        (P, G, W, next mu)
    """
    p = state.p + mu * data_residual(state, d, x)
    g = state.g + mu * (state.z_bar - state.j)
    w = state.w + mu * (state.l_bar - state.t_aux)
    return p, g, w, min(rho * mu, mu_max)


def check_convergence(
    state: SolverState, d: Dictionary, x: Tensor3, eps: float
) -> tuple[bool, Residuals]:
    """Test the stopping rule.

    Args:
        state - Current iterates
        d - Dictionary
        x - Data tensor
        eps - Tolerance

    Returns:
        (converged, residuals) where converged means all three infinity-norm
        residuals are below `eps`.
    """
    res = (
        float(np.abs(state.z_bar - state.j).max()),
        float(np.abs(state.l_bar - state.t_aux).max()),
        float(np.abs(data_residual(state, d, x)).max()),
    )
    return all(r < eps for r in res), res


def _weighted(weight: float, value: float) -> float:
    # An infinite weight on an exactly zero term contributes nothing.
    return 0.0 if value == 0 else weight * value


def _l_half_sum(b: Tensor3) -> float:
    """Separable l1/2 penalty, sum of |b|^(1/2)."""
    return float(np.sqrt(np.abs(b)).sum())


def objective(state: SolverState, d: Dictionary, lam: float, beta: float) -> float:
    """Model objective at the current iterates.

    ttnn(Z_bar) + ttnn(L_bar) + lam * sum |E|^(1/2) + beta * ||N||_F^2

    Args:
        state - Current iterates
        d - Dictionary (supplies the transform)
        lam - Weight of the l1/2 term
        beta - Weight of the Frobenius term

    Returns:
        Objective value
    """
    t = d.transform
    return (
        ttnn(state.z_bar, t)
        + ttnn(state.l_bar, t)
        + _weighted(lam, _l_half_sum(state.e))
        + _weighted(beta, float(np.sum(state.n**2)))
    )


def augmented_lagrangian(
    state: SolverState, d: Dictionary, x: Tensor3, lam: float, beta: float, mu: float
) -> float:
    """Augmented Lagrangian of the split problem.

    The nuclear norm terms are the slice sums the J and T_aux steps minimize.

    Args:
        state - Current iterates
        d - Dictionary
        x - Data tensor
        lam - Weight of the l1/2 term
        beta - Weight of the Frobenius term
        mu - Penalty

    Returns:
        Lagrangian value
    """
    t = d.transform
    nuclear = slice_singular_values(apply_transform(t, state.j)).sum()
    nuclear += slice_singular_values(apply_transform(t, state.t_aux)).sum()

    value = float(nuclear)
    value += _weighted(lam, _l_half_sum(state.e))
    value += _weighted(beta, float(np.sum(state.n**2)))
    for mult, gap in (
        (state.p, data_residual(state, d, x)),
        (state.g, state.z_bar - state.j),
        (state.w, state.l_bar - state.t_aux),
    ):
        value += float(np.sum(mult * gap)) + 0.5 * mu * float(np.sum(gap**2))
    return value if math.isfinite(value) else math.inf

import logging
import math
from typing import Optional

import numpy as np

from tbtlrr.common.errors import DegenerateInputError, SolverDivergedError
from tbtlrr.common.trace import IterationTrace
from tbtlrr.common.types import Tensor3
from tbtlrr.tensor import as_tensor3, make_transform, t_product

from .config import SolverConfig
from .dictionary import build_dictionary, denoise_dictionary
from .state import SolverReport, SolverState, init_state
from .updates import (
    augmented_lagrangian,
    check_convergence,
    objective,
    update_e,
    update_j,
    update_l_bar,
    update_multipliers,
    update_n,
    update_t_aux,
    update_z_bar,
)

logger = logging.getLogger(__name__)


def _check_finite(state: SolverState, iteration: int):
    """Raise if any iterate has NaN or infinite entries."""
    for name, value in state.items():
        if not np.all(np.isfinite(value)):
            raise SolverDivergedError(iteration, name)
    if not math.isfinite(state.mu):
        raise SolverDivergedError(iteration, "mu")


def solve(
    x: Tensor3, cfg: SolverConfig = SolverConfig(), trace_path: Optional[str] = None
) -> SolverReport:
    """Compute the bilateral low-rank representation of a data tensor.

    Pipeline: pick the transform, derive the dictionary, factor it, then run
    the ADMM sweep from an all-zero start until the three residuals drop
    below `cfg.eps` or `cfg.max_iters` is reached. The coefficient tensor is
    recovered as Z = V * Z_bar.

    Args:
        x - Data tensor with samples as lateral slices, shape (n1, n2, n3)
        cfg - Solver parameters
        trace_path - Optional CSV file for the per-iteration trace

    Returns:
        SolverReport with Z (n2, n2, n3), the noise tensors and diagnostics.

    Raises:
        DegenerateInputError if `x` is all zeros.
        SolverDivergedError if an iterate stops being finite.
    """
    x = as_tensor3(x, "data")
    if not np.any(x):
        raise DegenerateInputError("Can't represent an all-zero tensor")

    t = make_transform(cfg.transform_kind, x)
    d = build_dictionary(denoise_dictionary(x, cfg, t), t)
    state = init_state(x, d, cfg.mu0)
    logger.info(
        "Solving %s tensor, %s transform, dictionary rank %d",
        "x".join(map(str, x.shape)),
        t.kind.value,
        d.r,
    )

    trace = IterationTrace(
        header={**cfg.header(), "dims": "x".join(map(str, x.shape)), "rank": d.r}
    )
    objectives = list[float]()
    starts = list[float]()
    lagrangians = list[float]()
    converged = False
    _, residuals = check_convergence(state, d, x, cfg.eps)

    for it in range(1, cfg.max_iters + 1):
        mu = state.mu
        starts.append(augmented_lagrangian(state, d, x, cfg.lam, cfg.beta, mu))
        state.j = update_j(state, d, mu)
        state.z_bar = update_z_bar(state, d, x, mu)
        state.t_aux = update_t_aux(state, d, mu)
        state.l_bar = update_l_bar(state, d, x, mu)
        if cfg.gaussian_term:
            state.n = update_n(state, d, x, mu, cfg.beta)
        if cfg.sparse_term:
            state.e = update_e(state, d, x, mu, cfg.lam)
        lagrangians.append(augmented_lagrangian(state, d, x, cfg.lam, cfg.beta, mu))

        state.p, state.g, state.w, state.mu = update_multipliers(
            state, d, x, mu, cfg.rho, cfg.mu_max
        )
        state.iter = it
        _check_finite(state, it)

        converged, residuals = check_convergence(state, d, x, cfg.eps)
        state.residuals.append(residuals)
        objectives.append(objective(state, d, cfg.lam, cfg.beta))
        trace.capture(
            iteration=it,
            mu=mu,
            res_z=residuals[0],
            res_l=residuals[1],
            res_data=residuals[2],
            objective=objectives[-1],
            lagrangian_start=starts[-1],
            lagrangian=lagrangians[-1],
        )
        logger.debug("iter %d mu=%.3g residuals=%s", it, mu, residuals)
        if converged:
            break

    logger.info(
        "Stopped after %d iterations (converged=%s, residuals=%s)",
        state.iter,
        converged,
        residuals,
    )
    if trace_path is not None:
        trace.write_csv(trace_path)

    return SolverReport(
        z=t_product(d.v, state.z_bar, t),
        e=state.e,
        n=state.n,
        iterations=state.iter,
        converged=converged,
        final_residuals=residuals,
        objective_history=objectives,
        lagrangian_start_history=starts,
        lagrangian_history=lagrangians,
        transform=t,
        dictionary_rank=d.r,
        trace=trace,
    )

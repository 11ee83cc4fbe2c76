from dataclasses import dataclass, field
from typing import Optional

from tbtlrr.common.errors import DimensionError
from tbtlrr.common.trace import IterationTrace
from tbtlrr.common.types import Tensor3
from tbtlrr.tensor import OrthoTransform, zeros

from .dictionary import Dictionary

# Infinity norms of (Z_bar - J, L_bar - T_aux, data constraint residual)
Residuals = tuple[float, float, float]


@dataclass
class SolverState:
    """All ADMM iterates.

    `t_aux` is the splitting variable for L_bar; it is not the transform.
    """

    # Splitting variable for z_bar, shape (r, n2, n3)
    j: Tensor3
    z_bar: Tensor3
    # Splitting variable for l_bar, shape (n1, r, n3)
    t_aux: Tensor3
    l_bar: Tensor3
    # Gaussian noise, shape (n1, n2, n3)
    n: Tensor3
    # Sparse noise, shape (n1, n2, n3)
    e: Tensor3
    # Multiplier of the data constraint
    p: Tensor3
    # Multiplier of z_bar = j
    g: Tensor3
    # Multiplier of l_bar = t_aux
    w: Tensor3
    mu: float
    iter: int = 0
    residuals: list[Residuals] = field(default_factory=list)

    def items(self) -> list[tuple[str, Tensor3]]:
        """Get (name, tensor) pairs of every iterate."""
        names = ("j", "z_bar", "t_aux", "l_bar", "n", "e", "p", "g", "w")
        return [(name, getattr(self, name)) for name in names]


def init_state(x: Tensor3, d: Dictionary, mu0: float) -> SolverState:
    """All-zero starting point.

    Args:
        x - Data tensor, shape (n1, n2, n3)
        d - Dictionary built from the data
        mu0 - Initial penalty

    Returns:
        SolverState with every iterate and multiplier at zero.
    """
    n1, n2, n3 = x.shape
    if d.a.shape[0] != n1 or d.b.shape[1] != n2 or d.a.shape[2] != n3:
        raise DimensionError(
            f"Dictionary factors {d.a.shape}, {d.b.shape} don't fit data {x.shape}"
        )
    r = d.r
    return SolverState(
        j=zeros((r, n2, n3)),
        z_bar=zeros((r, n2, n3)),
        t_aux=zeros((n1, r, n3)),
        l_bar=zeros((n1, r, n3)),
        n=zeros((n1, n2, n3)),
        e=zeros((n1, n2, n3)),
        p=zeros((n1, n2, n3)),
        g=zeros((r, n2, n3)),
        w=zeros((n1, r, n3)),
        mu=mu0,
    )


@dataclass(frozen=True, eq=False)
class SolverReport:
    """Result of a solver run."""

    # Coefficient tensor Z = V * Z_bar, shape (n2, n2, n3)
    z: Tensor3
    e: Tensor3
    n: Tensor3
    iterations: int
    converged: bool
    final_residuals: Residuals
    objective_history: list[float]
    # Augmented Lagrangian before and after each primal sweep, both at that
    # sweep's penalty and multipliers
    lagrangian_start_history: list[float]
    lagrangian_history: list[float]
    transform: OrthoTransform
    dictionary_rank: int
    trace: Optional[IterationTrace] = None

import tbtlrr.cluster as cluster
import tbtlrr.harness as harness
import tbtlrr.prox as prox
import tbtlrr.solver as solver
import tbtlrr.tensor as tensor

from .common import Matrix, Tensor3, TbtlrrError
from .solver import SolverConfig, SolverReport, solve

__all__ = [
    "Tensor3",
    "Matrix",
    "TbtlrrError",
    "SolverConfig",
    "SolverReport",
    "solve",
    "cluster",
    "harness",
    "prox",
    "solver",
    "tensor",
]

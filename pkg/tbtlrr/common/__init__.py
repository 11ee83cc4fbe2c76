from .errors import (
    DegenerateInputError,
    DimensionError,
    FormatError,
    SliceDecompositionError,
    SolverDivergedError,
    TbtlrrError,
)
from .seeds import derive_seeds
from .trace import IterationTrace, read_trace_header
from .types import Dims, Labels, Matrix, Tensor3

__all__ = [
    "Dims",
    "Labels",
    "Matrix",
    "Tensor3",
    "derive_seeds",
    "IterationTrace",
    "read_trace_header",
    "TbtlrrError",
    "DimensionError",
    "DegenerateInputError",
    "FormatError",
    "SliceDecompositionError",
    "SolverDivergedError",
]

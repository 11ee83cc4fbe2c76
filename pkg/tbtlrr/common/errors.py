class TbtlrrError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(TbtlrrError, ValueError):
    """Operands have incompatible shapes."""


class DegenerateInputError(TbtlrrError, ValueError):
    """Input carries no information to work with (e.g. all zeros)."""


class FormatError(TbtlrrError, ValueError):
    """A file on disk does not match the expected format."""


class SliceDecompositionError(TbtlrrError, ArithmeticError):
    """A per-slice factorization failed in the transform domain."""

    def __init__(self, op: str, k: int, reason: str = ""):
        self.op = op
        self.k = k
        super().__init__(f"{op} failed on transform-domain slice {k}: {reason}")


class SolverDivergedError(TbtlrrError, ArithmeticError):
    """An iterate stopped being finite."""

    def __init__(self, iteration: int, name: str):
        self.iteration = iteration
        self.name = name
        super().__init__(f"Non-finite values in `{name}` at iteration {iteration}")

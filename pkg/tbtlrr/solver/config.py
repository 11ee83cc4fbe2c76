import dataclasses
import tomllib
from dataclasses import dataclass
from typing import Any, Optional, Union

import tbtlrr.settings
from tbtlrr.tensor.transform import TransformKind


@dataclass(frozen=True)
class SelfRepresentation:
    """Use the data itself as the dictionary."""

    def __str__(self) -> str:
        return "self"


@dataclass(frozen=True)
class TruncatedTtsvd:
    """Use the rank-r T-TSVD approximation of the data as the dictionary."""

    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"Dictionary rank must be positive, got {self.rank}")

    def __str__(self) -> str:
        return f"ttsvd:{self.rank}"


@dataclass(frozen=True)
class Trpca:
    """Denoise the data with tensor robust PCA and use the low-rank part.

    A missing `lam` means 1 / sqrt(max(n1, n2) * n3).
    """

    lam: Optional[float] = None

    def __post_init__(self):
        if self.lam is not None and not self.lam > 0:
            raise ValueError(f"TRPCA lambda must be positive, got {self.lam}")

    def __str__(self) -> str:
        return "trpca" if self.lam is None else f"trpca:{self.lam!r}"


# How the dictionary is derived from the data.
DictMode = Union[SelfRepresentation, TruncatedTtsvd, Trpca]


def parse_dict_mode(s: Union[str, DictMode]) -> DictMode:
    """Parse a dictionary mode such as `self`, `ttsvd:5` or `trpca:0.1`.

    Args:
        s - Mode string (or an already parsed mode)

    Returns:
        Parsed DictMode

    Raises:
        ValueError if the string isn't a known mode.
    """
    if isinstance(s, (SelfRepresentation, TruncatedTtsvd, Trpca)):
        return s
    name, _, arg = s.strip().partition(":")
    match name.lower(), arg:
        case "self", "":
            return SelfRepresentation()
        case "ttsvd", str() if arg:
            return TruncatedTtsvd(int(arg))
        case "trpca", "":
            return Trpca()
        case "trpca", str():
            return Trpca(float(arg))
        case _:
            raise ValueError(f"Unknown dictionary mode {s!r}")


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of the ADMM solver.

    The mu schedule and tolerance default to the values in `settings`.
    """

    # Weight of the l1/2 sparse-noise term
    lam: float = 1.0
    # Weight of the Frobenius Gaussian-noise term
    beta: float = 10.0
    mu0: float = tbtlrr.settings.DEFAULT_MU
    mu_max: float = tbtlrr.settings.DEFAULT_MU_MAX
    rho: float = tbtlrr.settings.DEFAULT_RHO
    eps: float = tbtlrr.settings.DEFAULT_EPS
    max_iters: int = tbtlrr.settings.DEFAULT_MAX_ITERS
    dict_mode: DictMode = SelfRepresentation()
    transform_kind: TransformKind = TransformKind.LEARNED
    seed: int = 0
    # Ablation switches: dropping a term pins its noise tensor at zero.
    sparse_term: bool = True
    gaussian_term: bool = True

    def __post_init__(self):
        object.__setattr__(self, "dict_mode", parse_dict_mode(self.dict_mode))
        object.__setattr__(self, "transform_kind", TransformKind(self.transform_kind))
        for name in ("lam", "beta", "mu0", "mu_max", "eps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.mu0 > self.mu_max:
            raise ValueError(f"mu0 {self.mu0} can't be greater than mu_max {self.mu_max}")
        if not self.rho > 1:
            raise ValueError(f"rho must be greater than 1, got {self.rho}")
        if self.max_iters < 0:
            raise ValueError(f"max_iters can't be negative, got {self.max_iters}")
        if self.seed < 0:
            raise ValueError(f"seed must be unsigned, got {self.seed}")

    def header(self) -> dict[str, Any]:
        """Get the parameters as flat key/value pairs for file headers."""
        return {
            "lambda": repr(self.lam),
            "beta": repr(self.beta),
            "mu0": repr(self.mu0),
            "mu_max": repr(self.mu_max),
            "rho": repr(self.rho),
            "eps": repr(self.eps),
            "max_iters": self.max_iters,
            "dict_mode": str(self.dict_mode),
            "transform_kind": self.transform_kind.value,
            "seed": self.seed,
            "sparse_term": self.sparse_term,
            "gaussian_term": self.gaussian_term,
        }


# Keys accepted in config files that don't match a field name.
_ALIASES = {"lambda": "lam"}


def config_from_dict(values: dict[str, Any], base: Optional[SolverConfig] = None) -> SolverConfig:
    """Build a config from flat key/value pairs.

    Args:
        values - Mapping of field names (or aliases) to values. `None` values
        are ignored, which lets unset CLI flags pass through.
        base - Config supplying values for missing keys

    Returns:
        New SolverConfig

    Raises:
        ValueError on unknown keys or invalid values.
    """
    known = {f.name for f in dataclasses.fields(SolverConfig)}
    updates = dict[str, Any]()
    for key, value in values.items():
        name = _ALIASES.get(key, key)
        if name not in known:
            raise ValueError(f"Unknown solver config key {key!r}")
        if value is not None:
            updates[name] = value
    return dataclasses.replace(base or SolverConfig(), **updates)


def load_config(path: str) -> SolverConfig:
    """Load a solver config from a flat TOML file.

    Example file:

        lambda = 1.0
        beta = 10.0
        transform_kind = "dct"
        dict_mode = "ttsvd:5"

    Args:
        path - TOML file

    Returns:
        SolverConfig with file values over the defaults.
    """
    with open(path, "rb") as fh:
        return config_from_dict(tomllib.load(fh))

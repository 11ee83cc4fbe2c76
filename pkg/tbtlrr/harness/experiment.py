import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

import tbtlrr.settings
from tbtlrr.cluster.labels import read_labels
from tbtlrr.cluster.noise import add_gaussian_noise, add_sparse_noise, normalize_unit_range
from tbtlrr.common.errors import DimensionError
from tbtlrr.common.types import Labels, Tensor3
from tbtlrr.solver.config import SolverConfig
from tbtlrr.tensor.io import read_t3b

from .synthetic import SyntheticParams, generate_synthetic


class NoiseType(str, enum.Enum):
    """Kind of corruption a noise sweep injects."""

    SPARSE = "sparse"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to run the pipeline once.

    Exactly one of `input_path` and `synthetic` must be given. Data loaded
    from disk needs a labels file.
    """

    out_dir: str
    input_path: Optional[str] = None
    labels_path: Optional[str] = None
    synthetic: Optional[SyntheticParams] = None
    solver: SolverConfig = SolverConfig()
    noise_type: NoiseType = NoiseType.SPARSE
    noise_levels: tuple[float, ...] = field(default=(0.0, 0.1, 0.2, 0.35))
    # Number of clusters; taken from the labels when missing.
    k: Optional[int] = None
    restarts: int = tbtlrr.settings.DEFAULT_RESTARTS
    seed: int = 0
    # Scale loaded data to [0, 1]. Synthetic data handles this itself.
    normalize: bool = True
    # Write 0.0 instead of wall-clock time so reruns are byte-identical.
    record_runtime: bool = True
    # Write Z, E, N and the affinities as T3B files.
    dump_tensors: bool = False

    def __post_init__(self):
        if (self.input_path is None) == (self.synthetic is None):
            raise ValueError("Give exactly one of an input path or synthetic parameters")
        if self.input_path is not None and self.labels_path is None:
            raise ValueError("Data loaded from disk needs a labels file")
        object.__setattr__(self, "noise_type", NoiseType(self.noise_type))
        object.__setattr__(self, "noise_levels", tuple(self.noise_levels))
        if self.restarts < 1:
            raise ValueError(f"Need at least one restart, got {self.restarts}")
        if self.k is not None and self.k < 2:
            raise ValueError(f"Need at least two clusters, got {self.k}")

    def header(self) -> dict[str, object]:
        """Flat description of the data source for file headers."""
        if self.synthetic is not None:
            s = self.synthetic
            return {
                "data": "synthetic",
                "synthetic_seed": s.seed,
                "sparse_fraction": repr(s.sparse_fraction),
                "gaussian_level": repr(s.gaussian_level),
            }
        return {"data": self.input_path, "labels": self.labels_path}


def load_data(spec: ExperimentSpec) -> tuple[Tensor3, Labels, int]:
    """Load or generate the data tensor and its true labels.

    Args:
        spec - Experiment spec

    Returns:
        (data tensor, 1-based labels, number of clusters)

    Raises:
        DimensionError if the labels don't match the samples.
        ValueError if `spec.k` disagrees with the labels.
    """
    if spec.synthetic is not None:
        x, truth = generate_synthetic(spec.synthetic)
    else:
        x = read_t3b(spec.input_path)
        truth = read_labels(spec.labels_path)
        if truth.size != x.shape[1]:
            raise DimensionError(f"{truth.size} labels for {x.shape[1]} samples")
        if spec.normalize:
            x = normalize_unit_range(x)

    k = len(np.unique(truth))
    if spec.k is not None and spec.k != k:
        raise ValueError(f"k = {spec.k} but the labels have {k} clusters")
    return x, truth, k


def inject_noise(x: Tensor3, noise_type: NoiseType, level: float, seed: int) -> Tensor3:
    """Corrupt data for a robustness run.

    Args:
        x - Clean data in [0, 1]
        noise_type - Sparse (fraction of replaced entries) or Gaussian
        (relative standard deviation)
        level - Noise level
        seed - Random seed

    Returns:
        Corrupted copy of `x`.
    """
    match NoiseType(noise_type):
        case NoiseType.SPARSE:
            return add_sparse_noise(x, level, seed)
        case NoiseType.GAUSSIAN:
            return add_gaussian_noise(x, level, seed)

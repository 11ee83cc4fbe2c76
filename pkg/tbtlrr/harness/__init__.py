from .experiment import ExperimentSpec, NoiseType, inject_noise, load_data
from .pipeline import PipelineResult, read_table, run_on_data, run_pipeline, write_table
from .search import GridResult, ablation, grid_search, noise_sweep, rank_table
from .spectrum import concentration_table, spectrum_table
from .synthetic import SyntheticParams, generate_synthetic

__all__ = [
    "ExperimentSpec",
    "NoiseType",
    "SyntheticParams",
    "PipelineResult",
    "GridResult",
    "generate_synthetic",
    "load_data",
    "inject_noise",
    "run_on_data",
    "run_pipeline",
    "grid_search",
    "noise_sweep",
    "ablation",
    "rank_table",
    "spectrum_table",
    "concentration_table",
    "read_table",
    "write_table",
]

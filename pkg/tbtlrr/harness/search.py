import dataclasses
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence

import numpy as np
import pandas as pd
import tqdm

from tbtlrr.common.errors import TbtlrrError
from tbtlrr.common.seeds import derive_seeds
from tbtlrr.common.types import Labels, Tensor3

from .experiment import ExperimentSpec, NoiseType, inject_noise, load_data
from .pipeline import VARIANTS, describe_noise, run_on_data, write_table

logger = logging.getLogger(__name__)

GRID_FILE = "grid.csv"
SWEEP_FILE = "sweep.csv"
ABLATION_FILE = "ablation.csv"

# Decade-spaced points covering [1e-5, 1e3].
DEFAULT_GRID = tuple(float(10.0**e) for e in range(-5, 4))

# Ablation cases as (sparse_term, gaussian_term).
ABLATION_CASES = {
    "I": (False, False),
    "II": (True, False),
    "III": (False, True),
    "IV": (True, True),
}

GRID_COLUMNS = [
    "rank",
    "lambda",
    "beta",
    "acc_mean",
    "acc_std",
    "nmi_mean",
    "nmi_std",
    "avg_acc_mean",
    "avg_nmi_mean",
    "iterations",
    "converged",
    "error",
]


@dataclass(frozen=True)
class _Job:
    """One independent pipeline run."""

    x: Tensor3
    truth: Labels
    k: int
    spec: ExperimentSpec
    noise: tuple[str, float]
    out_dir: str


@dataclass(frozen=True, eq=False)
class GridResult:
    """Ranked grid table and its best point."""

    table: pd.DataFrame
    best: tuple[float, float]


def _run_job(job: _Job) -> dict[str, Any]:
    """Run one job and flatten its per-variant metrics.

    Failures are recorded in the `error` field instead of raised.
    """
    try:
        result = run_on_data(job.x, job.truth, job.k, job.spec, job.noise, job.out_dir)
    except (TbtlrrError, np.linalg.LinAlgError) as e:
        logger.warning("Run in %s failed: %s", job.out_dir, e)
        return {"error": str(e), "iterations": 0, "converged": False}

    row: dict[str, Any] = {
        "error": "",
        "iterations": result.report.iterations,
        "converged": result.report.converged,
    }
    for variant, c in result.clusters.items():
        row[f"{variant}_acc_mean"] = c.acc_mean
        row[f"{variant}_acc_std"] = c.acc_std
        row[f"{variant}_nmi_mean"] = c.nmi_mean
        row[f"{variant}_nmi_std"] = c.nmi_std
    return row


def _run_all(jobs: Sequence[_Job], workers: int, desc: str) -> list[dict[str, Any]]:
    """Run jobs, optionally in a process pool, keeping their order.

    Args:
        jobs - Jobs to run
        workers - Pool size; 1 runs everything in this process
        desc - Progress bar label

    Returns:
        One flattened row per job, in job order.
    """
    if workers < 1:
        raise ValueError(f"Need at least one worker, got {workers}")
    if workers == 1:
        results = map(_run_job, jobs)
        return list(tqdm.tqdm(results, total=len(jobs), desc=desc, unit="runs"))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = pool.map(_run_job, jobs)
        return list(tqdm.tqdm(results, total=len(jobs), desc=desc, unit="runs"))


def _nan_metrics(row: dict[str, Any]) -> dict[str, Any]:
    """Fill metrics missing from a failed row with NaN."""
    for variant in VARIANTS:
        for m in ("acc_mean", "acc_std", "nmi_mean", "nmi_std"):
            row.setdefault(f"{variant}_{m}", np.nan)
    return row


def rank_table(table: pd.DataFrame) -> pd.DataFrame:
    """Sort by acc_mean then nmi_mean, best first, failures last.

    Ties keep their input order. A 1-based `rank` column is set.

    Args:
        table - Table with `acc_mean` and `nmi_mean` columns

    Returns:
        Sorted copy.
    """
    ranked = table.sort_values(
        ["acc_mean", "nmi_mean"], ascending=False, na_position="last", kind="stable"
    ).reset_index(drop=True)
    ranked["rank"] = np.arange(1, len(ranked) + 1)
    return ranked


def grid_search(
    spec: ExperimentSpec,
    lambda_grid: Optional[Iterable[float]] = None,
    beta_grid: Optional[Iterable[float]] = None,
    workers: int = 1,
) -> GridResult:
    """Run the pipeline for every (lambda, beta) pair and rank the results.

    Each point writes its own files to `<out_dir>/lambda=<l>_beta=<b>/`.
    The ranked table is written to `<out_dir>/grid.csv`. Points are ranked
    on the weighted affinity; failed points are kept with their error and
    sorted last.

    Args:
        spec - Experiment spec; its lambda and beta are overridden
        lambda_grid - Lambda values; decade points in [1e-5, 1e3] by default
        beta_grid - Beta values; decade points in [1e-5, 1e3] by default
        workers - Number of worker processes

    Returns:
        GridResult with the ranked table and the best (lambda, beta).
    """
    lams = list(DEFAULT_GRID if lambda_grid is None else lambda_grid)
    betas = list(DEFAULT_GRID if beta_grid is None else beta_grid)
    if not lams or not betas:
        raise ValueError("Grids must not be empty")

    x, truth, k = load_data(spec)
    noise = describe_noise(spec)
    points = [(lam, beta) for lam in lams for beta in betas]
    jobs = [
        _Job(
            x,
            truth,
            k,
            dataclasses.replace(spec, solver=dataclasses.replace(spec.solver, lam=lam, beta=beta)),
            noise,
            os.path.join(spec.out_dir, f"lambda={lam!r}_beta={beta!r}"),
        )
        for lam, beta in points
    ]
    rows = _run_all(jobs, workers, "grid")

    records = []
    for (lam, beta), row in zip(points, rows):
        row = _nan_metrics(row)
        records.append(
            {
                "lambda": lam,
                "beta": beta,
                "acc_mean": row["weighted_acc_mean"],
                "acc_std": row["weighted_acc_std"],
                "nmi_mean": row["weighted_nmi_mean"],
                "nmi_std": row["weighted_nmi_std"],
                "avg_acc_mean": row["average_acc_mean"],
                "avg_nmi_mean": row["average_nmi_mean"],
                "iterations": row["iterations"],
                "converged": row["converged"],
                "error": row["error"],
            }
        )
    table = rank_table(pd.DataFrame(records))[GRID_COLUMNS]

    os.makedirs(spec.out_dir, exist_ok=True)
    header = {**spec.header(), "k": k, "restarts": spec.restarts}
    write_table(os.path.join(spec.out_dir, GRID_FILE), table, header)

    best = (float(table.loc[0, "lambda"]), float(table.loc[0, "beta"]))
    logger.info("Best grid point: lambda=%r beta=%r", *best)
    return GridResult(table=table, best=best)


def noise_sweep(
    spec: ExperimentSpec,
    noise_type: Optional[NoiseType] = None,
    levels: Optional[Sequence[float]] = None,
    workers: int = 1,
) -> pd.DataFrame:
    """Run the pipeline on increasingly corrupted copies of the data.

    Level 0 runs on the data unchanged. Every other level gets its own seed
    derived from `spec.seed`. The table has one row per level with the
    metrics of each affinity variant side by side, and is written to
    `<out_dir>/sweep.csv`.

    Args:
        spec - Experiment spec
        noise_type - Kind of noise; `spec.noise_type` by default
        levels - Noise levels in [0, 1]; `spec.noise_levels` by default
        workers - Number of worker processes

    Returns:
        Sweep table.
    """
    noise_type = NoiseType(noise_type or spec.noise_type)
    levels = list(spec.noise_levels if levels is None else levels)
    if not levels:
        raise ValueError("Need at least one noise level")
    for level in levels:
        if not 0 <= level <= 1:
            raise ValueError(f"Noise levels must be in [0, 1], got {level}")

    x, truth, k = load_data(spec)
    seeds = derive_seeds(spec.seed, len(levels))
    jobs = [
        _Job(
            x if level == 0 else inject_noise(x, noise_type, level, s),
            truth,
            k,
            spec,
            (noise_type.value, level),
            os.path.join(spec.out_dir, f"{noise_type.value}={level!r}"),
        )
        for level, s in zip(levels, seeds)
    ]
    rows = _run_all(jobs, workers, f"{noise_type.value} sweep")

    table = pd.DataFrame(
        [{"noise_level": level, **_nan_metrics(row)} for level, row in zip(levels, rows)]
    )
    table.insert(0, "noise_type", noise_type.value)
    _write(spec, SWEEP_FILE, table, k)
    return table


def ablation(spec: ExperimentSpec, workers: int = 1) -> pd.DataFrame:
    """Run the pipeline with each combination of noise terms.

    Case I drops both noise terms, II keeps only the sparse term, III keeps
    only the Gaussian term and IV is the full model. The table has one row
    per case and affinity variant and is written to `<out_dir>/ablation.csv`.

    Args:
        spec - Experiment spec
        workers - Number of worker processes

    Returns:
        Ablation table.
    """
    x, truth, k = load_data(spec)
    noise = describe_noise(spec)
    jobs = [
        _Job(
            x,
            truth,
            k,
            dataclasses.replace(
                spec,
                solver=dataclasses.replace(spec.solver, sparse_term=sparse, gaussian_term=gaussian),
            ),
            noise,
            os.path.join(spec.out_dir, f"case_{case}"),
        )
        for case, (sparse, gaussian) in ABLATION_CASES.items()
    ]
    rows = _run_all(jobs, workers, "ablation")

    records = []
    for (case, (sparse, gaussian)), row in zip(ABLATION_CASES.items(), rows):
        row = _nan_metrics(row)
        for variant in VARIANTS:
            records.append(
                {
                    "case": case,
                    "sparse_term": sparse,
                    "gaussian_term": gaussian,
                    "variant": variant,
                    **{m: row[f"{variant}_{m}"] for m in ("acc_mean", "acc_std", "nmi_mean", "nmi_std")},
                    "iterations": row["iterations"],
                    "error": row["error"],
                }
            )
    table = pd.DataFrame(records)
    _write(spec, ABLATION_FILE, table, k)
    return table


def _write(spec: ExperimentSpec, name: str, table: pd.DataFrame, k: int):
    """Write an aggregate table with the experiment and solver headers."""
    os.makedirs(spec.out_dir, exist_ok=True)
    header = {**spec.header(), **spec.solver.header(), "k": k, "restarts": spec.restarts}
    write_table(os.path.join(spec.out_dir, name), table, header)


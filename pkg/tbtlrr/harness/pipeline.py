import logging
import os
import time
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
import pandas as pd

import tbtlrr.settings
from tbtlrr.cluster import (
    AffinityMatrix,
    ClusterResult,
    affinity_average,
    affinity_weighted,
    diag_ratio_weights,
    evaluate,
    spectral_clustering,
    write_labels,
)
from tbtlrr.common.errors import TbtlrrError
from tbtlrr.common.types import Labels, Tensor3
from tbtlrr.solver import SolverReport, solve
from tbtlrr.tensor import write_t3b

from .experiment import ExperimentSpec, load_data

logger = logging.getLogger(__name__)

RESULTS_FILE = "results.csv"
TRACE_FILE = "trace.csv"
RESTARTS_FILE = "restarts.csv"

# Affinity fusion variants, in the order they appear in result tables.
VARIANTS = ("average", "weighted")

RESULT_COLUMNS = [
    "variant",
    "lambda",
    "beta",
    "noise_type",
    "noise_level",
    "acc_mean",
    "acc_std",
    "nmi_mean",
    "nmi_std",
    "iterations",
    "converged",
    "runtime_seconds",
]


@dataclass(frozen=True, eq=False)
class PipelineResult:
    """Outputs of one end-to-end run."""

    table: pd.DataFrame
    report: SolverReport
    clusters: dict[str, ClusterResult]
    runtime_seconds: float


def write_table(path: str, table: pd.DataFrame, header: dict[str, Any]):
    """Write a table as CSV, preceded by `#` header lines.

    The schema version is always the first header line. The file appears
    atomically.

    Args:
        path - Destination file
        table - Rows to write
        header - Extra key/value pairs for the header
    """
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(f"# schema_version={tbtlrr.settings.RESULTS_SCHEMA_VERSION}\n")
        for key, value in header.items():
            fh.write(f"# {key}={value}\n")
        table.to_csv(fh, index=False, float_format="%.17g")
    os.replace(tmp, path)


def read_table(path: str) -> pd.DataFrame:
    """Read a table written by `write_table`, skipping the header."""
    return pd.read_csv(path, comment="#")


def affinities(z: Tensor3) -> dict[str, AffinityMatrix]:
    """Build every affinity variant from the coefficient tensor."""
    return {
        "average": affinity_average(z),
        "weighted": affinity_weighted(z, diag_ratio_weights(z)),
    }


def describe_noise(spec: ExperimentSpec) -> tuple[str, float]:
    """Summarize the noise already present in a plain run's data.

    Args:
        spec - Experiment spec

    Returns:
        (noise type, level). Mixed synthetic noise reports the sparse
        fraction; the Gaussian level is in the file header.
    """
    s = spec.synthetic
    if s is None:
        return ("none", 0.0)
    match s.sparse_fraction > 0, s.gaussian_level > 0:
        case True, True:
            return ("mixed", s.sparse_fraction)
        case True, False:
            return ("sparse", s.sparse_fraction)
        case False, True:
            return ("gaussian", s.gaussian_level)
        case _:
            return ("none", 0.0)


def run_on_data(
    x: Tensor3,
    truth: Labels,
    k: int,
    spec: ExperimentSpec,
    noise: tuple[str, float],
    out_dir: Optional[str] = None,
) -> PipelineResult:
    """Solve, cluster with every affinity variant, score, and write files.

    Args:
        x - Data tensor
        truth - True labels
        k - Number of clusters
        spec - Experiment spec (solver config, clustering params, outputs)
        noise - (noise type, level) recorded in the table
        out_dir - Output directory; defaults to `spec.out_dir`

    Returns:
        PipelineResult with one table row per affinity variant.
    """
    out_dir = out_dir or spec.out_dir
    os.makedirs(out_dir, exist_ok=True)
    cfg = spec.solver

    start = time.perf_counter()
    try:
        report = solve(x, cfg, trace_path=os.path.join(out_dir, TRACE_FILE))
    except TbtlrrError as e:
        e.add_note(f"Solver failed for the run in {out_dir}")
        raise

    clusters = dict[str, ClusterResult]()
    fused = affinities(report.z)
    for variant in VARIANTS:
        sc = spectral_clustering(fused[variant], k, spec.restarts, spec.seed)
        clusters[variant] = evaluate(sc, truth)
    runtime = time.perf_counter() - start
    logger.info("Run in %s finished in %.2fs", out_dir, runtime)

    rows = [
        {
            "variant": variant,
            "lambda": cfg.lam,
            "beta": cfg.beta,
            "noise_type": noise[0],
            "noise_level": noise[1],
            "acc_mean": c.acc_mean,
            "acc_std": c.acc_std,
            "nmi_mean": c.nmi_mean,
            "nmi_std": c.nmi_std,
            "iterations": report.iterations,
            "converged": report.converged,
            "runtime_seconds": runtime if spec.record_runtime else 0.0,
        }
        for variant, c in clusters.items()
    ]
    table = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    header = {**spec.header(), **cfg.header(), "k": k, "restarts": spec.restarts}
    write_table(os.path.join(out_dir, RESULTS_FILE), table, header)

    restarts = pd.DataFrame(
        [
            {"variant": variant, "restart": i, "acc": a, "nmi": n}
            for variant, c in clusters.items()
            for i, (a, n) in enumerate(zip(c.acc_runs, c.nmi_runs))
        ]
    )
    write_table(os.path.join(out_dir, RESTARTS_FILE), restarts, header)

    for variant, c in clusters.items():
        write_labels(os.path.join(out_dir, f"labels_{variant}.csv"), c.labels)

    if spec.dump_tensors:
        write_t3b(os.path.join(out_dir, "z.t3b"), report.z)
        write_t3b(os.path.join(out_dir, "e.t3b"), report.e)
        write_t3b(os.path.join(out_dir, "n.t3b"), report.n)
        for variant, w in fused.items():
            write_t3b(os.path.join(out_dir, f"affinity_{variant}.t3b"), w.w[:, :, np.newaxis])

    return PipelineResult(table=table, report=report, clusters=clusters, runtime_seconds=runtime)


def run_pipeline(spec: ExperimentSpec) -> PipelineResult:
    """Run the whole pipeline for one experiment.

    Loads or generates the data, solves for Z, fuses the affinities, runs
    spectral clustering and writes the results table, solver trace,
    per-restart scores and predicted labels to `spec.out_dir`.

    Args:
        spec - Experiment spec

    Returns:
        PipelineResult
    """
    x, truth, k = load_data(spec)
    return run_on_data(x, truth, k, spec, describe_noise(spec))

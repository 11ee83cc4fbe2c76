import functools
import logging
import os
from typing import Any, Callable, Optional

import click

import tbtlrr.settings
from tbtlrr.cluster import write_labels
from tbtlrr.common.errors import TbtlrrError
from tbtlrr.harness import (
    ExperimentSpec,
    NoiseType,
    SyntheticParams,
    ablation,
    concentration_table,
    generate_synthetic,
    grid_search,
    load_data,
    noise_sweep,
    run_pipeline,
    spectrum_table,
    write_table,
)
from tbtlrr.solver import SolverConfig, config_from_dict, load_config
from tbtlrr.tensor import TransformKind, write_t3b

logger = logging.getLogger(__name__)


def _float_list(ctx, param, value: Optional[str]) -> Optional[list[float]]:
    """Parse a comma-separated list of floats."""
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise click.BadParameter(f"Expected comma-separated numbers, got {value!r}") from e


def _handle_errors(f: Callable) -> Callable:
    """Turn library and file errors into one-line CLI failures."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (TbtlrrError, OSError, ValueError) as e:
            raise click.ClickException(str(e)) from e

    return wrapper


def _synthetic_options(f: Callable) -> Callable:
    """Options describing a synthetic data set."""
    options = [
        click.option("--subspaces", type=int, default=4, help="Number of subspaces"),
        click.option("--samples", type=int, default=20, help="Samples per subspace"),
        click.option("--n1", type=int, default=30, help="Tube rows"),
        click.option("--n3", type=int, default=4, help="Tube length"),
        click.option("--rank", type=int, default=3, help="Tubal rank per subspace"),
        click.option("--sparse", type=float, default=0.0, help="Sparse noise fraction"),
        click.option("--gaussian", type=float, default=0.0, help="Gaussian noise level"),
        click.option("--decay", type=float, default=1.0, help="Transform-domain decay"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _experiment_options(f: Callable) -> Callable:
    """Options shared by every command that runs the pipeline."""
    options = [
        click.option("--input", "input_path", type=str, help="Data tensor (T3B)"),
        click.option("--labels", "labels_path", type=str, help="True labels (CSV)"),
        click.option("--out", "-o", "out_dir", type=str, required=True, help="Output directory"),
        click.option("--config", "config_path", type=str, help="Solver config (TOML)"),
        click.option("--lambda", "lam", type=float, help="Sparse noise weight"),
        click.option("--beta", type=float, help="Gaussian noise weight"),
        click.option(
            "--transform",
            "transform_kind",
            type=click.Choice([k.value for k in TransformKind]),
            help="Tube transform",
        ),
        click.option("--dict", "dict_mode", type=str, help="self, ttsvd:R or trpca[:L]"),
        click.option("--max-iters", type=int, help="Solver iteration cap"),
        click.option("--k", type=int, help="Number of clusters"),
        click.option(
            "--restarts",
            type=int,
            default=tbtlrr.settings.DEFAULT_RESTARTS,
            help="k-means restarts",
        ),
        click.option("--seed", type=int, help="Random seed"),
        click.option("--no-runtime", is_flag=True, help="Write 0 as the runtime"),
        click.option("--dump", is_flag=True, help="Write Z, E, N and affinities"),
    ]
    for option in reversed(options):
        f = option(f)
    return _synthetic_options(f)


def _build_spec(opts: dict[str, Any], **extra) -> ExperimentSpec:
    """Assemble an ExperimentSpec from parsed CLI options.

    Solver values come from the config file, then CLI flags on top.
    """
    base = load_config(opts["config_path"]) if opts["config_path"] else SolverConfig()
    solver = config_from_dict(
        {
            "lam": opts["lam"],
            "beta": opts["beta"],
            "transform_kind": opts["transform_kind"],
            "dict_mode": opts["dict_mode"],
            "max_iters": opts["max_iters"],
            "seed": opts["seed"],
        },
        base,
    )
    seed = solver.seed
    synthetic = None
    if opts["input_path"] is None:
        synthetic = SyntheticParams(
            k_subspaces=opts["subspaces"],
            samples_per_cluster=opts["samples"],
            n1=opts["n1"],
            n3=opts["n3"],
            tubal_rank_per_subspace=opts["rank"],
            sparse_fraction=opts["sparse"],
            gaussian_level=opts["gaussian"],
            spectral_decay=opts["decay"],
            seed=seed,
        )
    return ExperimentSpec(
        out_dir=opts["out_dir"],
        input_path=opts["input_path"],
        labels_path=opts["labels_path"],
        synthetic=synthetic,
        solver=solver,
        k=opts["k"],
        restarts=opts["restarts"],
        seed=seed,
        record_runtime=not opts["no_runtime"],
        dump_tensors=opts["dump"],
        **extra,
    )


@click.group()
@click.option("--verbose", "-v", count=True, help="Log more (repeat for debug)")
def cli(verbose: int):
    """Subspace clustering with transformed bilateral tensor low-rank representation.

    Without --input, commands run on synthetic union-of-subspaces data.
    """
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")


@cli.command()
@_experiment_options
@_handle_errors
def cluster(**opts):
    """Solve, cluster and score one data set."""
    spec = _build_spec(opts)
    click.echo("Running pipeline ...", err=True)
    result = run_pipeline(spec)
    click.echo(result.table.to_string(index=False))
    click.echo(f"Results written to {spec.out_dir}", err=True)


@cli.command()
@_experiment_options
@click.option("--lambda-grid", callback=_float_list, help="Comma-separated lambda values")
@click.option("--beta-grid", callback=_float_list, help="Comma-separated beta values")
@click.option("--workers", "-j", type=int, default=1, help="Worker processes")
@_handle_errors
def grid(*, lambda_grid, beta_grid, workers: int, **opts):
    """Search lambda and beta on a grid."""
    spec = _build_spec(opts)
    result = grid_search(spec, lambda_grid, beta_grid, workers=workers)
    click.echo(result.table.head(10).to_string(index=False))
    click.echo(f"Best: lambda={result.best[0]!r} beta={result.best[1]!r}", err=True)


@cli.command()
@_experiment_options
@click.option(
    "--noise-type",
    type=click.Choice([n.value for n in NoiseType]),
    default=NoiseType.SPARSE.value,
    help="Kind of noise to inject",
)
@click.option("--levels", callback=_float_list, help="Comma-separated noise levels")
@click.option("--workers", "-j", type=int, default=1, help="Worker processes")
@_handle_errors
def sweep(*, noise_type: str, levels, workers: int, **opts):
    """Run the pipeline over increasing noise levels."""
    extra = {"noise_type": NoiseType(noise_type)}
    if levels is not None:
        extra["noise_levels"] = tuple(levels)
    spec = _build_spec(opts, **extra)
    table = noise_sweep(spec, workers=workers)
    click.echo(table.to_string(index=False))


@cli.command("ablation")
@_experiment_options
@click.option("--workers", "-j", type=int, default=1, help="Worker processes")
@_handle_errors
def ablation_cmd(*, workers: int, **opts):
    """Compare the model with and without each noise term."""
    spec = _build_spec(opts)
    table = ablation(spec, workers=workers)
    click.echo(table.to_string(index=False))


@cli.command()
@_synthetic_options
@click.option("--seed", type=int, default=0, help="Random seed")
@click.option("--out", "-o", "out_dir", type=str, required=True, help="Output directory")
@click.option("--raw", is_flag=True, help="Skip scaling to [0, 1]")
@_handle_errors
def synth(*, out_dir: str, seed: int, raw: bool, **opts):
    """Generate a synthetic data set as data.t3b and labels.csv."""
    p = SyntheticParams(
        k_subspaces=opts["subspaces"],
        samples_per_cluster=opts["samples"],
        n1=opts["n1"],
        n3=opts["n3"],
        tubal_rank_per_subspace=opts["rank"],
        sparse_fraction=opts["sparse"],
        gaussian_level=opts["gaussian"],
        spectral_decay=opts["decay"],
        seed=seed,
        normalize=not raw,
    )
    x, labels = generate_synthetic(p)
    os.makedirs(out_dir, exist_ok=True)
    write_t3b(os.path.join(out_dir, "data.t3b"), x)
    write_labels(os.path.join(out_dir, "labels.csv"), labels)
    click.echo(f"Wrote {x.shape[0]}x{x.shape[1]}x{x.shape[2]} tensor to {out_dir}", err=True)


@cli.command()
@_experiment_options
@click.option("--leading", type=int, help="Leading values to count; k * tubal rank by default")
@_handle_errors
def spectrum(*, leading: Optional[int], **opts):
    """Dump transform-domain singular values for every transform."""
    spec = _build_spec(opts)
    x, _, k = load_data(spec)
    if leading is None:
        rank = spec.synthetic.tubal_rank_per_subspace if spec.synthetic else 1
        leading = k * rank
    os.makedirs(spec.out_dir, exist_ok=True)
    header = spec.header()
    write_table(os.path.join(spec.out_dir, "spectrum.csv"), spectrum_table(x), header)
    summary = concentration_table(x, leading)
    write_table(os.path.join(spec.out_dir, "concentration.csv"), summary, header)
    click.echo(summary.to_string(index=False))


if __name__ == "__main__":
    cli()

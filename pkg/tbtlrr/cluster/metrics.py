from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import normalized_mutual_info_score

from tbtlrr.common.errors import DimensionError
from tbtlrr.common.types import Labels

from .spectral import SpectralResult


@dataclass(frozen=True, eq=False)
class ClusterResult:
    """Labels of the best restart plus ACC/NMI statistics over restarts."""

    labels: Labels
    acc: float
    nmi: float
    acc_mean: float
    acc_std: float
    nmi_mean: float
    nmi_std: float
    acc_min: float
    acc_max: float
    nmi_min: float
    nmi_max: float
    # Per-restart scores, for stability plots
    acc_runs: npt.NDArray[np.float64]
    nmi_runs: npt.NDArray[np.float64]


def _check_pair(pred: npt.ArrayLike, truth: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(pred).ravel()
    t = np.asarray(truth).ravel()
    if p.shape != t.shape:
        raise DimensionError(f"Label lengths differ: {p.size} and {t.size}")
    return p, t


def contingency(pred: npt.ArrayLike, truth: npt.ArrayLike) -> np.ndarray:
    """Count co-occurrences of predicted and true labels.

    Args:
        pred - Predicted labels
        truth - True labels

    Returns:
        Matrix whose (i, j) entry counts samples with the i-th distinct
        predicted label and the j-th distinct true label.
    """
    p, t = _check_pair(pred, truth)
    _, pi = np.unique(p, return_inverse=True)
    _, ti = np.unique(t, return_inverse=True)
    table = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(table, (pi, ti), 1)
    return table


def acc(pred: npt.ArrayLike, truth: npt.ArrayLike) -> float:
    """Clustering accuracy under the best one-to-one relabeling.

    The relabeling is found with the Hungarian algorithm on the contingency
    table.

    Args:
        pred - Predicted labels
        truth - True labels

    Returns:
        Fraction of samples whose mapped label matches, in [0, 1].
    """
    p, _ = _check_pair(pred, truth)
    if p.size == 0:
        raise ValueError("Can't score empty labelings")
    table = contingency(pred, truth)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / p.size)


def nmi(pred: npt.ArrayLike, truth: npt.ArrayLike) -> float:
    """Normalized mutual information, I / max(H(pred), H(truth)).

    Entropies use the natural log. Two single-cluster labelings score 1.

    Args:
        pred - Predicted labels
        truth - True labels

    Returns:
        NMI in [0, 1].
    """
    p, t = _check_pair(pred, truth)
    return float(normalized_mutual_info_score(t, p, average_method="max"))


def evaluate(result: SpectralResult, truth: npt.ArrayLike) -> ClusterResult:
    """Score every restart of a spectral clustering run.

    Args:
        result - Output of `spectral_clustering`
        truth - True labels

    Returns:
        ClusterResult with the best restart's scores and mean, std, min and
        max over all restarts.
    """
    accs = np.array([acc(lab, truth) for lab in result.restart_labels])
    nmis = np.array([nmi(lab, truth) for lab in result.restart_labels])
    return ClusterResult(
        labels=result.labels,
        acc=float(accs[result.best]),
        nmi=float(nmis[result.best]),
        acc_mean=float(accs.mean()),
        acc_std=float(accs.std()),
        nmi_mean=float(nmis.mean()),
        nmi_std=float(nmis.std()),
        acc_min=float(accs.min()),
        acc_max=float(accs.max()),
        nmi_min=float(nmis.min()),
        nmi_max=float(nmis.max()),
        acc_runs=accs,
        nmi_runs=nmis,
    )

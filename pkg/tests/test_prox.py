"""Test the tbtlrr/prox module against brute-force scalar minimization."""
import numpy as np
import pytest
import scipy.optimize
from numpy.testing import assert_allclose

from tbtlrr.common.errors import DimensionError
from tbtlrr.prox import (
    HalfThreshParams,
    frobenius_shrink,
    half_threshold,
    soft_threshold,
    svt_transform,
)
from tbtlrr.tensor import apply_transform, identity_transform, inverse_transform, learn_transform

rng = np.random.default_rng(11)


def test_half_threshold_examples():
    assert half_threshold(np.zeros((1, 1, 1)), 1.0).item() == 0.0
    assert half_threshold(np.full((1, 1, 1), 1.4), 1.0).item() == 0.0
    assert half_threshold(np.full((1, 1, 1), 1.5), 1.0).item() == 0.0
    assert_allclose(half_threshold(np.full((1, 1, 1), 1.6), 1.0).item(), 1.129, atol=1e-3)


def test_half_threshold_boundary_candidates_tie():
    # At |y| = tau the zero and the nonzero minimizer have the same objective.
    y, alpha = 1.5, 1.0
    nonzero = 1.0
    assert_allclose(half_objective(0.0, y, alpha), 1.125)
    assert_allclose(half_objective(nonzero, y, alpha), 1.125)


def test_half_threshold_tau():
    assert_allclose(HalfThreshParams(1.0).tau, 1.5)
    assert_allclose(HalfThreshParams(8.0).tau, 6.0)
    with pytest.raises(ValueError):
        HalfThreshParams(0.0)


def test_half_threshold_matches_oracle():
    n = 10_000
    y = rng.uniform(-5, 5, n)
    alpha = rng.uniform(0.01, 2, n)
    h = np.array([half_threshold(np.array([[[yi]]]), ai).item() for yi, ai in zip(y, alpha)])

    best = oracle_minimum(y, alpha)
    got = half_objective(h, y, alpha)
    assert np.all(got <= best + 1e-6), f"Worst gap {np.max(got - best)}"

    tau = 1.5 * alpha ** (2 / 3)
    assert np.array_equal(h == 0, np.abs(y) <= tau), "Zero exactly when |y| <= tau"

    nz = h != 0
    u = np.sqrt(np.abs(h[nz]))
    stationary = u**3 - np.abs(y[nz]) * u + alpha[nz] / 2
    assert_allclose(stationary, 0.0, atol=1e-9)


def test_half_threshold_is_odd_and_shrinks():
    y = rng.uniform(-5, 5, (4, 5, 3))
    h = half_threshold(y, 0.7)
    assert_allclose(half_threshold(-y, 0.7), -h)
    assert np.all(np.abs(h) <= np.abs(y))


def test_soft_threshold():
    assert soft_threshold(np.zeros((1, 1, 1)), 1.0).item() == 0.0
    assert soft_threshold(np.full((1, 1, 1), 3.0), 1.0).item() == 2.0

    y = rng.uniform(-3, 3, 200)
    s = soft_threshold(y.reshape(10, 20, 1), 0.8).ravel()
    grid = np.linspace(-6, 6, 120_001)
    for yi, si in zip(y[:20], s[:20]):
        f = 0.8 * np.abs(grid) + 0.5 * (grid - yi) ** 2
        assert 0.8 * abs(si) + 0.5 * (si - yi) ** 2 <= f.min() + 1e-9
    assert_allclose(soft_threshold(-y.reshape(10, 20, 1), 0.8).ravel(), -s)


def test_frobenius_shrink():
    c = rng.standard_normal((2, 3, 2))
    p = rng.standard_normal((2, 3, 2))
    assert_allclose(frobenius_shrink(c, p, 2.0, 0.0), c + p / 2.0)
    assert not np.any(frobenius_shrink(np.zeros((1, 1, 1)), np.zeros((1, 1, 1)), 1.0, 3.0))
    assert_allclose(frobenius_shrink(np.ones((1, 1, 1)), np.zeros((1, 1, 1)), 1.0, 0.5), 0.5)
    with pytest.raises(DimensionError):
        frobenius_shrink(np.zeros((1, 1, 1)), np.zeros((1, 2, 1)), 1.0, 1.0)


def test_svt_large_threshold_gives_zero():
    y = rng.standard_normal((4, 3, 2))
    assert not np.any(svt_transform(y, learn_transform(y), 1e6))


def test_svt_single_slice():
    y = np.diag([2.0, 0.5])[:, :, None]
    out = svt_transform(y, identity_transform(1), 1.0)
    assert_allclose(out[:, :, 0], np.diag([1.0, 0.0]), atol=1e-12)


def test_svt_matches_slicewise_matrix_svt():
    y = rng.standard_normal((6, 5, 3))
    t = learn_transform(y)
    y_bar = apply_transform(t, y)
    expected = np.zeros_like(y_bar)
    for k in range(3):
        u, s, vt = np.linalg.svd(y_bar[:, :, k], full_matrices=False)
        expected[:, :, k] = (u * np.maximum(s - 0.5, 0)) @ vt
    assert_allclose(svt_transform(y, t, 0.5), inverse_transform(t, expected), atol=1e-12)


def test_svt_minimizes_slice_nuclear_objective():
    y = rng.standard_normal((5, 4, 3))
    t = learn_transform(y)
    thresh = 0.4
    j = svt_transform(y, t, thresh)
    base = svt_objective(j, y, t, thresh)
    for _ in range(50):
        d = rng.standard_normal(y.shape) * 1e-3
        assert base <= svt_objective(j + d, y, t, thresh) + 1e-12


def half_objective(x, y, alpha):
    """Objective of the scalar l1/2 problem.

    Args:
        x - Candidate(s)
        y - Input(s)
        alpha - Weight(s)

    Returns:
        alpha * sqrt(|x|) + (x - y)^2 / 2
    """
    x = np.asarray(x, dtype=float)
    return alpha * np.sqrt(np.abs(x)) + 0.5 * (x - y) ** 2


def oracle_minimum(y: np.ndarray, alpha: np.ndarray, points: int = 4001) -> np.ndarray:
    """Brute-force minimum of the scalar l1/2 problem.

    A grid over [-2|y|, 2|y|] locates the best cell, then a bounded scalar
    search polishes the minimum inside the two cells around it. The grid has
    an odd number of points so it contains 0, where the objective has a kink.

    Args:
        y - Inputs
        alpha - Weights
        points - Grid size

    Returns:
        Minimum of the objective for every pair.
    """
    out = np.empty_like(y)
    steps = np.linspace(-2.0, 2.0, points)
    for lo in range(0, y.size, 500):
        yy, aa = y[lo : lo + 500, None], alpha[lo : lo + 500, None]
        grid = steps[None, :] * np.abs(yy)
        values = half_objective(grid, yy, aa)
        best = values.argmin(axis=1)
        for i, b in enumerate(best):
            yi, ai = yy[i, 0], aa[i, 0]
            res = scipy.optimize.minimize_scalar(
                lambda v: float(half_objective(v, yi, ai)),
                bounds=(grid[i, max(b - 1, 0)], grid[i, min(b + 1, points - 1)]),
                method="bounded",
                options={"xatol": 1e-12},
            )
            out[lo + i] = min(values[i, b], res.fun)
    return out


def svt_objective(j, y, t, thresh) -> float:
    """Sum of transform-domain nuclear norms plus the scaled distance to y.

    Args:
        j - Candidate
        y - Input
        t - Transform
        thresh - Threshold the candidate was computed with

    Returns:
        Objective value.
    """
    j_bar = apply_transform(t, j)
    nuc = sum(np.linalg.svd(j_bar[:, :, k], compute_uv=False).sum() for k in range(j.shape[2]))
    return nuc + np.linalg.norm(j - y) ** 2 / (2 * thresh)

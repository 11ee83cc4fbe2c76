"""Test the tbtlrr/tensor module: transforms, T-product, T-TSVD, norms and I/O."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from tbtlrr.common.errors import DegenerateInputError, DimensionError, FormatError
from tbtlrr.tensor import (
    OrthoTransform,
    TransformKind,
    apply_transform,
    as_tensor3,
    dct_transform,
    decode_t3b,
    encode_t3b,
    energy_concentration,
    identity_transform,
    inverse_transform,
    learn_transform,
    make_transform,
    norms,
    read_t3b,
    t_identity,
    t_product,
    t_transpose,
    t_tsvd,
    transform_spectrum,
    ttnn,
    unfold3,
    write_t3b,
)
from tbtlrr.tensor.core import from_slices, to_slices

rng = np.random.default_rng(7)

# Rotation by 90 degrees: T @ (1, 0) = (0, -1).
rot90 = OrthoTransform(np.array([[0.0, 1.0], [-1.0, 0.0]]), TransformKind.LEARNED)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
small_tensors = arrays(
    np.float64,
    st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 4)),
    elements=finite,
)


def test_identity_transform_leaves_tensor_unchanged():
    b = rng.standard_normal((3, 4, 5))
    t = identity_transform(5)
    assert_allclose(apply_transform(t, b), b, atol=0)
    assert_allclose(inverse_transform(t, b), b, atol=0)


def test_transform_of_zero_tubes_is_zero():
    t = learn_transform(rng.standard_normal((3, 3, 4)))
    out = apply_transform(t, np.zeros((2, 3, 4)))
    assert not np.any(out), "Linear map of zero must be zero"


def test_rotation_applies_to_every_tube():
    b = np.zeros((2, 3, 2))
    b[:, :, 0] = 1.0
    out = apply_transform(rot90, b)
    assert_allclose(out[:, :, 0], 0.0)
    assert_allclose(out[:, :, 1], -1.0)
    assert_allclose(inverse_transform(rot90, out), b, atol=1e-15)


def test_transform_round_trip():
    b = rng.standard_normal((4, 3, 5))
    t = learn_transform(b)
    back = inverse_transform(t, apply_transform(t, b))
    assert np.abs(back - b).max() <= 1e-12


def test_transform_rejects_wrong_tube_length():
    with pytest.raises(DimensionError):
        apply_transform(identity_transform(3), np.zeros((2, 2, 4)))


def test_non_orthogonal_transform_rejected():
    with pytest.raises(ValueError, match="not orthogonal"):
        OrthoTransform(np.array([[1.0, 1.0], [0.0, 1.0]]), TransformKind.LEARNED)


@settings(max_examples=50, deadline=None)
@given(small_tensors)
def test_round_trip_and_isometry_hold_for_any_tensor(b):
    for t in (dct_transform(b.shape[2]), rot90 if b.shape[2] == 2 else identity_transform(b.shape[2])):
        b_bar = apply_transform(t, b)
        scale = max(1.0, np.abs(b).max())
        assert np.abs(inverse_transform(t, b_bar) - b).max() <= 1e-12 * scale
        assert abs(np.linalg.norm(b_bar) - np.linalg.norm(b)) <= 1e-10 * scale


def test_dct_matches_scipy():
    import scipy.fft

    tube = rng.standard_normal(6)
    t = dct_transform(6)
    assert_allclose(t.matrix @ tube, scipy.fft.dct(tube, norm="ortho"), atol=1e-12)
    assert t.kind == TransformKind.DCT


def test_learn_transform_single_slice():
    t = learn_transform(rng.standard_normal((3, 2, 1)))
    assert_allclose(t.matrix, [[1.0]])


def test_learn_transform_identical_slices():
    r = 1 / np.sqrt(2)
    for _ in range(200):
        s = rng.standard_normal((3, 4))
        t = learn_transform(np.stack([s, s], axis=2))
        assert_allclose(t.matrix, [[r, r], [r, -r]], atol=1e-12)


def test_learn_transform_is_orthogonal_and_deterministic():
    x = rng.standard_normal((5, 6, 4))
    t = learn_transform(x)
    assert_allclose(t.matrix @ t.matrix.T, np.eye(4), atol=1e-10)
    assert_allclose(learn_transform(x.copy()).matrix, t.matrix, atol=0)
    lead = np.abs(t.matrix).argmax(axis=1)
    assert np.all(t.matrix[np.arange(4), lead] > 0), "Leading entries must be positive"


def test_learn_transform_zero_tensor():
    with pytest.raises(DegenerateInputError):
        learn_transform(np.zeros((2, 2, 3)))


def test_make_transform_kinds():
    x = rng.standard_normal((3, 3, 4))
    assert make_transform("identity", x).kind == TransformKind.IDENTITY
    assert make_transform(TransformKind.DCT, x).kind == TransformKind.DCT
    assert make_transform("learned", x).kind == TransformKind.LEARNED
    with pytest.raises(ValueError):
        make_transform("fft", x)


def test_t_product_with_identity():
    a = rng.standard_normal((3, 4, 5))
    t = learn_transform(a)
    assert_allclose(t_product(a, t_identity(4, 5, t), t), a, atol=1e-12)
    assert_allclose(t_product(t_identity(3, 5, t), a, t), a, atol=1e-12)


def test_t_product_single_slice_is_matrix_product():
    a = rng.standard_normal((3, 2, 1))
    b = rng.standard_normal((2, 4, 1))
    out = t_product(a, b, learn_transform(a))
    assert_allclose(out[:, :, 0], a[:, :, 0] @ b[:, :, 0], atol=1e-12)


def test_t_product_matches_slicewise_composition():
    a = rng.standard_normal((3, 2, 2))
    b = rng.standard_normal((2, 2, 2))
    t = learn_transform(a)
    a_bar, b_bar = apply_transform(t, a), apply_transform(t, b)
    expected = np.zeros((3, 2, 2))
    for k in range(2):
        expected[:, :, k] = a_bar[:, :, k] @ b_bar[:, :, k]
    assert_allclose(t_product(a, b, t), inverse_transform(t, expected), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.tuples(*[st.integers(1, 6)] * 4, st.integers(1, 5)), st.integers(0, 2**32 - 1))
def test_t_product_is_associative(shape, seed):
    n1, n2, n4, n5, n3 = shape
    g = np.random.default_rng(seed)
    a = g.standard_normal((n1, n2, n3))
    b = g.standard_normal((n2, n4, n3))
    c = g.standard_normal((n4, n5, n3))
    for t in (dct_transform(n3), learn_transform(a)):
        left = t_product(t_product(a, b, t), c, t)
        right = t_product(a, t_product(b, c, t), t)
        assert_allclose(left, right, atol=1e-10)


def test_t_product_dimension_mismatch():
    t = identity_transform(2)
    with pytest.raises(DimensionError):
        t_product(np.zeros((3, 4, 2)), np.zeros((3, 4, 2)), t)


def test_t_transpose():
    t = learn_transform(rng.standard_normal((4, 3, 3)))
    b = rng.standard_normal((4, 3, 3))
    assert t_transpose(b, t).shape == (3, 4, 3)
    assert_allclose(t_transpose(t_transpose(b, t), t), b, atol=1e-12)

    s = rng.standard_normal((3, 3, 2))
    sym = s + np.transpose(s, (1, 0, 2))
    assert_allclose(t_transpose(sym, identity_transform(2)), sym)

    bbt = apply_transform(t, t_product(b, t_transpose(b, t), t))
    for k in range(3):
        assert_allclose(bbt[:, :, k], bbt[:, :, k].T, atol=1e-12)


def test_t_identity():
    eye = t_identity(3, 3, identity_transform(3))
    for k in range(3):
        assert_allclose(eye[:, :, k], np.eye(3))

    t = learn_transform(rng.standard_normal((2, 2, 4)))
    i4 = t_identity(3, 4, t)
    assert_allclose(t_product(i4, t_transpose(i4, t), t), i4, atol=1e-12)
    b = rng.standard_normal((2, 3, 4))
    assert_allclose(t_product(b, i4, t), b, atol=1e-12)


def test_t_tsvd_f_diagonal_identity():
    b = np.zeros((3, 3, 2))
    for k in range(2):
        b[:, :, k] = np.diag([3.0 + k, 2.0, 1.0])
    f = t_tsvd(b, identity_transform(2))
    assert_allclose(np.abs(f.u), t_identity(3, 2, identity_transform(2)), atol=1e-12)
    assert_allclose(np.abs(f.v), t_identity(3, 2, identity_transform(2)), atol=1e-12)
    assert_allclose(f.s, b, atol=1e-12)


def test_t_tsvd_rank_one_slices():
    t = dct_transform(3)
    b_bar = np.stack(
        [np.outer(rng.standard_normal(4), rng.standard_normal(5)) for _ in range(3)], axis=2
    )
    b = inverse_transform(t, b_bar)
    f = t_tsvd(b, t, r=1)
    assert f.u.shape == (4, 1, 3)
    assert f.s.shape == (1, 1, 3)
    assert f.v.shape == (5, 1, 3)
    assert np.abs(f.reconstruct() - b).max() <= 1e-10


def test_t_tsvd_truncation_error_matches_discarded_mass():
    b = rng.standard_normal((6, 5, 3))
    t = learn_transform(b)
    full = t_tsvd(b, t)
    r = 2
    err = np.linalg.norm(t_tsvd(b, t, r=r).reconstruct() - b)
    expected = np.sqrt((full.sigma[:, r:] ** 2).sum())
    assert_allclose(err, expected, rtol=1e-10)


def test_t_tsvd_full_reconstruction_relative_error():
    b = rng.standard_normal((20, 20, 5))
    t = learn_transform(b)
    f = t_tsvd(b, t)
    assert np.linalg.norm(f.reconstruct() - b) <= 1e-10 * np.linalg.norm(b)
    assert np.all(np.diff(f.sigma, axis=1) <= 0), "Singular values must be nonincreasing"


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.integers(1, 20), st.integers(1, 20), st.integers(1, 5)), st.integers(0, 2**32 - 1))
def test_t_tsvd_factors_for_random_tensors(shape, seed):
    b = np.random.default_rng(seed).standard_normal(shape)
    for t in (learn_transform(b), dct_transform(shape[2])):
        f = t_tsvd(b, t)
        eye = t_identity(f.r, shape[2], t)
        assert_allclose(t_product(t_transpose(f.u, t), f.u, t), eye, atol=1e-8)
        assert_allclose(t_product(t_transpose(f.v, t), f.v, t), eye, atol=1e-8)
        assert np.linalg.norm(f.reconstruct() - b) <= 1e-10 * np.linalg.norm(b)

        s_bar = to_slices(apply_transform(t, f.s))
        diag = np.diagonal(s_bar, axis1=1, axis2=2)
        off = s_bar - np.stack([np.diag(d) for d in diag])
        scale = diag.max()
        assert np.abs(off).max() <= 1e-10 * scale, "S must be f-diagonal"
        assert np.all(diag >= -1e-10 * scale), "Singular values must be nonnegative"
        assert np.all(np.diff(diag, axis=1) <= 1e-10 * scale), "Singular values must be nonincreasing"


def test_t_tsvd_rank_out_of_range():
    with pytest.raises(ValueError):
        t_tsvd(np.ones((3, 2, 2)), identity_transform(2), r=3)


def test_truncated_factors():
    b = rng.standard_normal((4, 4, 2))
    f = t_tsvd(b, dct_transform(2))
    g = f.truncated(2)
    assert g.r == 2 and g.u.shape == (4, 2, 2) and g.sigma.shape == (2, 2)
    with pytest.raises(ValueError):
        g.truncated(3)


def test_ttnn():
    assert ttnn(np.zeros((3, 3, 2)), dct_transform(2)) == 0.0
    b = np.diag([3.0, 2.0])[:, :, None]
    assert_allclose(ttnn(b, identity_transform(1)), 5.0)

    b = rng.standard_normal((5, 4, 3))
    t = learn_transform(b)
    b_bar = apply_transform(t, b)
    expected = sum(np.linalg.svd(b_bar[:, :, k], compute_uv=False).sum() for k in range(3)) / 3
    assert_allclose(ttnn(b, t), expected, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.tuples(st.integers(1, 6), st.integers(1, 6), st.integers(1, 4)), st.integers(0, 2**32 - 1))
def test_ttnn_invariant_under_slicewise_rotations(shape, seed):
    n1, n2, n3 = shape
    g = np.random.default_rng(seed)
    b = g.standard_normal(shape)
    t = learn_transform(b)
    b_bar = to_slices(apply_transform(t, b))
    rotated = np.stack(
        [random_orthogonal(n1, g) @ piece @ random_orthogonal(n2, g) for piece in b_bar]
    )
    c = inverse_transform(t, from_slices(rotated))
    assert_allclose(ttnn(c, t), ttnn(b, t), rtol=1e-10)


def test_transform_spectrum_and_concentration():
    b = rng.standard_normal((4, 3, 2))
    t = dct_transform(2)
    sv = transform_spectrum(b, t)
    assert sv.shape == (2, 3)
    assert_allclose((sv**2).sum(), np.linalg.norm(b) ** 2, rtol=1e-12)
    assert_allclose(energy_concentration(b, t, leading=6), 1.0)
    assert 0 < energy_concentration(b, t, leading=1) < 1
    with pytest.raises(DegenerateInputError):
        energy_concentration(np.zeros((2, 2, 2)), t, leading=1)


def test_norms():
    assert norms(np.zeros((2, 2, 2))) == (0.0, 0.0, 0.0, 0.0)
    n = norms(np.full((1, 1, 1), 4.0))
    assert n == (4.0, 4.0, 4.0, 4.0)
    assert norms(np.array([1.0, -4.0]).reshape(1, 2, 1)).l_half == 9.0


def test_as_tensor3_validation():
    with pytest.raises(DimensionError):
        as_tensor3(np.zeros((2, 2)))
    with pytest.raises(DimensionError):
        as_tensor3(np.zeros((2, 0, 2)))
    with pytest.raises(ValueError):
        as_tensor3(np.full((1, 1, 1), np.nan))


def test_unfold_and_slices():
    b = np.arange(12, dtype=float).reshape(2, 3, 2, order="F")
    u = unfold3(b)
    assert u.shape == (2, 6)
    assert_allclose(u[1], b[:, :, 1].ravel(order="F"))
    assert_allclose(from_slices(to_slices(b)), b)


def test_t3b_round_trip(tmp_path):
    b = rng.standard_normal((3, 4, 2))
    path = str(tmp_path / "b.t3b")
    write_t3b(path, b)
    assert_allclose(read_t3b(path), b, atol=0)
    data = encode_t3b(b)
    assert data[:4] == b"T3B1"
    assert len(data) == 16 + 8 * b.size


def test_t3b_layout_is_column_major():
    b = np.arange(8, dtype=float).reshape(2, 2, 2, order="F")
    body = np.frombuffer(encode_t3b(b)[16:], dtype="<f8")
    assert_allclose(body, np.arange(8))


def test_t3b_rejects_bad_input():
    data = encode_t3b(np.ones((2, 2, 2)))
    with pytest.raises(FormatError):
        decode_t3b(b"XXXX" + data[4:])
    with pytest.raises(FormatError):
        decode_t3b(data[:-8])
    with pytest.raises(FormatError):
        decode_t3b(data + b"\0")
    with pytest.raises(FormatError):
        decode_t3b(data[:10])
    huge = b"T3B1" + np.array([2**32 - 1] * 3, dtype="<u4").tobytes() + bytes(8)
    expected = 16 + 8 * (2**32 - 1) ** 3
    with pytest.raises(FormatError, match=f"should be {expected} bytes"):
        decode_t3b(huge)


def random_orthogonal(n: int, g: np.random.Generator) -> np.ndarray:
    """Get a random n x n orthogonal matrix from the QR factors of a Gaussian one."""
    q, r = np.linalg.qr(g.standard_normal((n, n)))
    return q * np.sign(np.diag(r))

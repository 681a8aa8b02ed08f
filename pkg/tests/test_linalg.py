import numpy as np  # type: ignore
import pytest

import linalg


def reconstruct(svd: linalg.TriangularSVD) -> np.ndarray:
    return svd.u_cols @ np.diag(svd.sigmas) @ svd.v_cols.T


def test_single_entry():
    svd = linalg.triangular_svd(1)
    assert svd.sigmas == pytest.approx([1.0], abs=1e-14)
    np.testing.assert_allclose(reconstruct(svd), [[1.0]], atol=1e-14)


def test_golden_ratio():
    golden = (1 + np.sqrt(5)) / 2
    sigmas = linalg.triangular_svd(2).sigmas
    np.testing.assert_allclose(sigmas, [golden, 1 / golden], atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 17, 64, 100, 256])
def test_reconstruction_and_orthogonality(n):
    svd = linalg.triangular_svd(n)
    assert np.abs(reconstruct(svd) - linalg.ones_lower(n)).max() <= 1e-10 * n
    for q in svd.u_cols, svd.v_cols:
        assert np.abs(q.T @ q - np.eye(n)).max() <= 1e-12 * n


@pytest.mark.parametrize("n", [2, 7, 64, 256])
def test_sigmas_descending_and_positive(n):
    sigmas = linalg.triangular_svd(n).sigmas
    assert (sigmas > 0).all()
    assert (np.diff(sigmas) < 0).all()


@pytest.mark.parametrize("n", range(1, 9))
def test_sigmas_match_eigensolver(n):
    ones = linalg.ones_lower(n)
    eig = np.sqrt(np.linalg.eigvalsh(ones.T @ ones))[::-1]
    np.testing.assert_allclose(linalg.triangular_svd(n).sigmas, eig, atol=1e-10)


def test_ones_lower():
    np.testing.assert_array_equal(linalg.ones_lower(1), [[1]])
    np.testing.assert_array_equal(linalg.ones_lower(2), [[1, 0], [1, 1]])
    np.testing.assert_array_equal(linalg.ones_lower(3).sum(1), [1, 2, 3])


def test_ones_lower_inverse():
    for n in (1, 4, 9):
        np.testing.assert_allclose(
            linalg.ones_lower_inverse(n) @ linalg.ones_lower(n), np.eye(n), atol=1e-14
        )


@pytest.mark.parametrize("n", [0, -3, 2.5])
def test_rejects_bad_side(n):
    with pytest.raises(ValueError):
        linalg.triangular_svd(n)
    with pytest.raises(ValueError):
        linalg.ones_lower(n)


def test_pinv_identity():
    np.testing.assert_allclose(linalg.pinv_naive(np.eye(4)), np.eye(4), atol=1e-14)


def test_pinv_stacked_identity():
    k = 3
    stacked = np.concatenate([np.eye(k), np.eye(k)])
    expected = 0.5 * np.concatenate([np.eye(k), np.eye(k)], axis=1)
    np.testing.assert_allclose(linalg.pinv_naive(stacked), expected, atol=1e-14)


def test_pinv_dual_system():
    ones = linalg.ones_lower(2)
    mat = np.concatenate([np.kron(ones, ones), np.eye(4)])
    np.testing.assert_allclose(linalg.pinv_naive(mat) @ mat, np.eye(4), atol=1e-10)


def test_pinv_rank_deficient():
    mat = np.array([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    with pytest.raises(linalg.RankDeficientError):
        linalg.pinv_naive(mat)


def explicit_kron_pair(b, a, c):
    vec_c = c.ravel(order="F")
    out = np.kron(a.T, b) @ vec_c
    return out.reshape(b.shape[0], a.shape[1], order="F")


def test_kron_pair_identity(rng):
    c = rng.standard_normal((3, 3))
    np.testing.assert_allclose(linalg.apply_kron_pair(np.eye(3), np.eye(3), c), c)


def test_kron_pair_zero(rng):
    b, a = rng.standard_normal((2, 3)), rng.standard_normal((4, 2))
    assert not linalg.apply_kron_pair(b, a, np.zeros((3, 4))).any()


def test_kron_pair_matches_explicit(rng):
    for _ in range(50):
        p, q, r, s = rng.integers(1, 5, 4)
        b = rng.standard_normal((p, q)) + 1j * rng.standard_normal((p, q))
        c = rng.standard_normal((q, r)) + 1j * rng.standard_normal((q, r))
        a = rng.standard_normal((r, s))
        np.testing.assert_allclose(
            linalg.apply_kron_pair(b, a, c), explicit_kron_pair(b, a, c), atol=1e-12
        )


def test_kron_pair_mismatch():
    with pytest.raises(ValueError):
        linalg.apply_kron_pair(np.eye(2), np.eye(3), np.eye(3))

from typing import NamedTuple

import numpy as np  # type: ignore
from scipy import linalg as sla  # type: ignore


class RankDeficientError(np.linalg.LinAlgError):
    pass


class TriangularSVD(NamedTuple):
    """Closed-form factors of the n x n lower-triangular ones matrix.

    ``u_cols @ np.diag(sigmas) @ v_cols.T`` reconstructs ``ones_lower(n)``; the
    singular values are strictly decreasing in the column index.
    """

    n: int
    u_cols: np.ndarray
    v_cols: np.ndarray
    sigmas: np.ndarray


def _check_side(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"Matrix side must be a positive integer, got {n}.")


def ones_lower(n: int) -> np.ndarray:
    _check_side(n)
    return np.tril(np.ones((n, n)))


def ones_lower_inverse(n: int) -> np.ndarray:
    """Inverse of ``ones_lower(n)``: ones on the diagonal, -1 just below it."""
    _check_side(n)
    return np.eye(n) - np.eye(n, k=-1)


def triangular_svd(n: int) -> TriangularSVD:
    _check_side(n)
    half = n + 0.5
    t = np.arange(n).reshape(-1, 1)
    s = np.arange(n).reshape(1, -1)
    scale = 1 / np.sqrt(n / 2 + 0.25)
    u_cols = scale * np.sin((s + 0.5) * (t + 1) / half * np.pi)
    v_cols = scale * np.cos((s + 0.5) * (t + 0.5) / half * np.pi)
    sigmas = (2 - 2 * np.cos((np.arange(n) + 0.5) / half * np.pi)) ** -0.5
    return TriangularSVD(n, u_cols, v_cols, sigmas)


def pinv_naive(mat: np.ndarray) -> np.ndarray:
    """Pseudoinverse of a full-column-rank matrix via the normal equations.

    Only meant as a slow reference for small systems.
    """
    if mat.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got shape {mat.shape}.")
    gram = mat.conj().T @ mat
    try:
        factor = sla.cho_factor(gram, lower=True)
    except np.linalg.LinAlgError as e:
        raise RankDeficientError(
            f"Normal equations of a {mat.shape} matrix are not positive definite."
        ) from e
    return sla.cho_solve(factor, mat.conj().T)


def apply_kron_pair(b: np.ndarray, a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Evaluate ``(a.T kron b) vec(c)`` as ``b @ c @ a``.

    ``vec`` here is the column-stacking one; the result is returned as a matrix
    of shape ``(b.shape[0], a.shape[1])``.
    """
    if b.shape[1] != c.shape[0] or c.shape[1] != a.shape[0]:
        raise ValueError(
            f"Shapes {b.shape}, {c.shape}, {a.shape} are not conformable."
        )
    return b @ c @ a

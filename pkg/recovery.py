import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Tuple

import numpy as np  # type: ignore
from scipy import linalg as sla  # type: ignore

import linalg
import optics

DECONVOLUTION_METHODS = ("dual", "dual_naive", "block", "pinhole")
DEFAULT_ORACLE_CAP = 8


@dataclass
class RecoveryResult:
    x_hat: np.ndarray
    method: str
    wall_time: float
    info: Dict[str, Any] = field(default_factory=dict)


@lru_cache(maxsize=32)
def dual_weights(n: int) -> Tuple[linalg.TriangularSVD, np.ndarray, np.ndarray]:
    """SVD of the triangular ones matrix and the (r, s) scalings of both terms.

    ``weight_b = s_r s_s / (s_r^2 s_s^2 + 1)``, ``weight_p = 1 / (s_r^2 s_s^2 + 1)``.
    """
    svd = linalg.triangular_svd(n)
    outer = np.outer(svd.sigmas, svd.sigmas)
    denom = outer ** 2 + 1
    return svd, outer / denom, 1 / denom


def solve_dual(cb: np.ndarray, cp: np.ndarray) -> np.ndarray:
    """Least-squares X for ``[L kron L; I] vec(X) = [vec(cb); vec(cp)]``."""
    svd, weight_b, weight_p = dual_weights(cb.shape[0])
    u, v = svd.u_cols, svd.v_cols
    q = weight_b * (u.T @ cb @ u) + weight_p * (v.T @ cp @ v)
    return v @ q @ v.T


def dual_system(n: int) -> np.ndarray:
    ones = linalg.ones_lower(n)
    return np.concatenate([np.kron(ones, ones), np.eye(n * n)])


def recover_dual_fast(y: np.ndarray, n: int) -> RecoveryResult:
    start = time.perf_counter()
    a = optics.autocorrelation_from_data(y, n)
    cb, cp = optics.extract_cross_correlations(a, n)
    x_hat = solve_dual(cb, cp)
    return RecoveryResult(x_hat, "dual", time.perf_counter() - start)


def recover_dual_naive(
    y: np.ndarray, n: int, oracle_cap: int = DEFAULT_ORACLE_CAP
) -> RecoveryResult:
    if n > oracle_cap:
        raise ValueError(f"n={n} is above the naive oracle cap of {oracle_cap}.")
    start = time.perf_counter()
    a = optics.autocorrelation_from_data(y, n)
    cb, cp = optics.extract_cross_correlations(a, n)
    b = np.concatenate([cb.ravel(), cp.ravel()])
    x_hat = (linalg.pinv_naive(dual_system(n)) @ b).reshape(n, n)
    return RecoveryResult(x_hat, "dual_naive", time.perf_counter() - start)


def recover_single(y: np.ndarray, n: int, kind: str) -> RecoveryResult:
    """Single-reference deconvolution from ``[X, R]`` data.

    The pinhole system is the identity; the block one is ``L kron L`` and is
    undone with two triangular solves.
    """
    if kind not in ("block", "pinhole"):
        raise ValueError(f"Single-reference kind must be block or pinhole, got '{kind}'.")
    start = time.perf_counter()
    c = optics.reference_window(optics.autocorrelation_from_data(y, n), n)
    if kind == "pinhole":
        x_hat = c
    else:
        ones = linalg.ones_lower(n)
        left = sla.solve_triangular(ones, c, lower=True)
        x_hat = sla.solve_triangular(ones, left.T, lower=True).T
    return RecoveryResult(x_hat, kind, time.perf_counter() - start)


def recover(
    y: np.ndarray, n: int, method: str, oracle_cap: int = DEFAULT_ORACLE_CAP
) -> RecoveryResult:
    if method == "dual":
        return recover_dual_fast(y, n)
    elif method == "dual_naive":
        return recover_dual_naive(y, n, oracle_cap)
    elif method in ("block", "pinhole"):
        return recover_single(y, n, method)
    raise ValueError(f"Deconvolution method '{method}' not recognized.")


def method_kind(method: str) -> str:
    """Composite layout whose data a method consumes."""
    return {
        "dual": "dual",
        "dual_naive": "dual",
        "block": "block",
        "pinhole": "pinhole",
        "hio_a": "none",
        "hio_b": "block",
        "hio_c": "pinhole",
    }[method]


def build_T_columns(
    n: int,
    m: int,
    indices: Iterable[Tuple[int, int]],
    method: str = "dual",
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> np.ndarray:
    """Columns of the linear recovery operator, one per frequency ``(k1, k2)``.

    Column ``(k1, k2)`` is the recovery applied to the indicator data at that
    frequency, flattened row-major; the result has shape ``(n * n, len(indices))``.
    """
    if n > oracle_cap:
        raise ValueError(f"n={n} is above the explicit operator cap of {oracle_cap}.")
    if m < optics.min_detector_side(n):
        raise ValueError(f"m={m} is too small for n={n}; need m >= {4 * n - 1}.")
    columns: List[np.ndarray] = []
    for k1, k2 in indices:
        if not (0 <= k1 < m and 0 <= k2 < m):
            raise ValueError(f"Frequency index ({k1}, {k2}) out of range for m={m}.")
        e = np.zeros((m, m))
        e[k1, k2] = 1.0
        columns.append(recover(e, n, method, oracle_cap).x_hat.ravel())
    if not columns:
        return np.zeros((n * n, 0), dtype=np.complex128)
    return np.stack(columns, axis=1)

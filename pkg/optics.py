from typing import NamedTuple, Tuple

import numpy as np  # type: ignore

REFERENCE_KINDS = ("block", "pinhole", "dual", "none")


class Composite(NamedTuple):
    kind: str
    n: int
    values: np.ndarray


def check_specimen(x: np.ndarray) -> np.ndarray:
    """Validate an n x n specimen and return it as a complex array."""
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] < 1:
        raise ValueError(f"Specimen must be a non-empty square array, got {x.shape}.")
    if not np.all(np.isfinite(x)):
        raise ValueError("Specimen contains non-finite values.")
    if np.abs(x).max() > 1 + 1e-12:
        raise ValueError(
            f"Specimen magnitudes must lie in [0, 1], max is {np.abs(x).max():.4g}."
        )
    return x.astype(np.complex128)


def block_reference(n: int) -> np.ndarray:
    return np.ones((n, n))


def pinhole_reference(n: int) -> np.ndarray:
    r = np.zeros((n, n))
    r[n - 1, n - 1] = 1.0
    return r


def make_composite(x: np.ndarray, kind: str) -> Composite:
    x = check_specimen(x)
    n = x.shape[0]
    if kind == "dual":
        values = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        values[:n, :n] = x
        values[:n, n:] = block_reference(n)
        values[n:, :n] = pinhole_reference(n)
    elif kind == "block":
        values = np.concatenate([x, block_reference(n)], axis=1)
    elif kind == "pinhole":
        values = np.concatenate([x, pinhole_reference(n)], axis=1)
    elif kind == "none":
        values = x.copy()
    else:
        raise ValueError(f"Reference kind '{kind}' not recognized.")
    return Composite(kind, n, values.astype(np.complex128))


def min_detector_side(n: int) -> int:
    return 4 * n - 1


def diffract(c: Composite, m: int) -> np.ndarray:
    """Squared magnitudes of the m x m zero-padded DFT, DC at index (0, 0)."""
    if m < min_detector_side(c.n):
        raise ValueError(f"m={m} is too small for n={c.n}; need m >= {4 * c.n - 1}.")
    spectrum = np.fft.fft2(c.values, s=(m, m))
    return np.abs(spectrum) ** 2


def lag_indices(n: int) -> np.ndarray:
    return np.arange(-(2 * n - 1), 2 * n)


def autocorrelation_from_data(y: np.ndarray, n: int) -> np.ndarray:
    """Invert the diffraction data to the (4n-1) x (4n-1) autocorrelation.

    Lag ``s`` is stored at index ``s + 2n - 1``.
    """
    if y.ndim != 2 or y.shape[0] != y.shape[1]:
        raise ValueError(f"Diffraction data must be square, got {y.shape}.")
    m = y.shape[0]
    if m < min_detector_side(n):
        raise ValueError(f"m={m} is too small for n={n}; need m >= {4 * n - 1}.")
    full = np.fft.ifft2(y)
    idx = lag_indices(n) % m
    return full[np.ix_(idx, idx)]


def _check_lags(a: np.ndarray, n: int) -> None:
    side = 4 * n - 1
    if a.shape != (side, side):
        raise ValueError(f"Expected a {side} x {side} lag array, got {a.shape}.")


def extract_cross_correlations(a: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Block and pinhole cross-correlation windows of a dual autocorrelation.

    Noiseless, ``cb == L @ X @ L.T`` with ``L = ones_lower(n)`` and ``cp == X``.
    """
    _check_lags(a, n)
    cb = a[n : 2 * n, :n]
    cp = a[:n, n : 2 * n]
    return cb.copy(), cp.copy()


def reference_window(a: np.ndarray, n: int) -> np.ndarray:
    """Cross-correlation window of a single-reference ``[X, R]`` autocorrelation."""
    _check_lags(a, n)
    return a[n : 2 * n, :n].copy()


def direct_autocorrelation(values: np.ndarray, n: int) -> np.ndarray:
    """sum_t c(t) conj(c(t - s)) over the lag window, by direct summation."""
    lags = lag_indices(n)
    rows, cols = values.shape
    out = np.zeros((len(lags), len(lags)), dtype=np.complex128)
    for i, s1 in enumerate(lags):
        for j, s2 in enumerate(lags):
            r_lo, r_hi = max(0, s1), min(rows, rows + s1)
            c_lo, c_hi = max(0, s2), min(cols, cols + s2)
            if r_lo >= r_hi or c_lo >= c_hi:
                continue
            shifted = values[r_lo - s1 : r_hi - s1, c_lo - s2 : c_hi - s2]
            out[i, j] = (values[r_lo:r_hi, c_lo:c_hi] * shifted.conj()).sum()
    return out


def check_sampling_condition(delta: float, lam: float, z: float, bandwidth: float) -> bool:
    """Whether detector pitch ``delta`` avoids aliasing: delta / (lam z) <= 1 / (2B)."""
    if min(delta, lam, z, bandwidth) <= 0:
        raise ValueError("Sampling parameters must all be positive.")
    return delta * 2 * bandwidth <= lam * z

"""Expected recovery error under shot noise and the per-frequency weight maps.

A weight map ``S`` holds, for each detector frequency ``(k1, k2)``, the squared
norm of the recovery operator's column at that frequency. Under the Poisson
model the expected squared error is ``(|Y|_1 / N_p) <S, Y>``.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np  # type: ignore

import linalg
import noise
import optics
import recovery

logger = logging.getLogger(__name__)

WEIGHT_MAP_KINDS = ("block", "pinhole", "dual")


@dataclass
class WeightMap:
    kind: str
    n: int
    m: int
    s: np.ndarray
    stride: int = 1


@dataclass
class ErrorReport:
    expected_mse: float
    empirical_mse: Optional[float] = None
    expected_relative: Optional[float] = None
    empirical_relative: Optional[float] = None
    empirical_stderr: Optional[float] = None
    n_trials: int = 0


@dataclass
class WeightMapComparison:
    maps: Dict[str, WeightMap]
    ratio: np.ndarray
    cross_sections: Dict[str, np.ndarray]
    median_ratio: float
    ratio_quantiles: Dict[float, float]
    integrated: Dict[str, float]


def lag_dft(lags: np.ndarray, m: int, freqs: np.ndarray) -> np.ndarray:
    """Rows of ``F^*`` for the given lags: ``exp(2 pi i k t / m)``."""
    return np.exp(2j * np.pi * np.outer(lags, freqs) / m)


def window_dfts(n: int, m: int, freqs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """The two lag windows composed with the inverse DFT.

    The first covers lags ``-(n-1)..0``, the second ``-(2n-1)..-n``.
    """
    near = lag_dft(np.arange(-(n - 1), 1), m, freqs)
    far = lag_dft(np.arange(-(2 * n - 1), -n + 1), m, freqs)
    return near, far


def _check_sizes(n: int, m: int, kind: str) -> None:
    if kind not in WEIGHT_MAP_KINDS:
        raise ValueError(f"Weight map kind '{kind}' not recognized.")
    if m < optics.min_detector_side(n):
        raise ValueError(f"m={m} is too small for n={n}; need m >= {4 * n - 1}.")


def weight_map_closed_form(n: int, m: int, kind: str, stride: int = 1) -> WeightMap:
    _check_sizes(n, m, kind)
    freqs = np.arange(0, m, stride)
    near, far = window_dfts(n, m, freqs)
    if kind == "dual":
        svd, weight_b, weight_p = recovery.dual_weights(n)
        u, v = svd.u_cols, svd.v_cols
        u_near, u_far = u.T @ near, u.T @ far
        v_near, v_far = v.T @ near, v.T @ far
        # |w_b a(r,k1) b(s,k2) + w_p c(r,k1) d(s,k2)|^2 summed over (r, s)
        block_term = np.abs(u_near).T ** 2 @ weight_b ** 2 @ np.abs(u_far) ** 2
        pinhole_term = np.abs(v_far).T ** 2 @ weight_p ** 2 @ np.abs(v_near) ** 2
        cross = (u_near * v_far.conj()).T @ (weight_b * weight_p) @ (
            u_far * v_near.conj()
        )
        s = block_term + pinhole_term + 2 * cross.real
    else:
        if kind == "block":
            inv = linalg.ones_lower_inverse(n)
            near, far = inv @ near, inv @ far
        s = np.outer(
            (np.abs(near) ** 2).sum(0),
            (np.abs(far) ** 2).sum(0),
        )
    s = np.maximum(s, 0) / float(m) ** 4
    return WeightMap(kind, n, m, s, stride)


def weight_map_direct(n: int, m: int, kind: str, oracle_cap: int = 8) -> WeightMap:
    """``reshape(diag(T^* T), m, m)`` from explicit operator columns."""
    _check_sizes(n, m, kind)
    indices = [(k1, k2) for k1 in range(m) for k2 in range(m)]
    t = recovery.build_T_columns(n, m, indices, kind, oracle_cap=oracle_cap)
    s = (np.abs(t) ** 2).sum(0).reshape(m, m)
    return WeightMap(kind, n, m, s)


@lru_cache(maxsize=16)
def cached_weight_map(n: int, m: int, kind: str) -> WeightMap:
    logger.info(f"Computing {kind} weight map for n={n}, m={m}")
    return weight_map_closed_form(n, m, kind)


def expected_error(
    s: WeightMap, y: np.ndarray, n_photons: float, x: Optional[np.ndarray] = None
) -> ErrorReport:
    if s.s.shape != y.shape:
        raise ValueError(f"Weight map {s.s.shape} and data {y.shape} differ in shape.")
    if n_photons <= 0:
        raise ValueError(f"n_photons must be positive, got {n_photons}.")
    mse = float(y.sum() / n_photons * (s.s * y).sum())
    relative = None
    if x is not None:
        relative = mse / float((np.abs(x) ** 2).sum())
    return ErrorReport(expected_mse=mse, expected_relative=relative)


def monte_carlo_error(
    x: np.ndarray,
    kind: str,
    m: int,
    n_photons: float,
    n_trials: int,
    seed: int = 0,
) -> ErrorReport:
    """Expected error together with the empirical mean over seeded noisy trials."""
    n = x.shape[0]
    y = optics.diffract(optics.make_composite(x, kind), m)
    report = expected_error(cached_weight_map(n, m, kind), y, n_photons, x)
    sq_errors = np.empty(n_trials)
    for trial in range(n_trials):
        y_noisy = noise.corrupt(y, noise.PoissonConfig(n_photons, seed + trial))
        x_hat = recovery.recover(y_noisy, n, kind).x_hat
        sq_errors[trial] = (np.abs(x_hat - x) ** 2).sum()
    norm = float((np.abs(x) ** 2).sum())
    report.empirical_mse = float(sq_errors.mean())
    report.empirical_relative = report.empirical_mse / norm
    if n_trials > 1:
        report.empirical_stderr = float(sq_errors.std(ddof=1) / np.sqrt(n_trials))
    else:
        report.empirical_stderr = 0.0
    report.n_trials = n_trials
    return report


def border_cross_sections(s: np.ndarray) -> np.ndarray:
    """Top, bottom, left and right borders of a map as the columns of an array."""
    return np.stack([s[0, :], s[-1, :], s[:, 0], s[:, -1]], axis=1)


def compare_weight_maps(n: int, m: int, stride: int = 1) -> WeightMapComparison:
    maps = {kind: weight_map_closed_form(n, m, kind, stride) for kind in WEIGHT_MAP_KINDS}
    best_single = np.minimum(maps["block"].s, maps["pinhole"].s)
    ratio = maps["dual"].s / best_single
    quantiles = {q: float(np.quantile(ratio, q)) for q in (0.05, 0.5, 0.95)}
    logger.info(
        f"dual / min(block, pinhole): median {quantiles[0.5]:.3g}, "
        f"5% {quantiles[0.05]:.3g}, 95% {quantiles[0.95]:.3g}"
    )
    return WeightMapComparison(
        maps=maps,
        ratio=ratio,
        cross_sections={k: border_cross_sections(wm.s) for k, wm in maps.items()},
        median_ratio=quantiles[0.5],
        ratio_quantiles=quantiles,
        integrated={k: float(wm.s.sum()) for k, wm in maps.items()},
    )

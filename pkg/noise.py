from typing import NamedTuple, Tuple

import numpy as np  # type: ignore
from scipy import stats  # type: ignore


class PoissonConfig(NamedTuple):
    n_photons: float
    seed: int = 0


def entry_uniforms(seed: int, shape: Tuple[int, ...]) -> np.ndarray:
    """Uniforms in [0, 1) from a counter-based stream keyed by ``seed``.

    Entry ``(k1, k2)`` always takes draw ``k1 * m + k2``, whatever the data is.
    """
    gen = np.random.Generator(np.random.Philox(key=seed))
    return gen.random(int(np.prod(shape))).reshape(shape)


def corrupt(y: np.ndarray, cfg: PoissonConfig) -> np.ndarray:
    """Draw ``(|y|_1 / N_p) * Pois((N_p / |y|_1) * y)`` entrywise.

    Counts come from inverting the Poisson CDF at a per-entry uniform, so an
    entry's draw depends only on ``(seed, k1, k2)`` and its own rate.
    """
    if cfg.n_photons <= 0:
        raise ValueError(f"n_photons must be positive, got {cfg.n_photons}.")
    if cfg.seed < 0:
        raise ValueError(f"Seed must be a nonnegative integer, got {cfg.seed}.")
    y = np.asarray(y, dtype=np.float64)
    if (y < 0).any():
        raise ValueError("Diffraction data must be nonnegative.")
    total = y.sum()
    if total == 0:
        return y.copy()
    rate = y * (cfg.n_photons / total)
    u = entry_uniforms(cfg.seed, y.shape)
    counts = np.zeros_like(y)
    lit = rate > 0
    # ppf(0, mu) is -1
    counts[lit] = np.maximum(stats.poisson.ppf(u[lit], rate[lit]), 0)
    return counts * (total / cfg.n_photons)


def noise_variance(y: np.ndarray, n_photons: float) -> np.ndarray:
    """Per-entry variance of ``corrupt(y, ...)``."""
    return y * (y.sum() / n_photons)

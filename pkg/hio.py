"""Hybrid input-output baselines with and without a known reference."""
import logging
import time
import warnings
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np  # type: ignore
from joblib import Parallel, delayed  # type: ignore

import optics
from recovery import RecoveryResult

logger = logging.getLogger(__name__)


@dataclass
class HioConfig:
    n: int
    support_mask: np.ndarray
    known_mask: Optional[np.ndarray] = None
    known_values: Optional[np.ndarray] = None
    beta: float = 0.9
    n_iters: int = 2000
    n_restarts: int = 5
    er_iters: int = 50
    seed: int = 0
    init: Optional[np.ndarray] = None
    n_jobs: int = 1
    # False leaves the reference free during iterations; it then only fixes the
    # twin and global phase of the result
    enforce_known: bool = True

    def __post_init__(self) -> None:
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}.")
        if self.n_iters < 1 or self.n_restarts < 1:
            raise ValueError("n_iters and n_restarts must be at least 1.")
        if (self.known_mask is None) != (self.known_values is None):
            raise ValueError("known_mask and known_values go together.")


def hio_config_for(kind: str, n: int, enforce_reference: bool = True, **kwargs) -> HioConfig:
    """Support and known reference pixels for a composite layout."""
    layout = optics.make_composite(np.zeros((n, n)), kind)
    support = np.ones(layout.values.shape, dtype=bool)
    known = np.zeros(layout.values.shape, dtype=bool)
    known[:n, n:] = True
    known[n:, :] = True
    if kind == "none":
        return HioConfig(n, support, **kwargs)
    return HioConfig(
        n, support, known, layout.values.copy(), enforce_known=enforce_reference, **kwargs
    )


def _to_plane(values: np.ndarray, m: int, fill=0) -> np.ndarray:
    plane = np.full((m, m), fill, dtype=values.dtype)
    plane[: values.shape[0], : values.shape[1]] = values
    return plane


def project_modulus(z: np.ndarray, amp: np.ndarray) -> Tuple[np.ndarray, float]:
    """Replace the Fourier modulus of ``z`` by ``amp``, keeping its phase.

    Also returns the relative modulus residual of the input.
    """
    spectrum = np.fft.fft2(z)
    modulus = np.abs(spectrum)
    phase = np.where(modulus > 0, spectrum / np.where(modulus > 0, modulus, 1), 1)
    amp_norm = np.linalg.norm(amp)
    residual = np.linalg.norm(modulus - amp) / amp_norm if amp_norm > 0 else 0.0
    return np.fft.ifft2(amp * phase), float(residual)


def _run_restart(
    restart: int,
    amp: np.ndarray,
    cfg: HioConfig,
    support: np.ndarray,
    known: Optional[np.ndarray],
    known_values: Optional[np.ndarray],
    callback: Optional[Callable[[int, float], None]],
) -> Tuple[np.ndarray, float]:
    m = amp.shape[0]
    rng = np.random.default_rng([cfg.seed, restart])
    if cfg.init is not None:
        z = _to_plane(np.asarray(cfg.init, dtype=np.complex128), m)
    else:
        z = np.fft.ifft2(amp * np.exp(2j * np.pi * rng.random((m, m))))
        z = np.where(support, z, 0)
    if known is not None:
        z[known] = known_values[known]
    for it in range(cfg.n_iters):
        projected, residual = project_modulus(z, amp)
        if it >= cfg.n_iters - cfg.er_iters:
            z = np.where(support, projected, 0)
        else:
            z = np.where(support, projected, z - cfg.beta * projected)
        if known is not None:
            z[known] = known_values[known]
        if callback is not None:
            callback(it, residual)
    z = np.where(support, z, 0)
    return z, project_modulus(z, amp)[1]


def recover_hio(
    y_noisy: np.ndarray,
    cfg: HioConfig,
    callback: Optional[Callable[[int, float], None]] = None,
) -> RecoveryResult:
    start = time.perf_counter()
    m = y_noisy.shape[0]
    negative = int((y_noisy < 0).sum())
    if negative:
        warnings.warn(f"Clamped {negative} negative diffraction entries to 0.")
    amp = np.sqrt(np.maximum(y_noisy, 0))
    support = _to_plane(cfg.support_mask, m, fill=False)
    known = known_values = None
    if cfg.known_mask is not None:
        known = _to_plane(cfg.known_mask, m, fill=False)
        known_values = _to_plane(np.asarray(cfg.known_values, dtype=np.complex128), m)

    def restart_job(restart: int) -> Tuple[np.ndarray, float]:
        if hasattr(callback, "new_restart") and cfg.n_jobs == 1:
            callback.new_restart(restart)  # type: ignore
        if not cfg.enforce_known:
            return _run_restart(restart, amp, cfg, support, None, None, callback)
        return _run_restart(restart, amp, cfg, support, known, known_values, callback)

    runs: List[Tuple[np.ndarray, float]] = Parallel(n_jobs=cfg.n_jobs, prefer="threads")(
        delayed(restart_job)(r) for r in range(cfg.n_restarts)
    )
    residuals = [r for _, r in runs]
    best = int(np.argmin(residuals))
    plane = runs[best][0]
    if known is not None and not cfg.enforce_known:
        plane = align_to_reference(plane, cfg.known_mask, cfg.known_values)
    logger.debug(f"HIO restarts residuals {residuals}, keeping {best}")
    return RecoveryResult(
        plane[: cfg.n, : cfg.n].copy(),
        "hio",
        time.perf_counter() - start,
        {"plane": plane, "residual": residuals[best], "clamped": negative},
    )


def flip_conjugate(plane: np.ndarray) -> np.ndarray:
    """The twin ``conj(z(-t))`` on the circular grid."""
    return np.conj(np.roll(np.flip(plane, (0, 1)), 1, axis=(0, 1)))


def align_to_reference(
    plane: np.ndarray, known_mask: np.ndarray, known_values: np.ndarray
) -> np.ndarray:
    """Pick the twin and global phase under which the reference region matches.

    The twin of a solution supported on the composite rectangle is
    ``conj(z(s - t))`` with ``s`` its far corner. Only reference pixels are
    consulted, so this is usable outside of testing.
    """
    rows, cols = known_mask.shape
    twin = np.roll(flip_conjugate(plane), (rows - 1, cols - 1), axis=(0, 1))
    reference = np.asarray(known_values)[known_mask]
    best, best_err = plane, np.inf
    for candidate in (plane, twin):
        region = candidate[:rows, :cols][known_mask]
        overlap = (reference * region.conj()).sum()
        if abs(overlap) > 0:
            candidate = candidate * (overlap / abs(overlap))
        err = float((np.abs(candidate[:rows, :cols][known_mask] - reference) ** 2).sum())
        if err < best_err:
            best, best_err = candidate, err
    return best


def register(plane: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Align an estimate with ``x`` over flips, circular shifts and global phase.

    Only used for error reporting of the reference-free baseline, where those
    ambiguities are not fixed by the data.
    """
    m = plane.shape[0]
    n = x.shape[0]
    target = _to_plane(x.astype(np.complex128), m)
    target_ft = np.fft.fft2(target)
    best, best_err = plane[:n, :n], np.inf
    for candidate in (plane, flip_conjugate(plane)):
        corr = np.fft.ifft2(target_ft * np.conj(np.fft.fft2(candidate)))
        shift = np.unravel_index(np.argmax(np.abs(corr)), corr.shape)
        peak = corr[shift]
        aligned = np.roll(candidate, shift, axis=(0, 1))
        if abs(peak) > 0:
            aligned = aligned * (peak / abs(peak))
        estimate = aligned[:n, :n]
        err = float((np.abs(estimate - x) ** 2).sum())
        if err < best_err:
            best, best_err = estimate, err
    return best.copy()

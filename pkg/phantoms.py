"""Synthetic specimens with low-frequency-dominant spectra.

No specimen images ship with the repository, so experiments default to these.
Every phantom is real, lies in [0, 1] and is deterministic in
``(name, n)``.
"""
from typing import Callable, Dict

import numpy as np  # type: ignore
from scipy import ndimage  # type: ignore


def _grid(n: int):
    t = (np.arange(n) + 0.5) / n
    return np.meshgrid(t, t, indexing="ij")


def _normalize(img: np.ndarray) -> np.ndarray:
    img = img - img.min()
    peak = img.max()
    # A flat image normalizes to all ones
    return img / peak if peak > 0 else np.ones_like(img)


def _blobs(n: int, rng: np.random.Generator) -> np.ndarray:
    rows, cols = _grid(n)
    img = np.zeros((n, n))
    for _ in range(6):
        c1, c2 = rng.uniform(0.2, 0.8, 2)
        width = rng.uniform(0.06, 0.18)
        img += rng.uniform(0.4, 1.0) * np.exp(
            -((rows - c1) ** 2 + (cols - c2) ** 2) / (2 * width ** 2)
        )
    return _normalize(img)


def _ellipse(rows, cols, c1, c2, a, b, angle) -> np.ndarray:
    dr, dc = rows - c1, cols - c2
    ca, sa = np.cos(angle), np.sin(angle)
    return ((ca * dr + sa * dc) / a) ** 2 + ((-sa * dr + ca * dc) / b) ** 2 <= 1


def _cells(n: int, rng: np.random.Generator) -> np.ndarray:
    rows, cols = _grid(n)
    img = np.zeros((n, n))
    for _ in range(5):
        c1, c2 = rng.uniform(0.25, 0.75, 2)
        a, b = rng.uniform(0.08, 0.2, 2)
        angle = rng.uniform(0, np.pi)
        img += 0.5 * _ellipse(rows, cols, c1, c2, a, b, angle)
        img += 0.3 * _ellipse(rows, cols, c1, c2, a / 3, b / 3, angle)
    return _normalize(ndimage.gaussian_filter(img, sigma=n / 32))


def _vesicle(n: int, rng: np.random.Generator) -> np.ndarray:
    rows, cols = _grid(n)
    radius = np.hypot(rows - 0.5, cols - 0.5)
    shell = np.exp(-((radius - 0.3) ** 2) / (2 * 0.04 ** 2))
    core = 0.6 * (radius < 0.22)
    img = shell + core * (1 + 0.2 * rng.standard_normal((n, n)))
    return _normalize(ndimage.gaussian_filter(img, sigma=n / 48))


def _colony(n: int, rng: np.random.Generator) -> np.ndarray:
    rows, cols = _grid(n)
    img = np.zeros((n, n))
    for _ in range(12):
        c1, c2 = rng.uniform(0.15, 0.85, 2)
        a = rng.uniform(0.03, 0.06)
        b = a * rng.uniform(1.5, 3.0)
        img += _ellipse(rows, cols, c1, c2, a, b, rng.uniform(0, np.pi))
    return _normalize(ndimage.gaussian_filter(np.minimum(img, 1.0), sigma=n / 40))


def _rings(n: int, rng: np.random.Generator) -> np.ndarray:
    rows, cols = _grid(n)
    radius = np.hypot(rows - 0.5, cols - 0.5)
    angle = np.arctan2(rows - 0.5, cols - 0.5)
    img = np.exp(-((radius - 0.28) ** 2) / (2 * 0.06 ** 2))
    img *= 1 + 0.3 * np.cos(angle - rng.uniform(0, 2 * np.pi))
    return _normalize(ndimage.gaussian_filter(img, sigma=n / 24))


PHANTOMS: Dict[str, Callable[[int, np.random.Generator], np.ndarray]] = {
    "blobs": _blobs,
    "cells": _cells,
    "vesicle": _vesicle,
    "colony": _colony,
    "rings": _rings,
}


def make_phantom(name: str, n: int) -> np.ndarray:
    if name not in PHANTOMS:
        raise ValueError(f"Phantom '{name}' not recognized; choose from {sorted(PHANTOMS)}.")
    seed = sorted(PHANTOMS).index(name)
    return PHANTOMS[name](n, np.random.default_rng(seed))

import hashlib
from pathlib import Path
from typing import Tuple, Union

import numpy as np  # type: ignore
import pandas as pd  # type: ignore
from PIL import Image  # type: ignore

import phantoms

PathLike = Union[str, Path]


def derive_seed(master_seed: int, *keys) -> int:
    """Stable 63-bit seed from a master seed and any printable keys."""
    text = "/".join(str(k) for k in (master_seed, *keys))
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big") >> 1


def relative_error(x_hat: np.ndarray, x: np.ndarray) -> float:
    return float((np.abs(x_hat - x) ** 2).sum() / (np.abs(x) ** 2).sum())


def box_downsample(img: np.ndarray, n: int) -> np.ndarray:
    rows, cols = img.shape
    if rows == n and cols == n:
        return img.astype(np.float64)
    if rows % n == 0 and cols % n == 0:
        return img.reshape(n, rows // n, n, cols // n).mean(axis=(1, 3))
    resized = Image.fromarray(img.astype(np.float32)).resize(
        (n, n), resample=Image.Resampling.BOX
    )
    return np.asarray(resized, dtype=np.float64)


def read_pgm(path: PathLike) -> np.ndarray:
    with Image.open(path) as img:
        if img.format != "PPM":
            raise ValueError(f"Unsupported image format '{img.format}' for {path}.")
        if img.mode != "L":
            raise ValueError(f"{path} is not an 8-bit grayscale PGM (mode {img.mode}).")
        return np.asarray(img, dtype=np.float64) / 255.0


def read_matrix_csv(path: PathLike) -> np.ndarray:
    return pd.read_csv(path, header=None).to_numpy(dtype=np.float64)


def ingest_image(path: PathLike, n: int) -> np.ndarray:
    """Load a specimen as an n x n complex array with magnitudes in [0, 1].

    Accepts ``phantom:<name>`` for the built-in synthetic specimens.
    """
    path_str = str(path)
    if path_str.startswith("phantom:"):
        img = phantoms.make_phantom(path_str.split(":", 1)[1], n)
    else:
        suffix = Path(path_str).suffix.lower()
        if suffix == ".pgm":
            img = read_pgm(path_str)
        elif suffix == ".csv":
            img = read_matrix_csv(path_str)
        else:
            raise ValueError(f"Unsupported image format '{suffix}' for {path_str}.")
    if img.ndim != 2:
        raise ValueError(f"{path_str} is not a 2-D grayscale image.")
    if img.min() < 0 or img.max() > 1:
        raise ValueError(
            f"{path_str} has values outside [0, 1] "
            f"(range {img.min():.4g}..{img.max():.4g})."
        )
    return box_downsample(img, n).astype(np.complex128)


def image_id(path: PathLike) -> str:
    path_str = str(path)
    if path_str.startswith("phantom:"):
        return path_str.split(":", 1)[1]
    return Path(path_str).stem


def save_matrix(path: PathLike, values: np.ndarray) -> None:
    np.savetxt(path, values, delimiter=",", fmt="%.17g")


def save_complex(prefix: Path, values: np.ndarray) -> Tuple[Path, Path]:
    """Write a complex matrix as ``<prefix>_re.csv`` and ``<prefix>_im.csv``."""
    re_path = prefix.parent / f"{prefix.name}_re.csv"
    im_path = prefix.parent / f"{prefix.name}_im.csv"
    save_matrix(re_path, values.real)
    save_matrix(im_path, values.imag)
    return re_path, im_path


def load_complex(prefix: Path) -> np.ndarray:
    re = read_matrix_csv(prefix.parent / f"{prefix.name}_re.csv")
    im_path = prefix.parent / f"{prefix.name}_im.csv"
    im = read_matrix_csv(im_path) if im_path.exists() else 0.0
    return re + 1j * im


def save_heatmap(path: PathLike, values: np.ndarray, log_scale: bool = True) -> None:
    """16-bit PGM of a nonnegative map, optionally on a log10 scale."""
    data = np.asarray(values, dtype=np.float64)
    if log_scale:
        positive = data[data > 0]
        floor = positive.min() if positive.size else 1.0
        data = np.log10(np.maximum(data, floor))
    lo, hi = data.min(), data.max()
    scaled = np.zeros_like(data) if hi == lo else (data - lo) / (hi - lo)
    pixels = np.round(scaled * 0xFFFF).astype(np.uint16)
    Image.fromarray(pixels).save(path, format="PPM")

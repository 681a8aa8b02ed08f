import numpy as np  # type: ignore
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def random_specimen(rng: np.random.Generator, n: int) -> np.ndarray:
    """Complex specimen with magnitudes in [0, 1]."""
    return rng.uniform(0, 1, (n, n)) * np.exp(2j * np.pi * rng.random((n, n)))

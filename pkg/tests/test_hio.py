import numpy as np  # type: ignore
import pytest

import hio
import optics
from callback import LoggingCallback
from conftest import random_specimen


def test_projection_idempotent(rng):
    z = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    amp = rng.uniform(0.5, 2.0, (16, 16))
    once, _ = hio.project_modulus(z, amp)
    twice, residual = hio.project_modulus(once, amp)
    np.testing.assert_allclose(twice, once, atol=1e-12)
    assert residual < 1e-12


def test_projection_of_zero_keeps_zero():
    projected, residual = hio.project_modulus(np.zeros((8, 8)), np.zeros((8, 8)))
    assert not projected.any() and residual == 0.0


def test_known_solution_is_fixed_point(rng):
    n, m = 4, 16
    x = random_specimen(rng, n)
    c = optics.make_composite(x, "block")
    y = optics.diffract(c, m)
    cfg = hio.hio_config_for("block", n, n_iters=20, n_restarts=1, er_iters=5, init=c.values)
    result = hio.recover_hio(y, cfg)
    np.testing.assert_allclose(result.x_hat, x, atol=1e-8)
    assert result.info["residual"] < 1e-10


def test_zero_data_gives_zero():
    cfg = hio.hio_config_for("none", 3, n_iters=10, n_restarts=2, er_iters=2)
    assert not hio.recover_hio(np.zeros((12, 12)), cfg).x_hat.any()


@pytest.mark.parametrize("kind", ["block", "pinhole", "dual"])
def test_known_reference_enforced(kind, rng):
    n, m = 3, 16
    c = optics.make_composite(random_specimen(rng, n), kind)
    cfg = hio.hio_config_for(kind, n, n_iters=15, n_restarts=2, er_iters=5, seed=1)
    result = hio.recover_hio(optics.diffract(c, m), cfg)
    plane = result.info["plane"]
    rows, cols = c.values.shape
    np.testing.assert_array_equal(plane[:rows, :cols][cfg.known_mask], c.values[cfg.known_mask])
    assert not plane[rows:, :].any() and not plane[:, cols:].any()


def test_deterministic_for_seed(rng):
    n = 3
    y = optics.diffract(optics.make_composite(random_specimen(rng, n), "none"), 12)
    cfg = hio.hio_config_for("none", n, n_iters=30, n_restarts=3, er_iters=5, seed=4)
    first = hio.recover_hio(y, cfg).x_hat
    np.testing.assert_array_equal(first, hio.recover_hio(y, cfg).x_hat)


def test_negative_data_clamped(rng):
    y = rng.uniform(0, 1, (12, 12))
    y[0, 1] = -0.5
    y[3, 3] = -0.1
    cfg = hio.hio_config_for("pinhole", 3, n_iters=5, n_restarts=1, er_iters=1)
    with pytest.warns(UserWarning):
        result = hio.recover_hio(y, cfg)
    assert result.info["clamped"] == 2


def test_config_validation():
    support = np.ones((2, 2), dtype=bool)
    with pytest.raises(ValueError):
        hio.HioConfig(2, support, beta=1.5)
    with pytest.raises(ValueError):
        hio.HioConfig(2, support, n_iters=0)
    with pytest.raises(ValueError):
        hio.HioConfig(2, support, known_mask=support)


def test_callback_records_residuals(rng):
    n = 2
    y = optics.diffract(optics.make_composite(random_specimen(rng, n), "block"), 8)
    callback = LoggingCallback(log_every=5)
    cfg = hio.hio_config_for("block", n, n_iters=20, n_restarts=2, er_iters=5)
    hio.recover_hio(y, cfg, callback=callback)
    assert callback.n_calls == 40
    assert len(callback.residuals) == 8
    assert callback.best_residual == min(callback.residuals)
    assert callback.restart == 1


def test_register_undoes_twin_shift_and_phase(rng):
    n, m = 4, 16
    x = random_specimen(rng, n)
    plane = hio._to_plane(x, m)
    scrambled = np.roll(hio.flip_conjugate(plane) * np.exp(0.7j), (3, 5), axis=(0, 1))
    np.testing.assert_allclose(hio.register(scrambled, x), x, atol=1e-10)


def test_flip_conjugate_is_involution(rng):
    plane = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    np.testing.assert_array_equal(hio.flip_conjugate(hio.flip_conjugate(plane)), plane)


@pytest.mark.parametrize("kind", ["block", "pinhole", "dual"])
def test_reference_picks_twin_and_phase(kind, rng):
    n, m = 4, 16
    x = random_specimen(rng, n)
    c = optics.make_composite(x, kind)
    cfg = hio.hio_config_for(kind, n, enforce_reference=False)
    plane = hio._to_plane(c.values, m)
    rows, cols = c.values.shape
    twin = np.roll(hio.flip_conjugate(plane), (rows - 1, cols - 1), axis=(0, 1))
    for scrambled in (plane * np.exp(-1.1j), twin * np.exp(2.3j)):
        aligned = hio.align_to_reference(scrambled, cfg.known_mask, cfg.known_values)
        np.testing.assert_allclose(aligned, plane, atol=1e-10)


def test_free_reference_solution_is_aligned(rng):
    n, m = 4, 16
    c = optics.make_composite(random_specimen(rng, n), "dual")
    rows, cols = c.values.shape
    plane = hio._to_plane(c.values, m)
    twin = np.roll(hio.flip_conjugate(plane), (rows - 1, cols - 1), axis=(0, 1))
    cfg = hio.hio_config_for(
        "dual", n, enforce_reference=False, n_iters=10, n_restarts=1, er_iters=5,
        init=(twin * np.exp(0.4j))[:rows, :cols],
    )
    result = hio.recover_hio(optics.diffract(c, m), cfg)
    assert result.info["residual"] < 1e-10
    np.testing.assert_allclose(result.x_hat, c.values[:n, :n], atol=1e-8)


def test_free_reference_is_not_reset(rng):
    n, m = 3, 16
    c = optics.make_composite(random_specimen(rng, n), "block")
    y = optics.diffract(c, m)
    free = hio.hio_config_for("block", n, enforce_reference=False, n_iters=5, n_restarts=1,
                              er_iters=1, seed=2)
    fixed = hio.hio_config_for("block", n, n_iters=5, n_restarts=1, er_iters=1, seed=2)
    assert not free.enforce_known and fixed.enforce_known
    free_plane = hio.recover_hio(y, free).info["plane"]
    fixed_plane = hio.recover_hio(y, fixed).info["plane"]
    rows, cols = c.values.shape
    mask = fixed.known_mask
    np.testing.assert_array_equal(fixed_plane[:rows, :cols][mask], c.values[mask])
    assert not np.allclose(free_plane[:rows, :cols][mask], c.values[mask])

import json
import sys
from argparse import Namespace

import numpy as np  # type: ignore
import pandas as pd  # type: ignore
import pytest

import phantoms
import run
import util
from default_config import cfg as default_cfg


def make_cfg(tmp_path, **kwargs) -> Namespace:
    cfg = Namespace(**vars(default_cfg))
    cfg.image_paths = ["phantom:blobs", "phantom:rings"]
    cfg.n = 4
    cfg.m = 16
    cfg.n_trials = 3
    cfg.output_dir = str(tmp_path)
    cfg.timing = False
    for k, v in kwargs.items():
        setattr(cfg, k, v)
    return cfg


def test_noiseless_table(tmp_path):
    df, failures = run.run_experiment(make_cfg(tmp_path, noiseless=True))
    assert not failures
    assert list(df.columns) == run.CSV_COLUMNS
    assert len(df) == 6
    assert (df["empirical_rel_err"] <= 1e-18).all()
    assert (df["expected_rel_err"] == 0).all()
    on_disk = pd.read_csv(tmp_path / "results.csv")
    assert list(on_disk.columns) == run.CSV_COLUMNS


def test_tables_are_reproducible(tmp_path):
    for name in "a", "b":
        run.run_experiment(make_cfg(tmp_path / name))
    first = (tmp_path / "a" / "results.csv").read_bytes()
    assert first == (tmp_path / "b" / "results.csv").read_bytes()


def test_noisy_row_reports_expected_error(tmp_path):
    df, _ = run.run_experiment(make_cfg(tmp_path, methods=["dual"], n_trials=5))
    assert (df["expected_rel_err"] > 0).all()
    assert (df["stderr"] > 0).all()
    assert (df["trials"] == 5).all()


def test_failed_rows_are_reported(tmp_path):
    missing = str(tmp_path / "missing.pgm")
    cfg = make_cfg(tmp_path, image_paths=["phantom:blobs", missing])
    df, failures = run.run_experiment(cfg)
    assert {f["image"] for f in failures} == {"missing"}
    assert len(failures) == len(cfg.methods)
    assert df[df["image"] == "missing"]["empirical_rel_err"].isna().all()
    assert df[df["image"] == "blobs"]["empirical_rel_err"].notna().all()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert len(manifest["failures"]) == len(cfg.methods)


def test_hio_rows(tmp_path):
    cfg = make_cfg(
        tmp_path,
        image_paths=["phantom:blobs"],
        methods=["hio_a", "hio_b"],
        hio_iters=20,
        hio_restarts=1,
        hio_er_iters=5,
        hio_trials=1,
    )
    df, failures = run.run_experiment(cfg)
    assert not failures
    assert (df["trials"] == 1).all()
    assert np.isfinite(df["empirical_rel_err"]).all()
    assert df["expected_rel_err"].isna().all()


def test_check_config(tmp_path):
    with pytest.raises(ValueError):
        run.check_config(make_cfg(tmp_path, m=14))
    with pytest.raises(ValueError):
        run.check_config(make_cfg(tmp_path, methods=["dual", "wiener"]))
    with pytest.raises(ValueError):
        run.check_config(make_cfg(tmp_path, subsample=3))


def test_emit_weight_maps(tmp_path):
    written = run.emit_weight_maps(make_cfg(tmp_path, n=2, m=8))
    map_dir = tmp_path / "weight_maps"
    assert all(p.exists() for p in written)
    for name in "dual", "block", "pinhole", "ratio":
        values = np.loadtxt(map_dir / f"{name}.csv", delimiter=",")
        assert values.shape == (8, 8) and (values >= 0).all()
        assert (map_dir / f"{name}.pgm").exists()
    sections = pd.read_csv(map_dir / "cross_sections_dual.csv")
    assert list(sections.columns) == ["top", "bottom", "left", "right"]
    assert sections.size == 4 * 8
    summary = json.loads((map_dir / "summary.json").read_text())
    assert summary["median_ratio"] > 0


def test_subsampled_weight_maps(tmp_path):
    run.emit_weight_maps(make_cfg(tmp_path, n=2, m=8, subsample=2))
    values = np.loadtxt(tmp_path / "weight_maps" / "dual.csv", delimiter=",")
    assert values.shape == (4, 4)


def test_manifest_replay(tmp_path):
    cfg = make_cfg(tmp_path, noiseless=True)
    run.run_experiment(cfg)
    assert vars(run.load_manifest_config(tmp_path / "manifest.json")) == vars(cfg)


def test_old_manifest_is_patched(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"version": "0.1.0", "config": {"n": 8, "m": 32}}))
    cfg = run.load_manifest_config(path)
    assert cfg.n == 8 and cfg.m == 32
    assert cfg.hio_beta == default_cfg.hio_beta


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("HOLODECONV_SEED", "17")
    monkeypatch.setattr(sys, "argv", ["run.py", "table", "--n", "8"])
    cfg = run.make_config(run.get_args())
    assert cfg.seed == 17
    assert cfg.n == 8 and cfg.m == default_cfg.m
    assert cfg.timing is False
    assert cfg.hio_enforce_reference is False


def test_timing_and_reference_flags(monkeypatch):
    argv = ["run.py", "table", "--timing", "--hio_enforce_reference"]
    monkeypatch.setattr(sys, "argv", argv)
    cfg = run.make_config(run.get_args())
    assert cfg.timing is True
    assert cfg.hio_enforce_reference is True


@pytest.mark.parametrize("m", ["1000", "96", "0"])
def test_detector_side_must_be_power_of_two(monkeypatch, m):
    monkeypatch.setattr(sys, "argv", ["run.py", "table", "--n", "8", "--m", m])
    with pytest.raises(ValueError):
        run.make_config(run.get_args())


def test_simulate_then_recover(tmp_path):
    cfg = make_cfg(tmp_path, noiseless=True)
    y_path = run.simulate(cfg, "dual", "phantom:cells")
    prefix = run.recover_file(cfg, "dual", str(y_path))
    x = phantoms.make_phantom("cells", cfg.n)
    np.testing.assert_allclose(util.load_complex(prefix), x, atol=1e-9)

import argparse
import importlib
import json
import logging
import os
import time
from argparse import Namespace
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np  # type: ignore
import pandas as pd  # type: ignore
from joblib import Parallel, delayed  # type: ignore
from torch.utils.tensorboard import SummaryWriter
from tqdm import tqdm  # type: ignore

import hio
import noise
import optics
import recovery
import util
import verify
import weights
from callback import LoggingCallback
from default_config import METHODS, VERSION
from default_config import cfg as _cfg

logger = logging.getLogger("holodeconv")

CSV_COLUMNS = [
    "image",
    "method",
    "empirical_rel_err",
    "expected_rel_err",
    "stderr",
    "trials",
    "wall_time_s",
]


def check_config(cfg: Namespace) -> None:
    check_detector_side(cfg.m)
    if cfg.m < optics.min_detector_side(cfg.n):
        raise ValueError(f"m={cfg.m} is too small for n={cfg.n}; need m >= {4 * cfg.n - 1}.")
    if cfg.n_trials < 1:
        raise ValueError(f"n_trials must be at least 1, got {cfg.n_trials}.")
    if cfg.photons_per_pixel <= 0:
        raise ValueError(f"photons_per_pixel must be positive, got {cfg.photons_per_pixel}.")
    unknown = set(cfg.methods) - set(METHODS)
    if unknown:
        raise ValueError(f"Methods {sorted(unknown)} not recognized.")
    if cfg.subsample < 1 or cfg.m % cfg.subsample:
        raise ValueError(f"subsample={cfg.subsample} must be a positive divisor of m.")


def check_detector_side(m: int) -> None:
    if m < 1 or m & (m - 1):
        raise ValueError(f"m must be a power of two, got {m}.")


def trial_seeds(cfg: Namespace, name: str, method: str, n_trials: int) -> List[int]:
    return [util.derive_seed(cfg.seed, name, method, t) for t in range(n_trials)]


def n_trials_for(cfg: Namespace, method: str) -> int:
    if method.startswith("hio"):
        return min(cfg.n_trials, cfg.hio_trials)
    return cfg.n_trials


def recover_hio_trial(
    cfg: Namespace,
    method: str,
    x: np.ndarray,
    y_noisy: np.ndarray,
    seed: int,
    callback: LoggingCallback,
) -> np.ndarray:
    hio_cfg = hio.hio_config_for(
        recovery.method_kind(method),
        cfg.n,
        beta=cfg.hio_beta,
        n_iters=cfg.hio_iters,
        n_restarts=cfg.hio_restarts,
        er_iters=min(cfg.hio_er_iters, cfg.hio_iters),
        seed=seed,
        enforce_reference=cfg.hio_enforce_reference,
    )
    result = hio.recover_hio(y_noisy, hio_cfg, callback=callback)
    if method == "hio_a":
        return hio.register(result.info["plane"], x)
    return result.x_hat


def do_row(cfg: Namespace, path: str, method: str, out_dir: Path) -> Dict[str, Any]:
    name = util.image_id(path)
    n_trials = n_trials_for(cfg, method)
    row: Dict[str, Any] = {
        "image": name,
        "method": method,
        "empirical_rel_err": np.nan,
        "expected_rel_err": np.nan,
        "stderr": np.nan,
        "trials": n_trials,
        "wall_time_s": 0.0,
        "error": None,
    }
    start = time.perf_counter()
    writer = None
    try:
        x = util.ingest_image(path, cfg.n)
        kind = recovery.method_kind(method)
        y = optics.diffract(optics.make_composite(x, kind), cfg.m)
        n_photons = cfg.photons_per_pixel * cfg.m ** 2
        writer = SummaryWriter(log_dir=str(out_dir / "runs" / f"{name}-{method}"))
        callback = LoggingCallback(writer, log_every=cfg.hio_log_every)
        errors = []
        for t, seed in enumerate(trial_seeds(cfg, name, method, n_trials)):
            if cfg.noiseless:
                y_trial = y
            else:
                y_trial = noise.corrupt(y, noise.PoissonConfig(n_photons, seed))
            if method.startswith("hio"):
                callback.tag = f"hio/trial-{t}"
                x_hat = recover_hio_trial(cfg, method, x, y_trial, seed, callback)
            else:
                x_hat = recovery.recover(y_trial, cfg.n, method).x_hat
            errors.append(util.relative_error(x_hat, x))
            writer.add_scalar("rel_err", errors[-1], t)
        row["empirical_rel_err"] = float(np.mean(errors))
        if len(errors) > 1:
            row["stderr"] = float(np.std(errors, ddof=1) / np.sqrt(len(errors)))
        else:
            row["stderr"] = 0.0
        if not method.startswith("hio"):
            if cfg.noiseless:
                row["expected_rel_err"] = 0.0
            else:
                s = weights.cached_weight_map(cfg.n, cfg.m, kind)
                report = weights.expected_error(s, y, n_photons, x)
                row["expected_rel_err"] = report.expected_relative
    except Exception as e:
        logger.exception(f"Row {name}/{method} failed")
        row["error"] = repr(e)
    finally:
        if writer is not None:
            writer.close()
    if cfg.timing:
        row["wall_time_s"] = time.perf_counter() - start
    return row


def run_experiment(cfg: Namespace) -> Tuple[pd.DataFrame, List[Dict[str, Any]]]:
    check_config(cfg)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [
        delayed(do_row)(cfg, path, method, out_dir)
        for path in cfg.image_paths
        for method in cfg.methods
    ]
    if len(jobs) == 1 or cfg.j == 1:
        rows = [j[0](*j[1], **j[2]) for j in tqdm(jobs)]
    else:
        rows = Parallel(n_jobs=cfg.j)(j for j in tqdm(jobs))
    failures = [
        {"image": r["image"], "method": r["method"], "error": r["error"]}
        for r in rows
        if r["error"] is not None
    ]
    df = pd.DataFrame(rows)[CSV_COLUMNS]
    df.to_csv(out_dir / "results.csv", index=False, float_format="%.6e")
    write_manifest(cfg, out_dir, failures)
    if cfg.weight_maps:
        emit_weight_maps(cfg)
    for failure in failures:
        logger.error(f"FAILED {failure['image']}/{failure['method']}: {failure['error']}")
    return df, failures


def write_manifest(cfg: Namespace, out_dir: Path, failures: List[Dict[str, Any]]) -> None:
    seeds = {
        f"{util.image_id(p)}/{mth}": trial_seeds(
            cfg, util.image_id(p), mth, n_trials_for(cfg, mth)
        )
        for p in cfg.image_paths
        for mth in cfg.methods
    }
    manifest = {
        "version": VERSION,
        "config": vars(cfg),
        "seeds": seeds,
        "failures": failures,
    }
    with (out_dir / "manifest.json").open("w") as fo:
        json.dump(manifest, fo, indent=2, sort_keys=True)


def patch_old_configs(cfg: Namespace) -> Namespace:
    for key, value in vars(_cfg).items():
        if not hasattr(cfg, key):
            setattr(cfg, key, value)
    return cfg


def load_manifest_config(path: Path) -> Namespace:
    with path.open() as fo:
        manifest = json.load(fo)
    if manifest.get("version") != VERSION:
        logger.warning(
            f"Manifest written by version {manifest.get('version')}, running {VERSION}"
        )
    return patch_old_configs(Namespace(**manifest["config"]))


def emit_weight_maps(cfg: Namespace) -> List[Path]:
    if cfg.m < optics.min_detector_side(cfg.n):
        raise ValueError(f"m={cfg.m} is too small for n={cfg.n}; need m >= {4 * cfg.n - 1}.")
    map_dir = Path(cfg.output_dir) / "weight_maps"
    map_dir.mkdir(parents=True, exist_ok=True)
    comparison = weights.compare_weight_maps(cfg.n, cfg.m, cfg.subsample)
    written: List[Path] = []
    arrays = {**{k: wm.s for k, wm in comparison.maps.items()}, "ratio": comparison.ratio}
    for name, values in arrays.items():
        util.save_matrix(map_dir / f"{name}.csv", values)
        util.save_heatmap(map_dir / f"{name}.pgm", values)
        written += [map_dir / f"{name}.csv", map_dir / f"{name}.pgm"]
    for kind, sections in comparison.cross_sections.items():
        path = map_dir / f"cross_sections_{kind}.csv"
        pd.DataFrame(sections, columns=["top", "bottom", "left", "right"]).to_csv(
            path, index=False, float_format="%.10e"
        )
        written.append(path)
    summary = {
        "n": cfg.n,
        "m": cfg.m,
        "subsample": cfg.subsample,
        "median_ratio": comparison.median_ratio,
        "ratio_quantiles": {str(q): v for q, v in comparison.ratio_quantiles.items()},
        "integrated": comparison.integrated,
    }
    with (map_dir / "summary.json").open("w") as fo:
        json.dump(summary, fo, indent=2)
    written.append(map_dir / "summary.json")
    return written


def simulate(cfg: Namespace, kind: str, target: str) -> Path:
    x = util.ingest_image(target, cfg.n)
    y = optics.diffract(optics.make_composite(x, kind), cfg.m)
    if not cfg.noiseless:
        n_photons = cfg.photons_per_pixel * cfg.m ** 2
        y = noise.corrupt(y, noise.PoissonConfig(n_photons, cfg.seed))
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{util.image_id(target)}_{kind}_y.csv"
    util.save_matrix(path, y)
    logger.info(f"Wrote {kind} diffraction data to {path}")
    return path


def recover_file(cfg: Namespace, method: str, target: str) -> Path:
    y = util.read_matrix_csv(target)
    result = recovery.recover(y, cfg.n, method, cfg.oracle_cap)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    prefix = out_dir / f"{Path(target).stem}_{method}_xhat"
    util.save_complex(prefix, result.x_hat)
    logger.info(f"Recovered with {method} in {result.wall_time:.3f}s, wrote {prefix}_re/im.csv")
    return prefix


def run_sweeps(config_paths: List[str], base: Namespace) -> bool:
    all_ok = True
    for config_path in config_paths:
        config_name = config_path.rstrip("/").split("/")[-2]
        module_name = config_path.rstrip("/").replace("/", ".")[:-3]
        mod: Any = importlib.import_module(module_name)
        for i, config in enumerate(mod.generate_configs()):
            cfg = Namespace(**{**vars(base), **config})
            name = "_".join(
                f"{k}={v}" for k, v in config.items() if not isinstance(v, (list, tuple))
            ) or str(i)
            cfg.output_dir = str(Path(base.output_dir) / config_name / name)
            _, failures = run_experiment(cfg)
            all_ok &= not failures
    return all_ok


def get_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument("command", type=str)
    parser.add_argument("targets", type=str, nargs="*")
    parser.add_argument("--n", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--photons_per_pixel", type=float)
    parser.add_argument("--methods", type=str, nargs="+")
    parser.add_argument("--n_trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out_dir", "-o", dest="output_dir", type=str)
    parser.add_argument("--noiseless", action="store_true", default=None)
    parser.add_argument(
        "--timing",
        action="store_true",
        default=None,
        help="Add wall-clock columns; tables then differ between repeated runs.",
    )
    parser.add_argument("--weight_maps", action="store_true", default=None)
    parser.add_argument("--subsample", type=int)
    parser.add_argument("--oracle_cap", type=int)
    parser.add_argument("--hio_beta", type=float)
    parser.add_argument("--hio_iters", type=int)
    parser.add_argument("--hio_restarts", type=int)
    parser.add_argument("--hio_trials", type=int)
    parser.add_argument("--hio_enforce_reference", action="store_true", default=None)
    parser.add_argument("--kind", type=str, default="dual")
    parser.add_argument("--method", type=str, default="dual")
    parser.add_argument("--from_manifest", type=str, default=None)
    parser.add_argument("--verbose", "-v", action="store_true")
    parser.add_argument("-j", type=int)
    return parser.parse_args()


def make_config(args: argparse.Namespace) -> Namespace:
    if args.from_manifest is not None:
        base = load_manifest_config(Path(args.from_manifest))
    else:
        base = Namespace(**vars(_cfg))
    overrides = {
        k: v for k, v in vars(args).items() if v is not None and hasattr(base, k)
    }
    cfg = Namespace(**{**vars(base), **overrides})
    if "HOLODECONV_SEED" in os.environ:
        cfg.seed = int(os.environ["HOLODECONV_SEED"])
    check_detector_side(cfg.m)
    return cfg


def setup_logging(output_dir: str, verbose: bool) -> None:
    Path(output_dir).mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        handlers=[
            logging.StreamHandler(),
            logging.FileHandler(Path(output_dir) / "holodeconv.log"),
        ],
    )


def main() -> int:
    args = get_args()
    cfg = make_config(args)
    setup_logging(cfg.output_dir, args.verbose)

    if args.command == "simulate":
        for target in args.targets:
            simulate(cfg, args.kind, target)
    elif args.command == "recover":
        for target in args.targets:
            recover_file(cfg, args.method, target)
    elif args.command == "errmap":
        emit_weight_maps(cfg)
    elif args.command == "table":
        if args.targets:
            cfg.image_paths = args.targets
        _, failures = run_experiment(cfg)
        return int(bool(failures))
    elif args.command == "sweep":
        return int(not run_sweeps(args.targets, cfg))
    elif args.command == "verify":
        return int(not verify.run_checks())
    else:
        raise ValueError(f"Command '{args.command}' not recognized.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

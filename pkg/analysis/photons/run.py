from pathlib import Path
from typing import Dict, List

import numpy as np  # type: ignore
from scipy.stats import linregress  # type: ignore

import analyze  # type: ignore


def generate_configs() -> List[Dict]:
    return [
        {
            "photons_per_pixel": photons,
            "n": 16,
            "m": 64,
            "n_trials": 200,
        }
        for photons in (10.0, 100.0, 1000.0, 10000.0)
    ]


def main(args, path: Path) -> None:
    df = analyze.load_results(path)
    # The expected error scales as 1 / N_p, so both slopes should sit near -1
    for method, group in df.groupby("method"):
        print(f"{method}", end="\t")
        for field in "empirical_rel_err", "expected_rel_err":
            fit = linregress(np.log10(group["photons_per_pixel"]), np.log10(group[field]))
            print(f"{field} slope {fit.slope:+.3f} (r={fit.rvalue:.3f})", end="\t")
        print()

from pathlib import Path
from typing import Dict, List

import analyze  # type: ignore


def generate_configs() -> List[Dict]:
    return [
        {
            "noiseless": True,
            "n": n,
            "m": max(4 * n, 64),
            "n_trials": 1,
            "timing": False,
        }
        for n in (1, 2, 4, 8, 16, 64)
    ]


def main(args, path: Path) -> None:
    df = analyze.load_results(path)
    worst = df.groupby(["n", "method"])["empirical_rel_err"].max().unstack()
    print(worst)
    print(f"\nworst relative squared error overall: {worst.max().max():.3e}")

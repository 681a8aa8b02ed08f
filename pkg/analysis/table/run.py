from pathlib import Path
from typing import Dict, List

import pandas as pd  # type: ignore

import analyze  # type: ignore


def generate_configs() -> List[Dict]:
    return [
        {
            "methods": ["block", "pinhole", "dual", "hio_a", "hio_b", "hio_c"],
            "n_trials": 20,
            "hio_iters": 500,
            "hio_restarts": 2,
            "hio_trials": 3,
        }
    ]


def main(args, path: Path) -> None:
    df = analyze.load_results(path)
    table = analyze.table_one(df, args.scale)
    if args.latex:
        print(analyze.to_latex(table))
    else:
        with pd.option_context("display.max_columns", 1000, "display.width", 300):
            print(table)
    print()
    for field in "empirical_rel_err", "expected_rel_err":
        best = analyze.dual_is_best(df, field)
        print(f"dual best by {field}: {int(best.sum())}/{len(best)}")
    hio = df[df["method"].str.startswith("hio")]
    if len(hio):
        dual = df[df["method"] == "dual"].set_index("image")["empirical_rel_err"]
        gap = hio.set_index("image")["empirical_rel_err"] / dual
        print(f"smallest HIO / dual error ratio: {gap.min():.3g}")

import argparse
import importlib
import json
from pathlib import Path
from typing import Any, List

import pandas as pd  # type: ignore

CONFIG_COLUMNS = ["n", "m", "photons_per_pixel", "noiseless"]
METHOD_ORDER = ["block", "pinhole", "dual", "hio_a", "hio_b", "hio_c"]


def to_latex(df: pd.DataFrame) -> str:
    return df.to_latex(
        escape=False,
        formatters={
            col: lambda x: f"${x}$" if not pd.isna(x) and x != "" else "-"
            for col in df.columns
        },
    )


def load_results(path: Path) -> pd.DataFrame:
    """Concatenate every ``results.csv`` under ``path`` with its run config."""
    paths = [path] if path.is_file() else sorted(path.glob("**/results.csv"))
    dfs: List[pd.DataFrame] = []
    for csv_path in paths:
        df = pd.read_csv(csv_path)
        manifest_path = csv_path.parent / "manifest.json"
        if manifest_path.exists():
            with manifest_path.open() as fo:
                config = json.load(fo)["config"]
            for col in CONFIG_COLUMNS:
                df[col] = config.get(col)
        df["run"] = str(csv_path.parent)
        dfs.append(df)
    if not dfs:
        raise ValueError(f"No results.csv found under {path}.")
    return pd.concat(dfs, ignore_index=True)


def format_cell(empirical: float, expected: float, scale: float) -> str:
    if pd.isna(empirical):
        return "failed"
    cell = f"{empirical / scale:.3g}"
    if not pd.isna(expected):
        cell += f" ({expected / scale:.3g})"
    return cell


def table_one(df: pd.DataFrame, scale: float = 1e-4) -> pd.DataFrame:
    """Images by methods, ``empirical (expected)`` relative errors over ``scale``."""
    df = df.assign(
        cell=[
            format_cell(e, x, scale)
            for e, x in zip(df["empirical_rel_err"], df["expected_rel_err"])
        ]
    )
    table = df.pivot_table(index="image", columns="method", values="cell", aggfunc="first")
    return table[[m for m in METHOD_ORDER if m in table.columns]]


def dual_is_best(df: pd.DataFrame, field: str) -> pd.Series:
    deconv = df[df["method"].isin(["dual", "block", "pinhole"])]
    wide = deconv.pivot_table(index="image", columns="method", values=field)
    return wide["dual"] < wide[["block", "pinhole"]].min(axis=1)


def get_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument("target", type=str)
    parser.add_argument("--results", type=str, default=None)
    parser.add_argument("--scale", type=float, default=1e-4)
    parser.add_argument("--latex", action="store_true")
    return parser.parse_args()


def main() -> None:
    args = get_args()
    target = Path(args.target)
    if (target / "run.py").exists():
        module_name = args.target.rstrip("/").replace("/", ".")
        mod: Any = importlib.import_module(f"{module_name}.run")
        results = Path(args.results) if args.results else Path("log") / target.name
        mod.main(args, results)
        return
    table = table_one(load_results(target), args.scale)
    if args.latex:
        print(to_latex(table))
    else:
        with pd.option_context("display.max_columns", 1000, "display.width", 300):
            print(table)


if __name__ == "__main__":
    main()

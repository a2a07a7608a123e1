#!/usr/bin/env python3
"""
Plots a result file written by fraccomp: one curve per time of a t, x, value grid,
or value against the first column for one-dimensional results (special functions, MGFs).
"""

from argparse import ArgumentParser, ArgumentDefaultsHelpFormatter
from pathlib import Path
import sys

import matplotlib.pyplot as plt

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from fraccomp.util.common import read_result  # noqa: E402


def plot_result(path: Path, save: bool) -> None:
    """
    Plots result file.

    :param path: Result file (CSV or JSON).
    :param save: Whether to save the figure next to the result instead of showing it.
    """
    meta, df = read_result(path)
    fig, ax = plt.subplots(1, 1, figsize=(12, 6))

    if {"t", "x"} <= set(df.columns):
        for t, rows in df.groupby("t"):
            ax.plot(rows["x"], rows["value"], marker=".", label=f"t = {t:g}")
        ax.set_xlabel("x")
    else:
        first = df.columns[0] if df.columns[0] != "t" else df.columns[1]
        ax.plot(df[first], df["value"], marker="o", color="C0", label="value")
        if "stderr" in df.columns:
            ax.fill_between(df[first], df["value"] - 3 * df["stderr"], df["value"] + 3 * df["stderr"],
                            color="C0", alpha=.25, label="3 standard errors")
        for column, style in (("chain", "--"), ("target", ":")):
            if column in df.columns:
                ax.plot(df[first], df[column], linestyle=style, color="k", label=column)
        ax.set_xlabel(first)

    ax.set_ylabel("value")
    ax.grid(True, linestyle="dashed")
    ax.legend(loc="upper right")
    plt.title(f"{meta.get('quantity', path.stem)} ({meta.get('route', 'unknown route')})\n"
              f"{meta.get('grid', '')}")
    plt.tight_layout()

    if save:
        plt.savefig(path.with_suffix(".png"))
    else:
        plt.show()


def main() -> None:
    parser = ArgumentParser(description="Plots fraccomp result files.", formatter_class=ArgumentDefaultsHelpFormatter)
    parser.add_argument("path", type=str, help="Path to a CSV or JSON result.")
    parser.add_argument("--save", action="store_true", default=False,
                        help="Saves the figure as PNG next to the result instead of showing it.")
    args = parser.parse_args()

    path = Path(args.path)
    if not path.is_file():
        parser.error(f"Result file '{path}' not found.")
    plot_result(path, args.save)


if __name__ == "__main__":
    main()

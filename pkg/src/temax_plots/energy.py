"""Energy-vs-time overlay figure from one or more energy.csv files."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .io import ENERGY_COLUMNS, SchemaError, read_energy


def infer_label(csv_path: str) -> str:
    """Label a curve from the run's summary.json when it sits next to the
    CSV, else fall back to the directory or file name."""
    run_dir = os.path.dirname(os.path.abspath(csv_path))
    summary = os.path.join(run_dir, "summary.json")
    try:
        with open(summary) as fh:
            s = json.load(fh)
        return f"k={s['k']} {s['nx']}x{s['ny']}"
    except (OSError, ValueError, KeyError):
        base = os.path.basename(run_dir)
        return base or os.path.basename(csv_path)


def plot_energy(csv_paths, out_path, labels=None, column="E_h",
                title=None) -> str:
    """Overlay one curve per input file; returns the written path."""
    if column not in ENERGY_COLUMNS or column == "t":
        raise ValueError(f"unknown column '{column}'")
    if labels is not None and len(labels) != len(csv_paths):
        raise ValueError("need one label per input file")
    series = [read_energy(p) for p in csv_paths]
    if labels is None:
        labels = [infer_label(p) for p in csv_paths]

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for data, label in zip(series, labels):
        ax.plot(data["t"], data[column], lw=1.4, label=label)
    ax.set_xlabel("t [s]")
    ax.set_ylabel(column)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Overlay energy-vs-time curves from solver energy.csv "
                    "files.")
    parser.add_argument("csv", nargs="+", help="energy.csv files")
    parser.add_argument("--out", required=True, help="output image file")
    parser.add_argument("--label", action="append",
                        help="curve label, once per input (default: from "
                             "the neighbouring summary.json)")
    parser.add_argument("--column", default="E_h",
                        choices=[c for c in ENERGY_COLUMNS if c != "t"])
    parser.add_argument("--title")
    args = parser.parse_args(argv)
    try:
        plot_energy(args.csv, args.out, labels=args.label,
                    column=args.column, title=args.title)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"plot_energy: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

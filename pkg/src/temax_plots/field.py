"""Filled-contour image of one field from a snapshot file."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .io import SchemaError, read_snapshot

# CLI spelling -> snapshot column(s)
FIELDS = ("Bz", "Dx", "Dy", "|D|")
_COLUMN = {"Bz": "B_z", "Dx": "D_x", "Dy": "D_y"}


def _extract(snap, field: str) -> np.ndarray:
    if field == "|D|":
        return np.hypot(snap.fields["D_x"], snap.fields["D_y"])
    try:
        return snap.fields[_COLUMN[field]]
    except KeyError:
        raise ValueError(f"unknown field '{field}' (expected one of "
                         f"{', '.join(FIELDS)})")


def plot_field(snapshot_path, field, out_path, cmap=None, levels=48) -> str:
    """Contour the chosen field over the physical domain; returns the
    written path."""
    snap = read_snapshot(snapshot_path)
    values = _extract(snap, field)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    signed = field != "|D|"
    if cmap is None:
        cmap = "RdBu_r" if signed else "viridis"
    vmax = float(np.max(np.abs(values)))
    if vmax == 0.0:
        vmax = 1.0  # all-zero field still renders
    vmin = -vmax if signed else 0.0

    fig, ax = plt.subplots(figsize=(6.4, 5.0))
    cs = ax.contourf(snap.x, snap.y, values, levels=levels, cmap=cmap,
                     vmin=vmin, vmax=vmax)
    fig.colorbar(cs, ax=ax, label=field)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{snap.problem}: {field} at t = {snap.t:.4g} s")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Render one field of a solver snapshot as a filled "
                    "contour image.")
    parser.add_argument("snapshot", help="snapshot_*.txt file")
    parser.add_argument("--field", default="Bz", choices=FIELDS)
    parser.add_argument("--out", required=True, help="output image file")
    parser.add_argument("--cmap", help="matplotlib colormap name")
    args = parser.parse_args(argv)
    try:
        plot_field(args.snapshot, args.field, args.out, cmap=args.cmap)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"plot_field: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

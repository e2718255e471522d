"""Parsers for the solver's delimited output files.

Every file the solver writes starts with a schema line; anything that
does not match is rejected with SchemaError so batch figure jobs fail
loudly instead of mis-plotting stale or foreign data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SCHEMA_LINE = "# schema-version: 1"

ENERGY_COLUMNS = ("t", "E_h", "E_star_h", "compat_max", "div_max")
SNAPSHOT_COLUMNS = ("x", "y", "D_x", "D_y", "B_z")


class SchemaError(ValueError):
    """Output file does not match the format this package understands."""


def _check_schema_line(path, line):
    if line.rstrip("\n") != SCHEMA_LINE:
        raise SchemaError(f"{path}: missing or unrecognized schema line")


def read_energy(path: str) -> dict:
    """Energy time series as a dict of equal-length float arrays."""
    rows = []
    with open(path) as fh:
        _check_schema_line(path, fh.readline())
        header = tuple(fh.readline().rstrip("\n").split(","))
        if header != ENERGY_COLUMNS:
            raise SchemaError(f"{path}: unexpected columns {list(header)}")
        for lineno, raw in enumerate(fh, 3):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(ENERGY_COLUMNS):
                raise SchemaError(
                    f"{path}:{lineno}: expected {len(ENERGY_COLUMNS)} fields")
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise SchemaError(f"{path}:{lineno}: non-numeric field")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.asarray(rows)
    return {name: data[:, i] for i, name in enumerate(ENERGY_COLUMNS)}


@dataclass
class Snapshot:
    problem: str
    k: int
    nx: int
    ny: int
    bounds: tuple
    t: float
    x: np.ndarray      # (nx, ny) cell-center coordinates
    y: np.ndarray
    fields: dict       # column name -> (nx, ny) array


def read_snapshot(path: str) -> Snapshot:
    """Parse one field snapshot, restoring the (nx, ny) cell layout."""
    header = {}
    with open(path) as fh:
        _check_schema_line(path, fh.readline())
        pos = fh.tell()
        line = fh.readline()
        while line.startswith("#"):
            body = line[1:].strip()
            key, _, val = body.partition(":")
            header[key.strip()] = val.strip()
            pos = fh.tell()
            line = fh.readline()
        fh.seek(pos)
        try:
            nx, ny = int(header["nx"]), int(header["ny"])
            k = int(header["k"])
            t = float(header["t"])
            bounds = tuple(float(v) for v in header["bounds"].split())
            columns = tuple(header["columns"].split())
            problem = header["problem"]
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"{path}: bad snapshot header ({exc})")
        if columns != SNAPSHOT_COLUMNS:
            raise SchemaError(f"{path}: unexpected columns {list(columns)}")
        if len(bounds) != 4:
            raise SchemaError(f"{path}: bounds needs 4 values")
        try:
            data = np.loadtxt(fh, ndmin=2)
        except ValueError as exc:
            raise SchemaError(f"{path}: bad data row ({exc})")
    if data.size == 0 or data.shape != (nx * ny, len(SNAPSHOT_COLUMNS)):
        got = (0, 0) if data.size == 0 else data.shape
        raise SchemaError(
            f"{path}: expected {nx * ny} rows x {len(SNAPSHOT_COLUMNS)} "
            f"columns, found {got[0]} x {got[1]}")
    # rows are written y-fastest
    grids = {name: data[:, c].reshape(nx, ny)
             for c, name in enumerate(SNAPSHOT_COLUMNS)}
    return Snapshot(problem=problem, k=k, nx=nx, ny=ny, bounds=bounds, t=t,
                    x=grids.pop("x"), y=grids.pop("y"), fields=grids)

"""Command-line interface.

This module stays importable without numpy: --threads must take effect
before numpy initializes its BLAS thread pool, so the solver modules are
imported only after the environment is configured.
"""

from __future__ import annotations

import argparse
import os
import sys

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)

# config-file keys and their parsers; CLI flags override config values
_KEYS = {
    "problem": str,
    "k": str,
    "nx": int,
    "ny": int,
    "cfl": float,
    "integrator": str,
    "t_final": float,
    "out": str,
    "snapshot_every": int,
    "energy_every": int,
    "threads": int,
    "meshes": str,
}


def read_config(path: str) -> dict:
    """Flat key=value file; '#' starts a comment, blank lines ignored."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key '{key}'")
            try:
                values[key] = _KEYS[key](val.strip())
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad value for '{key}'")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="temax",
        description="Constraint-preserving solver for the 2-D transverse-"
                    "electric Maxwell equations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--problem", help="planewave, gaussian_pulse, "
                                         "refraction_beam, or tir_beam")
        p.add_argument("--cfl", type=float)
        p.add_argument("--integrator",
                       help="ssprk1, ssprk2, ssprk3, ssprk54, or rk4")
        p.add_argument("--t-final", type=float, dest="t_final")
        p.add_argument("--out", help="output directory")
        p.add_argument("--threads", type=int,
                       help="BLAS worker threads (default: all cores)")

    p_run = sub.add_parser("run", help="run one simulation")
    common(p_run)
    p_run.add_argument("--k", help="polynomial degree, 0..4")
    p_run.add_argument("--nx", type=int)
    p_run.add_argument("--ny", type=int)
    p_run.add_argument("--snapshot-every", type=int, dest="snapshot_every",
                       help="write a field snapshot every N steps")
    p_run.add_argument("--energy-every", type=int, dest="energy_every",
                       help="energy.csv row cadence in steps")

    p_conv = sub.add_parser("converge", help="run a mesh-refinement study")
    common(p_conv)
    p_conv.add_argument("--k", help="degree or comma list, e.g. 1,2")
    p_conv.add_argument("--meshes", help="comma list of cells per side, "
                                         "e.g. 16,32,64,128")
    return parser


def _merge(args, keys):
    """Flag value if given, else config-file value, else None."""
    config = read_config(args.config) if args.config else {}
    merged = {}
    for key in keys:
        val = getattr(args, key, None)
        if val is None:
            val = config.get(key)
        merged[key] = val
    return merged


def _require(merged, key):
    if merged.get(key) is None:
        raise ValueError(f"missing required option --{key.replace('_', '-')}")
    return merged[key]


def _parse_degree(text) -> int:
    try:
        k = int(text)
    except (TypeError, ValueError):
        raise ValueError(f"unsupported degree {text!r} (expected 0..4)")
    if k not in (0, 1, 2, 3, 4):
        raise ValueError(f"unsupported degree {k} (expected 0..4)")
    return k


def _int_list(text, what) -> list:
    try:
        return [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"bad {what} list {text!r}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        merged = _merge(args, _KEYS)
        if merged.get("threads") is not None:
            if merged["threads"] < 1:
                raise ValueError("threads must be at least 1")
            for var in _THREAD_VARS:
                os.environ[var] = str(merged["threads"])
        # numpy-dependent imports only after the thread env is fixed
        from . import runner

        if args.command == "run":
            params = runner.RunParams(
                problem=_require(merged, "problem"),
                k=_parse_degree(_require(merged, "k")),
                nx=merged["nx"], ny=merged["ny"], cfl=merged["cfl"],
                integrator=merged["integrator"], t_final=merged["t_final"],
                out_dir=merged["out"],
                snapshot_every=merged["snapshot_every"] or 0,
                energy_every=merged["energy_every"])
            result = runner.run(params)
            _print_run_summary(result)
        else:
            ks = [_parse_degree(tok) for tok in
                  str(_require(merged, "k")).split(",") if tok.strip()]
            meshes = _int_list(_require(merged, "meshes"), "mesh")
            rows = runner.converge(
                _require(merged, "problem"), ks, meshes,
                out_dir=merged["out"], cfl=merged["cfl"],
                integrator=merged["integrator"], t_final=merged["t_final"])
            _print_convergence(rows)
    except ValueError as exc:
        print(f"temax: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"temax: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        from . import runner
        if isinstance(exc, runner.BlowUpError):
            print(f"temax: error: {exc}", file=sys.stderr)
            return 3
        raise
    return 0


def _print_run_summary(result) -> None:
    s = result.summary
    print(f"{s['problem']} k={s['k']} {s['nx']}x{s['ny']} "
          f"{s['integrator']} cfl={s['cfl']:g}: "
          f"{s['n_steps']} steps, dt={s['dt']:.6g} s")
    print(f"  E_h {s['e_h_initial']:.12g} -> {s['e_h_final']:.12g}"
          f"  compat drift {s['compat_drift_max']:.3g}"
          f"  div max {s['div_max_final']:.3g}")
    if "errors" in s:
        e = s["errors"]
        print(f"  errors: D L1 {e['d_l1']:.6g}  D L2 {e['d_l2']:.6g}  "
              f"Bz L1 {e['bz_l1']:.6g}  Bz L2 {e['bz_l2']:.6g}")
    if result.params.out_dir:
        print(f"  wrote {result.params.out_dir}")


def _print_convergence(rows) -> None:
    header = f"{'k':>2} {'nx':>5} {'D L1':>12} {'D L2':>12} " \
             f"{'Bz L1':>12} {'Bz L2':>12} {'ord(Bz L2)':>11}"
    print(header)
    for row in rows:
        order = row["ord_bz_l2"]
        order_s = f"{order:.2f}" if order is not None else "-"
        print(f"{row['k']:>2} {row['nx']:>5} {row['d_l1']:>12.4e} "
              f"{row['d_l2']:>12.4e} {row['bz_l1']:>12.4e} "
              f"{row['bz_l2']:>12.4e} {order_s:>11}")


if __name__ == "__main__":
    sys.exit(main())

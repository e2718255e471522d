"""Run orchestration: time loop, monitors, and machine-readable outputs.

Outputs are deterministic: no timestamps or wall-clock values are written,
floats are formatted with round-trip precision, and all reductions happen
in fixed order, so rerunning a configuration reproduces every file byte for
byte.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import diagnostics, problems, timestepping
from .mesh import Mesh
from .solver import Operators

SCHEMA_LINE = "# schema-version: 1"
_DIV_SEED = 0xD17  # mixed with the step index for the divergence sampler


class BlowUpError(RuntimeError):
    def __init__(self, step: int, t: float):
        super().__init__(
            f"solution became non-finite at step {step} (t = {t:.6g} s)")
        self.step = step
        self.t = t


@dataclass
class RunParams:
    problem: str
    k: int
    nx: Optional[int] = None
    ny: Optional[int] = None
    cfl: Optional[float] = None
    integrator: Optional[str] = None
    t_final: Optional[float] = None
    out_dir: Optional[str] = None
    snapshot_every: int = 0
    energy_every: Optional[int] = None  # default: ~512 rows per run

    def resolved(self, prob: problems.Problem) -> "RunParams":
        p = RunParams(**self.__dict__)
        if p.nx is None:
            p.nx = prob.default_cells[0]
        if p.ny is None:
            p.ny = prob.default_cells[1]
        if p.cfl is None:
            p.cfl = timestepping.DEFAULT_CFL[p.k]
        if p.integrator is None:
            p.integrator = timestepping.DEFAULT_SCHEME[p.k]
        if p.t_final is None:
            p.t_final = prob.t_final
        return p


@dataclass
class RunResult:
    params: RunParams
    ops: Operators
    state: object
    sampler: diagnostics.FieldSampler
    n_steps: int
    dt: float
    summary: dict
    energy_rows: list = field(default_factory=list)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _row_steps(n_steps: int, every: Optional[int], snapshot_every: int):
    """Steps at which monitors are evaluated (always 0 and n_steps)."""
    if every is None:
        every = max(1, -(-n_steps // 512))
    marks = set(range(0, n_steps + 1, every))
    if snapshot_every > 0:
        marks.update(range(0, n_steps + 1, snapshot_every))
    marks.add(n_steps)
    return sorted(marks)


def run(params: RunParams, on_state=None) -> RunResult:
    """Integrate one configuration and (optionally) write its artifacts.

    on_state, if given, is called as on_state(step, t, state) at every
    monitor step; tests use it to watch invariants mid-run.
    """
    if params.integrator is not None \
            and params.integrator not in timestepping.SCHEMES:
        raise ValueError(f"unknown integrator '{params.integrator}'")
    prob = problems.get(params.problem)
    params = params.resolved(prob)
    mesh = Mesh(params.nx, params.ny, *prob.bounds)
    ops = Operators(mesh, prob.material, params.k)
    state = problems.project_initial(prob, mesh, params.k)
    sampler = diagnostics.FieldSampler(ops)

    dt_cfl = timestepping.compute_dt(mesh, prob.material, params.cfl)
    n_steps = max(1, math.ceil(params.t_final / dt_cfl - 1e-9))
    dt = params.t_final / n_steps

    res0 = diagnostics.compat_residuals(state, mesh)
    marks = _row_steps(n_steps, params.energy_every, params.snapshot_every)
    energy_rows = []
    snapshots = []

    out = params.out_dir
    if out is not None:
        os.makedirs(out, exist_ok=True)

    def monitor(step: int, t: float):
        e_h, e_star = sampler.energy(state)
        drift = float(np.max(np.abs(
            diagnostics.compat_residuals(state, mesh) - res0)))
        div = diagnostics.divergence_max(ops, state, (_DIV_SEED, step))
        energy_rows.append((t, e_h, e_star, drift, div))
        if out is not None and params.snapshot_every > 0 \
                and (step % params.snapshot_every == 0 or step == n_steps):
            path = os.path.join(out, f"snapshot_{step:06d}.txt")
            write_snapshot(path, prob, params, mesh, sampler, state, t)
            snapshots.append(os.path.basename(path))
        if on_state is not None:
            on_state(step, t, state)

    monitor(0, 0.0)
    for step in range(1, n_steps + 1):
        state = timestepping.step(state, dt, ops.rhs, params.integrator)
        if not state.is_finite():
            raise BlowUpError(step, step * dt)
        if step in marks:
            monitor(step, step * dt)

    summary = {
        "schema_version": 1,
        "problem": params.problem,
        "k": params.k,
        "nx": params.nx,
        "ny": params.ny,
        "cfl": params.cfl,
        "integrator": params.integrator,
        "t_final": params.t_final,
        "n_steps": n_steps,
        "dt": dt,
        "e_h_initial": energy_rows[0][1],
        "e_h_final": energy_rows[-1][1],
        "e_star_initial": energy_rows[0][2],
        "e_star_final": energy_rows[-1][2],
        "compat_drift_max": max(r[3] for r in energy_rows),
        "div_max_final": energy_rows[-1][4],
        "snapshots": snapshots,
    }
    if energy_rows[0][1] > 0.0:
        summary["e_h_drift_rel"] = (
            abs(energy_rows[-1][1] - energy_rows[0][1]) / energy_rows[0][1])
    if prob.exact is not None:
        errs = sampler.error_norms(state, prob.exact, params.t_final)
        summary["errors"] = {
            "d_l1": errs[0], "d_l2": errs[1],
            "bz_l1": errs[2], "bz_l2": errs[3],
        }

    if out is not None:
        write_energy_csv(os.path.join(out, "energy.csv"), energy_rows)
        with open(os.path.join(out, "summary.json"), "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return RunResult(params, ops, state, sampler, n_steps, dt, summary,
                     energy_rows)


def write_energy_csv(path: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(SCHEMA_LINE + "\n")
        fh.write("t,E_h,E_star_h,compat_max,div_max\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_snapshot(path: str, prob, params, mesh, sampler, state, t) -> None:
    d_x, d_y, b_z = sampler.center_fields(state)
    xc, yc = mesh.cell_centers()
    with open(path, "w") as fh:
        fh.write(SCHEMA_LINE + "\n")
        fh.write(f"# problem: {prob.name}\n")
        fh.write(f"# k: {params.k}\n")
        fh.write(f"# nx: {mesh.nx}\n")
        fh.write(f"# ny: {mesh.ny}\n")
        fh.write("# bounds: " + " ".join(
            _fmt(v) for v in (mesh.x0, mesh.x1, mesh.y0, mesh.y1)) + "\n")
        fh.write(f"# t: {_fmt(t)}\n")
        fh.write("# columns: x y D_x D_y B_z\n")
        for i in range(mesh.nx):
            for j in range(mesh.ny):
                fh.write(" ".join((
                    _fmt(xc[i]), _fmt(yc[j]), _fmt(d_x[i, j]),
                    _fmt(d_y[i, j]), _fmt(b_z[i, j]))) + "\n")


def converge(problem_name: str, ks, mesh_sizes, out_dir=None, cfl=None,
             integrator=None, t_final=None):
    """Run a refinement study; returns one row dict per (k, mesh).

    The plane wave compares against its exact solution. Problems without
    one are compared against the finest-mesh run of the same order,
    evaluated at each coarse mesh's quadrature points.
    """
    prob = problems.get(problem_name)
    rows = []
    for k in ks:
        results = []
        for n in mesh_sizes:
            params = RunParams(problem_name, k, nx=n, ny=n, cfl=cfl,
                               integrator=integrator, t_final=t_final,
                               energy_every=10 ** 9)
            results.append(run(params))
        if prob.exact is not None:
            errs = [r.summary["errors"] for r in results]
            errs = [(e["d_l1"], e["d_l2"], e["bz_l1"], e["bz_l2"])
                    for e in errs]
        else:
            ref = results[-1]
            errs = [diagnostics.reference_errors(r.sampler, r.state,
                                                 ref.ops, ref.state)
                    for r in results[:-1]]
        orders = [diagnostics.convergence_orders([e[c] for e in errs])
                  for c in range(4)]
        for i, err in enumerate(errs):
            row = {"k": k, "nx": mesh_sizes[i],
                   "d_l1": err[0], "d_l2": err[1],
                   "bz_l1": err[2], "bz_l2": err[3]}
            for c, name in enumerate(("d_l1", "d_l2", "bz_l1", "bz_l2")):
                row["ord_" + name] = None if i == 0 else orders[c][i - 1]
            rows.append(row)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_convergence_csv(os.path.join(out_dir, "convergence.csv"), rows)
    return rows


def write_convergence_csv(path: str, rows) -> None:
    names = ("k", "nx", "d_l1", "d_l2", "bz_l1", "bz_l2",
             "ord_d_l1", "ord_d_l2", "ord_bz_l1", "ord_bz_l2")
    with open(path, "w") as fh:
        fh.write(SCHEMA_LINE + "\n")
        fh.write(",".join(names) + "\n")
        for row in rows:
            vals = []
            for name in names:
                v = row[name]
                if v is None:
                    vals.append("")
                elif isinstance(v, int):
                    vals.append(str(v))
                else:
                    vals.append(_fmt(v))
            fh.write(",".join(vals) + "\n")

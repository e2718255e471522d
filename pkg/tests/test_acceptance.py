"""Acceptance suite: one test, and one printed PASS/FAIL line, per
advertised guarantee of the solver and its plotting companion.

Budget on a single core is dominated by the two full-mesh scattering runs
(roughly 50 minutes together); the plane-wave order study and the energy
trend study add about 20 more. Set TEMAX_ACCEPT_FULL=1 to extend the
degree-4 order study to the largest mesh (adds roughly 15 minutes);
by default its orders are measured on the 8..64 sequence.

Run with `pytest tests/test_acceptance.py -v` (add -s to see the detail
lines of passing checks).
"""

import os
import warnings

import numpy as np
import pytest

from temax import diagnostics, problems, reconstruction, riemann, runner
from temax.mesh import Mesh
from temax.solver import Operators
from temax.timestepping import compute_dt

from oracles import exact_monic_tables, stream_tables, upwind_flux_states

FULL = os.environ.get("TEMAX_ACCEPT_FULL") == "1"

# time steps small enough that time-integration error stays subdominant
# in the order measurement at every mesh of the study
STUDY_CFL = {1: 0.12, 2: 0.13, 3: 0.08, 4: 0.05}


def report(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def quiet_run(params: runner.RunParams) -> runner.RunResult:
    # beams and the pulse are not exactly periodic, so their projection
    # warns about the initial residual; that is expected here
    with warnings.catch_warnings():
        warnings.filterwarnings(
            "ignore", message=".*not divergence-compatible.*")
        return runner.run(params)


@pytest.fixture(scope="module")
def wave_tables():
    """Plane-wave refinement studies, one ladder per degree."""
    tables = {}
    for k in (1, 2, 3):
        tables[k] = runner.converge("planewave", [k], [16, 32, 64, 128],
                                    cfl=STUDY_CFL[k])
    meshes = [8, 16, 32, 64] + ([128] if FULL else [])
    tables[4] = runner.converge("planewave", [4], meshes, cfl=STUDY_CFL[4])
    return tables


def test_planewave_orders_match_degree(wave_tables):
    details = []
    ok = True
    for k, rows in wave_tables.items():
        finest = rows[-1]
        orders = [finest["ord_" + c]
                  for c in ("d_l1", "d_l2", "bz_l1", "bz_l2")]
        details.append(f"k={k}: " + "/".join(f"{o:.2f}" for o in orders))
        ok &= all(abs(o - (k + 1)) <= 0.35 for o in orders)
    report("order of accuracy is degree plus one", ok, " | ".join(details))


def test_planewave_absolute_error_levels(wave_tables):
    # reference L2(B_z) levels for the two finest mid-degree runs; the
    # factor 2 absorbs differing time-integrator constants
    refs = {1: 3.8629e-4, 2: 2.4074e-5}
    details = []
    ok = True
    for k, ref in refs.items():
        row = [r for r in wave_tables[k] if r["nx"] == 128][0]
        got = row["bz_l2"]
        details.append(f"k={k} 128x128 L2(Bz) {got:.4e} vs {ref:.4e} "
                       f"(x{got / ref:.2f})")
        ok &= ref / 2 <= got <= ref * 2
    report("absolute plane-wave error levels", ok, "; ".join(details))


# coarsened meshes for the constraint sweep: the identities under test are
# resolution independent, and the full scattering meshes get their own run
CONSTRAINT_CASES = [
    ("planewave", 32, 32),
    ("gaussian_pulse", 50, 50),
    ("refraction_beam", 65, 48),
    ("tir_beam", 35, 43),
]


def test_constraints_preserved_on_every_problem():
    worst_compat = 0.0
    worst_div = 0.0
    worst_abs = 0.0
    for name, nx, ny in CONSTRAINT_CASES:
        for k in range(5):
            res = quiet_run(runner.RunParams(name, k, nx=nx, ny=ny,
                                             energy_every=10 ** 9,
                                             snapshot_every=0))
            prob = problems.get(name)
            mesh = res.ops.mesh
            with warnings.catch_warnings():
                warnings.filterwarnings(
                    "ignore", message=".*not divergence-compatible.*")
                state0 = problems.project_initial(prob, mesh, k)
            scale = diagnostics.field_scale(state0)

            drift = res.summary["compat_drift_max"]
            budget = 1e-11 * scale * res.n_steps
            worst_compat = max(worst_compat, drift / budget)

            # pointwise divergence drift at 4 fixed random points per cell
            rng = np.random.default_rng(97)
            pts = (rng.uniform(-0.5, 0.5, (mesh.nx, mesh.ny, 4)),
                   rng.uniform(-0.5, 0.5, (mesh.nx, mesh.ny, 4)))
            div0 = diagnostics.divergence_samples(
                res.ops, *res.ops.recon_tables(state0), *pts)
            div1 = diagnostics.divergence_samples(
                res.ops, *res.ops.recon_tables(res.state), *pts)
            dscale = diagnostics.div_scale(state0, mesh)
            worst_div = max(worst_div,
                            np.max(np.abs(div1 - div0)) / (1e-12 * dscale))

            if name == "planewave":
                # exactly periodic data: the absolute bound applies too
                absdiv = max(row[4] for row in res.energy_rows)
                worst_abs = max(worst_abs, absdiv / (1e-12 * dscale))
    ok = worst_compat <= 1.0 and worst_div <= 1.0 and worst_abs <= 1.0
    report("constraints preserved on every problem and degree", ok,
           f"worst compat drift {worst_compat:.2e} of budget, worst "
           f"divergence drift {worst_div:.2e} of budget, worst absolute "
           f"divergence {worst_abs:.2e} of budget over "
           f"{5 * len(CONSTRAINT_CASES)} runs")


def test_divergence_free_reconstruction_is_exact():
    dmat, end_plus, end_minus = exact_monic_tables()
    rng = np.random.default_rng(2024)
    worst = 0.0
    count = 0
    for k in range(5):
        n_m = reconstruction.N_MOMENTS[k]
        for dx in (0.1, 1.0, 10.0):
            dy = 1.0
            for _ in range(334):
                c = rng.integers(-9, 10, (6, 6)).astype(float)
                for m in range(6):
                    for n in range(6):
                        if m + n > k + 1:
                            c[m, n] = 0.0
                tx, ty = stream_tables(c, dx, dy, dmat)
                a_plus = (end_plus @ tx)[:k + 1]
                a_minus = (end_minus @ tx)[:k + 1]
                b_plus = (ty @ end_plus)[:k + 1]
                b_minus = (ty @ end_minus)[:k + 1]
                if n_m:
                    omega = reconstruction.moments_from_function(
                        _table_fn(tx), _table_fn(ty), k)
                else:
                    omega = np.zeros(0)
                field = reconstruction.reconstruct(
                    k, a_minus, a_plus, b_minus, b_plus, omega, dx, dy)
                scale = max(np.abs(tx).max(), np.abs(ty).max())
                if scale == 0.0:
                    continue
                err = max(np.abs(field.ax - tx).max(),
                          np.abs(field.by - ty).max())
                worst = max(worst, err / scale)
                count += 1
    ok = worst <= 1e-12
    report("divergence-free fields are recovered to the coefficient", ok,
           f"worst relative coefficient error {worst:.2e} over {count} "
           f"fields (degrees 0..4, aspect ratios 0.1/1/10)")


def _table_fn(table):
    from temax import basis

    def f(xi, eta):
        out = np.zeros(np.broadcast(np.asarray(xi), np.asarray(eta)).shape)
        for m in range(6):
            for n in range(6):
                if table[m, n] != 0.0:
                    out = out + table[m, n] * basis.phi(m, xi) * basis.phi(n, eta)
        return out

    return f


def test_interface_solver_matches_characteristic_upwinding():
    rng = np.random.default_rng(7031)
    worst_1d = 0.0
    for _ in range(1000):
        left = rng.standard_normal(3)
        right = rng.standard_normal(3)
        eps = float(np.exp(rng.normal()))
        mu = float(np.exp(rng.normal()))
        normal = (1, 0) if rng.integers(2) else (0, 1)
        tang = 1 if normal[0] == 1 else 0
        hz, et = riemann.riemann_1d(normal[0], normal[1], left[tang],
                                    right[tang], left[2], right[2], eps, mu)
        hz_o, et_o = upwind_flux_states(normal[0], normal[1], left[:2],
                                        right[:2], left[2], right[2], eps, mu)
        scale = max(np.abs(left).max(), np.abs(right).max()) / min(eps, mu)
        worst_1d = max(worst_1d, abs(hz - hz_o) / scale,
                       abs(et - et_o) / scale)

    worst_2d = 0.0
    for _ in range(1000):
        p = rng.standard_normal(3)
        q = rng.standard_normal(3)
        eps = float(np.exp(rng.normal()))
        mu = float(np.exp(rng.normal()))
        h = float(np.exp(rng.normal()))
        scale = max(np.abs(p).max(), np.abs(q).max()) / mu
        hz2 = riemann.riemann_2d(p[0], q[0], p[0], q[0],
                                 p[1], q[1], p[1], q[1],
                                 p[2], q[2], p[2], q[2], eps, mu, h, h)
        hz1, _ = riemann.riemann_1d(1, 0, p[1], q[1], p[2], q[2], eps, mu)
        worst_2d = max(worst_2d, abs(hz2 - hz1) / scale)
        hz2 = riemann.riemann_2d(p[0], p[0], q[0], q[0],
                                 p[1], p[1], q[1], q[1],
                                 p[2], p[2], q[2], q[2], eps, mu, h, h)
        hz1, _ = riemann.riemann_1d(0, 1, p[0], q[0], p[2], q[2], eps, mu)
        worst_2d = max(worst_2d, abs(hz2 - hz1) / scale)
    ok = worst_1d <= 1e-13 and worst_2d <= 1e-13
    report("interface solvers match characteristic upwinding", ok,
           f"1-D worst {worst_1d:.2e}, vertex-reduction worst {worst_2d:.2e} "
           f"over 1000 samples each")


def test_lowest_order_energy_never_increases():
    details = []
    ok = True
    for nx, ny in ((64, 64), (64, 48)):
        mesh = Mesh(nx, ny, *problems.get("planewave").bounds)
        dt = compute_dt(mesh, problems.get("planewave").material, 0.45)
        res = quiet_run(runner.RunParams(
            "planewave", 0, nx=nx, ny=ny, cfl=0.45,
            t_final=500 * dt * 0.9999, energy_every=1))
        estar = np.array([row[2] for row in res.energy_rows])
        rise = np.diff(estar).max() / estar[0]
        details.append(f"{nx}x{ny}: {res.n_steps} steps, worst per-step "
                       f"rise {rise:.2e}, net change "
                       f"{(estar[-1] - estar[0]) / estar[0]:.2e}")
        ok &= res.n_steps == 500 and rise <= 1e-12 and estar[-1] < estar[0]
    report("facial energy never increases at lowest order", ok,
           "; ".join(details))


def test_energy_drift_shrinks_with_degree_and_mesh():
    drift = {}
    for n in (100, 200):
        for k in (1, 2, 3, 4):
            res = quiet_run(runner.RunParams("gaussian_pulse", k, nx=n, ny=n,
                                             energy_every=10 ** 9))
            drift[k, n] = res.summary["e_h_drift_rel"]
    lines = [f"k={k} 100^2 {drift[k, 100]:.2e} 200^2 {drift[k, 200]:.2e}"
             for k in (1, 2, 3, 4)]
    ok = all(drift[k + 1, n] < drift[k, n]
             for k in (1, 2, 3) for n in (100, 200))
    ok &= all(drift[k, 200] < drift[k, 100] for k in (1, 2, 3, 4))
    ok &= drift[4, 200] == min(drift.values())
    report("energy drift shrinks with degree and mesh", ok,
           " | ".join(lines))


def test_scattering_runs_stay_finite_and_physical():
    # interface problems at their production meshes and final times
    refr = quiet_run(runner.RunParams("refraction_beam", 2,
                                      energy_every=10 ** 9))
    _, _, bz = refr.sampler.center_fields(refr.state)
    xc, yc = refr.ops.mesh.cell_centers()
    w = bz ** 2
    sel = xc > 1.0e-6  # past the interface region
    wt = w[sel, :]
    cx = float((wt * xc[sel, None]).sum() / wt.sum())
    cy = float((wt * yc[None, :]).sum() / wt.sum())
    trans = float(wt.sum() / w.sum())
    refr_ok = (refr.state.is_finite() and cx > 1.5e-6 and cy > 0.0
               and cy / cx < 0.75 and trans > 0.2)

    tir = quiet_run(runner.RunParams("tir_beam", 2, energy_every=10 ** 9))
    _, _, bz = tir.sampler.center_fields(tir.state)
    xc, yc = tir.ops.mesh.cell_centers()
    w = bz ** 2
    incident = float(w[xc < 0.0, :].sum() / w.sum())
    tir_ok = tir.state.is_finite() and incident > 0.9

    report("scattering runs stay finite and physical",
           refr_ok and tir_ok,
           f"refraction: transmitted share {trans:.3f}, blob centroid "
           f"({cx * 1e6:.2f}, {cy * 1e6:.2f}) um, direction {cy / cx:.3f} "
           f"(incident 1.0, refracted normal-ward); total reflection: "
           f"incident-side share {incident:.4f}")


def test_plot_scripts_render_solver_output(tmp_path):
    import subprocess
    import sys
    from pathlib import Path

    # a small degree sweep and a snapshot, end to end through the CLI
    csvs = []
    for k in (1, 2, 3, 4):
        out = tmp_path / f"k{k}"
        quiet_run(runner.RunParams("planewave", k, nx=16, ny=16,
                                   t_final=3.5e-10, out_dir=str(out),
                                   snapshot_every=10 ** 6, energy_every=1))
        csvs.append(str(out / "energy.csv"))
    snap = next((tmp_path / "k2").glob("snapshot_0*.txt"))

    scripts = Path(__file__).resolve().parents[1] / "scripts"
    fig_e = tmp_path / "energy.png"
    fig_b = tmp_path / "bz.png"
    r1 = subprocess.run([sys.executable, str(scripts / "plot_energy.py"),
                         *csvs, "--out", str(fig_e)], capture_output=True)
    r2 = subprocess.run([sys.executable, str(scripts / "plot_field.py"),
                         str(snap), "--field", "Bz", "--out", str(fig_b)],
                        capture_output=True)
    rendered = (r1.returncode == 0 and r2.returncode == 0
                and fig_e.read_bytes()[:4] == b"\x89PNG"
                and fig_b.read_bytes()[:4] == b"\x89PNG")

    broken = tmp_path / "broken.csv"
    broken.write_text("t,E_h\n0,1\n")
    r3 = subprocess.run([sys.executable, str(scripts / "plot_energy.py"),
                         str(broken), "--out", str(tmp_path / "x.png")],
                        capture_output=True)
    report("plot scripts render solver output and reject bad schema",
           rendered and r3.returncode == 2,
           f"energy overlay {fig_e.stat().st_size} bytes, field image "
           f"{fig_b.stat().st_size} bytes, schema violation exit "
           f"{r3.returncode}")

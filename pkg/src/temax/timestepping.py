"""Explicit Runge-Kutta integrators and CFL time-step control.

All schemes are written as Shu-Osher convex combinations
u_new = sum_i alpha_i u_i + dt beta_i F(u_i); states only need +, * and the
rhs evaluator. The compatibility functional is linear and preserved by every
rhs evaluation, so any combination preserves it too.
"""

from __future__ import annotations

import numpy as np

# per-degree defaults; the CFL values sit at roughly 75-80% of the blow-up
# thresholds measured by tools/cfl_scan.py (plane wave, 64x64: 0.61, 0.27,
# 0.17, 0.22, 0.15)
DEFAULT_CFL = {0: 0.45, 1: 0.21, 2: 0.13, 3: 0.17, 4: 0.12}
DEFAULT_SCHEME = {0: "ssprk1", 1: "ssprk2", 2: "ssprk3", 3: "ssprk54", 4: "ssprk54"}

SCHEMES = ("ssprk1", "ssprk2", "ssprk3", "ssprk54", "rk4")


def step(state, dt: float, rhs, scheme: str):
    """Advance one step. `state` must support u + v and scalar * u; `rhs`
    maps a state to its time derivative (same algebra)."""
    if scheme == "ssprk1":
        return state + dt * rhs(state)
    if scheme == "ssprk2":
        u1 = state + dt * rhs(state)
        return 0.5 * state + 0.5 * (u1 + dt * rhs(u1))
    if scheme == "ssprk3":
        u1 = state + dt * rhs(state)
        u2 = 0.75 * state + 0.25 * (u1 + dt * rhs(u1))
        return (1.0 / 3.0) * state + (2.0 / 3.0) * (u2 + dt * rhs(u2))
    if scheme == "ssprk54":
        # Spiteri-Ruuth SSPRK(5,4) coefficients
        f0 = rhs(state)
        u1 = state + 0.391752226571890 * dt * f0
        f1 = rhs(u1)
        u2 = 0.444370493651235 * state + 0.555629506348765 * u1 \
            + 0.368410593050371 * dt * f1
        f2 = rhs(u2)
        u3 = 0.620101851488403 * state + 0.379898148511597 * u2 \
            + 0.251891774271694 * dt * f2
        f3 = rhs(u3)
        u4 = 0.178079954393132 * state + 0.821920045606868 * u3 \
            + 0.544974750228521 * dt * f3
        f4 = rhs(u4)
        return 0.517231671970585 * u2 \
            + 0.096059710526147 * u3 + 0.063692468666290 * dt * f3 \
            + 0.386708617503269 * u4 + 0.226007483236906 * dt * f4
    if scheme == "rk4":
        f1 = rhs(state)
        f2 = rhs(state + 0.5 * dt * f1)
        f3 = rhs(state + 0.5 * dt * f2)
        f4 = rhs(state + dt * f3)
        return state + (dt / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
    raise ValueError(f"unknown scheme '{scheme}'")


def compute_dt(mesh, material, cfl: float) -> float:
    """dt such that cfl = max over the mesh of max(c dt/dx, c dt/dy).

    The local speed is sampled at cell centers and at vertices; for the
    smooth built-in profiles this brackets the maximum well.
    """
    if not cfl > 0.0:
        raise ValueError("cfl must be positive")
    xc, yc = mesh.cell_centers()
    xv = mesh.vertical_face_x()
    yv = mesh.horizontal_face_y()
    c_max = 0.0
    for xs, ys in ((xc, yc), (xv, yv)):
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        c_max = max(c_max, float(np.max(material.speed(gx, gy))))
    return cfl / (c_max * max(1.0 / mesh.dx, 1.0 / mesh.dy))

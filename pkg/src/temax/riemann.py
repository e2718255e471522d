"""Upwind Riemann solvers for the TE Maxwell system.

The 1-D solver acts at face quadrature points (interface normal along a
mesh axis) and returns the star values H_z and tangential E shared by every
update that touches the face. The 2-D solver acts at mesh vertices, where
four states meet, and returns the single H_z value that makes the face
updates telescope into global constraint preservation.

All inputs may be numpy arrays of matching shape; eps and mu are the
pointwise material values at the interface location (single-valued).
"""

from __future__ import annotations

import numpy as np


def riemann_1d(nx: int, ny: int, dl, dr, bz_l, bz_r, eps, mu):
    """Star states across a face with unit normal (nx, ny), axis-aligned.

    dl, dr hold the tangential component of D on each side: D_y for a
    vertical face (normal (1,0)), D_x for a horizontal face (normal (0,1)).
    Left is the side the normal points away from. Returns (hz_star, et_star)
    where et_star is the tangential E component (E_y resp. E_x).

    With E_t = (D_y n_x - D_x n_y)/eps the star states are
      B_z* = avg(B_z) - (mu c / 2) (E_t^R - E_t^L) eps ... written in D:
      vertical:   B_z* = avg - (mu c/2)(D_y^R - D_y^L),  D_y* = avg - (eps c/2)(B^R - B^L)
      horizontal: B_z* = avg + (mu c/2)(D_x^U - D_x^D),  D_x* = avg + (eps c/2)(B^U - B^D)
    """
    if (nx, ny) not in ((1, 0), (0, 1)):
        raise ValueError("normal must be a coordinate axis")
    eps = np.asarray(eps, float)
    mu = np.asarray(mu, float)
    if np.any(eps <= 0.0) or np.any(mu <= 0.0):
        raise ValueError("material constants must be positive")
    c = 1.0 / np.sqrt(eps * mu)
    sgn = 1.0 if nx == 1 else -1.0
    bz_star = 0.5 * (bz_l + bz_r) - sgn * 0.5 * mu * c * (np.asarray(dr) - np.asarray(dl))
    d_star = 0.5 * (np.asarray(dl) + np.asarray(dr)) - sgn * 0.5 * eps * c * (np.asarray(bz_r) - np.asarray(bz_l))
    return bz_star / mu, d_star / eps


def riemann_2d(dx_dl, dx_dr, dx_ul, dx_ur,
               dy_dl, dy_dr, dy_ul, dy_ur,
               bz_dl, bz_dr, bz_ul, bz_ur,
               eps, mu, dx: float, dy: float):
    """Vertex H_z from the four corner states (D down-left, ... U up-right).

    Anisotropic form with h = max(dx, dy):
      B_z* = (1/4) sum B_z
             + (mu c h / (2 dy)) [avg_x D_x(up) - avg_x D_x(down)]
             - (mu c h / (2 dx)) [avg_y D_y(right) - avg_y D_y(left)]
    which reduces to the isotropic vertex flux when dx = dy. Returns
    H_z = B_z*/mu.
    """
    eps = np.asarray(eps, float)
    mu = np.asarray(mu, float)
    if np.any(eps <= 0.0) or np.any(mu <= 0.0):
        raise ValueError("material constants must be positive")
    c = 1.0 / np.sqrt(eps * mu)
    h = max(dx, dy)
    bz_star = 0.25 * (bz_dl + bz_dr + bz_ul + bz_ur)
    bz_star = bz_star + (mu * c * h / (2.0 * dy)) * (
        0.5 * (dx_ul + dx_ur) - 0.5 * (dx_dl + dx_dr))
    bz_star = bz_star - (mu * c * h / (2.0 * dx)) * (
        0.5 * (dy_dr + dy_ur) - 0.5 * (dy_dl + dy_ul))
    return bz_star / mu

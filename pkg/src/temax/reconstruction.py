"""Divergence-free in-cell reconstruction of D from face modes.

The face data are modal coefficients of the normal component of D on the
four cell faces (a_j on the vertical pair, b_j on the horizontal pair,
j = 0..k). For k >= 3 the faces no longer determine the interior BDFM
polynomial and curl-type cell moments omega close the system.

A single solver covers k = 0..4: when a face mode is absent it is zero,
and when a moment is not evolved it is replaced by the combination the
published lower-order formulas imply (omega1 -> r2 - r1 for k < 3,
omega2 -> r4 - r3 and omega3 -> r6 - r5 for k < 4). Every coefficient the
lower-order formula sets would zero out then vanishes identically; the
test suite checks this against an independent transcription of each
order's formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basis

# number of evolved cell moments per degree
N_MOMENTS = (0, 0, 0, 1, 3)

# dense coefficient tables are (6, 6): index [m, n] multiplies phi_m(xi) phi_n(eta)
TABLE_SHAPE = (6, 6)


@dataclass
class BDFMField:
    """Reconstructed vector polynomial: D_x = sum ax[m,n] phi_m(xi) phi_n(eta),
    D_y likewise with by. Divergence is constant in the cell and equals the
    face compatibility residual divided by dx*dy."""
    k: int
    ax: np.ndarray
    by: np.ndarray
    dx: float
    dy: float

    def eval(self, xi, eta) -> tuple[np.ndarray, np.ndarray]:
        xi = np.asarray(xi, float)
        eta = np.asarray(eta, float)
        dxv = np.zeros(np.broadcast(xi, eta).shape)
        dyv = np.zeros_like(dxv)
        for m in range(6):
            for n in range(6):
                if self.ax[m, n] != 0.0:
                    dxv = dxv + self.ax[m, n] * basis.phi(m, xi) * basis.phi(n, eta)
                if self.by[m, n] != 0.0:
                    dyv = dyv + self.by[m, n] * basis.phi(m, xi) * basis.phi(n, eta)
        return dxv, dyv

    def divergence(self, xi, eta) -> np.ndarray:
        """(1/dx) dD_x/dxi + (1/dy) dD_y/deta at reference points."""
        xi = np.asarray(xi, float)
        eta = np.asarray(eta, float)
        out = np.zeros(np.broadcast(xi, eta).shape)
        for m in range(6):
            for n in range(6):
                if self.ax[m, n] != 0.0:
                    out = out + self.ax[m, n] / self.dx \
                        * basis.phi_deriv(m, xi) * basis.phi(n, eta)
                if self.by[m, n] != 0.0:
                    out = out + self.by[m, n] / self.dy \
                        * basis.phi(m, xi) * basis.phi_deriv(n, eta)
        return out


def compatibility_residual(a_minus, a_plus, b_minus, b_plus, dx: float, dy: float) -> float:
    """(a0+ - a0-) dy + (b0+ - b0-) dx; zero for solenoidal face data."""
    return (a_plus[0] - a_minus[0]) * dy + (b_plus[0] - b_minus[0]) * dx


def reconstruct(k: int, a_minus, a_plus, b_minus, b_plus, omega,
                dx: float, dy: float) -> BDFMField:
    """Solve the divergence-free reconstruction problem for one cell.

    a_minus/a_plus are the k+1 modal coefficients of D_x on the left/right
    faces, b_minus/b_plus those of D_y on the bottom/top faces, and omega the
    N_MOMENTS[k] evolved cell moments (ignored below the order that needs
    them). The returned field matches the face traces exactly and has
    pointwise zero divergence whenever the face data are compatible.
    """
    if not 0 <= k <= 4:
        raise ValueError(f"unsupported degree {k}")
    am = np.zeros(5)
    ap = np.zeros(5)
    bm = np.zeros(5)
    bp = np.zeros(5)
    am[: k + 1] = a_minus
    ap[: k + 1] = a_plus
    bm[: k + 1] = b_minus
    bp[: k + 1] = b_plus
    omega = np.asarray(omega, float).ravel()
    if len(omega) != N_MOMENTS[k]:
        raise ValueError(f"degree {k} needs {N_MOMENTS[k]} cell moments, got {len(omega)}")

    R = dx / dy
    Q = dy / dx

    r1 = 0.5 * (am[1] + ap[1])
    r2 = 0.5 * (bm[1] + bp[1])
    r3 = ap[1] - am[1]
    r4 = 0.5 * (bm[2] + bp[2])
    r5 = 0.5 * (am[2] + ap[2])
    r6 = bp[1] - bm[1]

    om1 = omega[0] if k >= 3 else r2 - r1
    om2 = omega[1] if k >= 4 else r4 - r3
    om3 = omega[2] if k >= 4 else r6 - r5

    ax = np.zeros(TABLE_SHAPE)
    by = np.zeros(TABLE_SHAPE)

    # directly solvable coefficients (trace matching + divergence conditions)
    ax[0, 0] = 0.5 * (am[0] + ap[0]) + (bp[1] - bm[1]) * R / 12.0
    ax[1, 0] = (ap[0] - am[0]) + (bp[2] - bm[2]) * R / 30.0
    ax[2, 0] = -0.5 * (bp[1] - bm[1]) * R + 3.0 / 140.0 * (bp[3] - bm[3]) * R
    ax[3, 0] = -(bp[2] - bm[2]) * R / 3.0 + (bp[4] - bm[4]) * R / 63.0
    ax[4, 0] = -0.25 * (bp[3] - bm[3]) * R
    ax[5, 0] = -0.2 * (bp[4] - bm[4]) * R
    ax[0, 3] = 0.5 * (am[3] + ap[3])
    ax[1, 2] = ap[2] - am[2]
    ax[1, 3] = ap[3] - am[3]
    ax[0, 4] = 0.5 * (am[4] + ap[4])
    ax[1, 4] = ap[4] - am[4]

    by[0, 0] = 0.5 * (bm[0] + bp[0]) + (ap[1] - am[1]) * Q / 12.0
    by[0, 1] = (bp[0] - bm[0]) + (ap[2] - am[2]) * Q / 30.0
    by[0, 2] = -0.5 * (ap[1] - am[1]) * Q + 3.0 / 140.0 * (ap[3] - am[3]) * Q
    by[0, 3] = -(ap[2] - am[2]) * Q / 3.0 + (ap[4] - am[4]) * Q / 63.0
    by[0, 4] = -0.25 * (ap[3] - am[3]) * Q
    by[0, 5] = -0.2 * (ap[4] - am[4]) * Q
    by[3, 0] = 0.5 * (bm[3] + bp[3])
    by[2, 1] = bp[2] - bm[2]
    by[3, 1] = bp[3] - bm[3]
    by[4, 0] = 0.5 * (bm[4] + bp[4])
    by[4, 1] = bp[4] - bm[4]

    # moment-closed subsystems
    a01 = (r1 * Q + r2 - om1) / (1.0 + Q)
    b10 = om1 + a01
    ax[0, 1] = a01
    ax[2, 1] = 6.0 * (r1 - a01)
    by[1, 0] = b10
    by[1, 2] = 6.0 * (r2 - b10)

    a11 = (5.0 * r3 * Q + 2.0 * r4 - 2.0 * om2) / (2.0 + 5.0 * Q)
    ax[1, 1] = a11
    ax[3, 1] = 10.0 * (r3 - a11)
    by[2, 0] = om2 + a11
    by[2, 2] = 6.0 * (r4 - by[2, 0])

    a02 = (2.0 * r5 * Q + 5.0 * r6 - 5.0 * om3) / (5.0 + 2.0 * Q)
    ax[0, 2] = a02
    ax[2, 2] = 6.0 * (r5 - a02)
    by[1, 1] = om3 + a02
    by[1, 3] = 10.0 * (r6 - by[1, 1])

    return BDFMField(k=k, ax=ax, by=by, dx=dx, dy=dy)


def moments_from_function(dx_fn, dy_fn, k: int, nq: int = 10) -> np.ndarray:
    """Cell moments of a pointwise field given in reference coordinates.

    omega1 = b10 - a01 = 12 iint (D_y xi - D_x eta),
    omega2 = b20 - a11 = iint (180 D_y phi2(xi) - 144 D_x phi1(xi) phi1(eta)),
    omega3 = b11 - a02 = iint (144 D_y phi1(xi) phi1(eta) - 180 D_x phi2(eta)).
    Returns the N_MOMENTS[k] active ones.
    """
    n = N_MOMENTS[k]
    if n == 0:
        return np.zeros(0)
    pts, w = basis.gauss_legendre(nq)
    xi, eta = np.meshgrid(pts, pts, indexing="ij")
    ww = np.outer(w, w)
    fx = dx_fn(xi, eta)
    fy = dy_fn(xi, eta)
    om = np.empty(3)
    om[0] = 12.0 * np.sum(ww * (fy * xi - fx * eta))
    om[1] = np.sum(ww * (180.0 * fy * basis.phi(2, xi)
                         - 144.0 * fx * basis.phi(1, xi) * basis.phi(1, eta)))
    om[2] = np.sum(ww * (144.0 * fy * basis.phi(1, xi) * basis.phi(1, eta)
                         - 180.0 * fx * basis.phi(2, eta)))
    return om[:n]


def operator_matrices(k: int, dx: float, dy: float) -> tuple[np.ndarray, np.ndarray]:
    """Linear maps from stacked face/moment data to dense coefficient tables.

    Input layout: [a_minus (k+1), a_plus (k+1), b_minus (k+1), b_plus (k+1),
    omega (N_MOMENTS[k])]. Returns (Ra, Rb) with shapes (36, n_in) so that
    ax.ravel() = Ra @ data and by.ravel() = Rb @ data. Assembled by probing
    the scalar solver with unit vectors; reconstruction is linear.
    """
    p = k + 1
    n_in = 4 * p + N_MOMENTS[k]
    ra = np.zeros((36, n_in))
    rb = np.zeros((36, n_in))
    for col in range(n_in):
        data = np.zeros(n_in)
        data[col] = 1.0
        f = reconstruct(k, data[0:p], data[p:2 * p], data[2 * p:3 * p],
                        data[3 * p:4 * p], data[4 * p:], dx, dy)
        ra[:, col] = f.ax.ravel()
        rb[:, col] = f.by.ravel()
    return ra, rb


def table_eval_matrix(xi_pts, eta_pts) -> np.ndarray:
    """E[p, 6*m+n] = phi_m(xi_p) phi_n(eta_p) against a raveled (6,6) table."""
    xi_pts = np.atleast_1d(np.asarray(xi_pts, float))
    eta_pts = np.atleast_1d(np.asarray(eta_pts, float))
    out = np.empty((len(xi_pts), 36))
    for m in range(6):
        pm = basis.phi(m, xi_pts)
        for n in range(6):
            out[:, 6 * m + n] = pm * basis.phi(n, eta_pts)
    return out

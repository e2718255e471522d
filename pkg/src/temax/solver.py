"""Semi-discrete update for the constraint-preserving TE Maxwell scheme.

State layout on an nx-by-ny periodic mesh at degree k:
  a[i, j, :]   k+1 modal coefficients of D_x on the vertical face x_{i+1/2}
               (the right face of cell i), polynomials in eta along cell j
  b[i, j, :]   coefficients of D_y on the horizontal face y_{j+1/2}
  alpha        volume modes of B_z in the graded 2-D basis
  omega        evolved reconstruction moments, N_MOMENTS[k] per cell

Cell (i, j) owns faces a[i-1, j], a[i, j], b[i, j-1], b[i, j]; vertex (i, j)
sits at (x_{i+1/2}, y_{j+1/2}). Periodic wrap is np.roll.

Every flux value is computed once per face or vertex and shared by all
updates touching it; that single-valuedness is what makes the face mean
modes telescope and keeps the per-cell compatibility functional constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basis, reconstruction
from .riemann import riemann_1d, riemann_2d

# reference corners in the order (-,-), (+,-), (-,+), (+,+)
_CORNER_XI = np.array([-0.5, 0.5, -0.5, 0.5])
_CORNER_ETA = np.array([-0.5, -0.5, 0.5, 0.5])


@dataclass
class SimState:
    """Degrees of freedom; supports the affine algebra the integrators need."""
    k: int
    a: np.ndarray
    b: np.ndarray
    alpha: np.ndarray
    omega: np.ndarray

    @classmethod
    def zeros(cls, k: int, nx: int, ny: int) -> "SimState":
        return cls(
            k,
            np.zeros((nx, ny, k + 1)),
            np.zeros((nx, ny, k + 1)),
            np.zeros((nx, ny, basis.n_modes(k))),
            np.zeros((nx, ny, reconstruction.N_MOMENTS[k])),
        )

    def copy(self) -> "SimState":
        return SimState(self.k, self.a.copy(), self.b.copy(),
                        self.alpha.copy(), self.omega.copy())

    def __add__(self, other: "SimState") -> "SimState":
        return SimState(self.k, self.a + other.a, self.b + other.b,
                        self.alpha + other.alpha, self.omega + other.omega)

    def __mul__(self, s: float) -> "SimState":
        return SimState(self.k, s * self.a, s * self.b,
                        s * self.alpha, s * self.omega)

    __rmul__ = __mul__

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.a).all() and np.isfinite(self.b).all()
                    and np.isfinite(self.alpha).all()
                    and np.isfinite(self.omega).all())

    def max_abs(self) -> float:
        vals = [np.max(np.abs(arr), initial=0.0)
                for arr in (self.a, self.b, self.alpha, self.omega)]
        return float(max(vals))


def _mm(stack: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Apply mat (last_dim, out_dim) to the trailing axis of a cell stack."""
    flat = stack.reshape(-1, stack.shape[-1])
    return (flat @ mat).reshape(stack.shape[:-1] + (mat.shape[-1],))


def _vertex_states(corners: np.ndarray):
    """Gather the four states meeting at vertex (i, j) from per-cell corner
    values ordered (-,-), (+,-), (-,+), (+,+). DL is cell (i, j) itself."""
    dl = corners[..., 3]
    dr = np.roll(corners[..., 2], -1, axis=0)
    ul = np.roll(corners[..., 1], -1, axis=1)
    ur = np.roll(np.roll(corners[..., 0], -1, axis=0), -1, axis=1)
    return dl, dr, ul, ur


class Operators:
    """Precomputed matrices and material tables for one (mesh, material, k).

    rhs() evaluates the semi-discrete time derivative:
      1. reconstruct D inside every cell from face data and moments,
      2. solve 1-D Riemann problems at face quadrature points and the 2-D
         vertex problem at every mesh vertex,
      3. flux-reconstruction update of the face polynomials (the vertex
         values enter through the endpoint correction functions),
      4. DG update of B_z,
      5. moment updates from the same flux values.
    """

    def __init__(self, mesh, material, k: int):
        if k not in (0, 1, 2, 3, 4):
            raise ValueError(f"unsupported degree {k}")
        self.mesh = mesh
        self.material = material
        self.k = k
        p = k + 1
        dx, dy = mesh.dx, mesh.dy
        nodes, wts = basis.gauss_legendre(p)
        modes = basis.mode_indices(k)

        # flux reconstruction: nodal derivative of the corrected flux,
        # expressed directly on the Riemann data, then converted to modes
        _, vinv = basis.vandermonde(k)
        ends = basis.lagrange_matrix(nodes, np.array([-0.5, 0.5]))
        dmat = basis.lagrange_deriv_matrix(nodes, nodes)
        glp = basis.radau(k, "left", nodes)[1]
        grp = basis.radau(k, "right", nodes)[1]
        a_nodal = dmat - np.outer(glp, ends[0]) - np.outer(grp, ends[1])
        self.fr_flux_T = (vinv @ a_nodal).T          # (p, p)
        self.fr_left = vinv @ glp                    # (p,)
        self.fr_right = vinv @ grp

        # reconstruction operators, trimmed to structurally nonzero rows
        ra, rb = reconstruction.operator_matrices(k, dx, dy)
        self._rows_a = np.nonzero(np.any(ra != 0.0, axis=1))[0]
        self._rows_b = np.nonzero(np.any(rb != 0.0, axis=1))[0]
        self.recon_a_T = ra[self._rows_a].T          # (n_in, ra)
        self.recon_b_T = rb[self._rows_b].T

        def tab_a(xi, eta):
            return reconstruction.table_eval_matrix(xi, eta)[:, self._rows_a].T

        def tab_b(xi, eta):
            return reconstruction.table_eval_matrix(xi, eta)[:, self._rows_b].T

        half = np.full(p, 0.5)
        self.trace_dy_plus_T = tab_b(half, nodes)    # D_y at own right face
        self.trace_dy_minus_T = tab_b(-half, nodes)
        self.trace_dx_plus_T = tab_a(nodes, half)    # D_x at own top face
        self.trace_dx_minus_T = tab_a(nodes, -half)
        self.bz_vplus_T = basis.basis2d_matrix(modes, half, nodes).T
        self.bz_vminus_T = basis.basis2d_matrix(modes, -half, nodes).T
        self.bz_hplus_T = basis.basis2d_matrix(modes, nodes, half).T
        self.bz_hminus_T = basis.basis2d_matrix(modes, nodes, -half).T

        self.corner_a_T = tab_a(_CORNER_XI, _CORNER_ETA)
        self.corner_b_T = tab_b(_CORNER_XI, _CORNER_ETA)
        self.corner_bz_T = basis.basis2d_matrix(modes, _CORNER_XI, _CORNER_ETA).T

        # tensor volume quadrature, (k+1)^2 points
        x2, e2 = np.meshgrid(nodes, nodes, indexing="ij")
        xi_v, eta_v = x2.ravel(), e2.ravel()
        w_v = np.outer(wts, wts).ravel()
        self.vol_a_T = tab_a(xi_v, eta_v)
        self.vol_b_T = tab_b(xi_v, eta_v)
        self.vol_bz_T = basis.basis2d_matrix(modes, xi_v, eta_v).T
        gxi, geta = basis.basis2d_deriv_matrices(modes, xi_v, eta_v)
        self.proj_xi = w_v[:, None] * gxi            # (P, N)
        self.proj_eta = w_v[:, None] * geta
        self.face_xp = wts[:, None] * basis.basis2d_matrix(modes, half, nodes)
        self.face_xm = wts[:, None] * basis.basis2d_matrix(modes, -half, nodes)
        self.face_yp = wts[:, None] * basis.basis2d_matrix(modes, nodes, half)
        self.face_ym = wts[:, None] * basis.basis2d_matrix(modes, nodes, -half)
        self.inv_norms = 1.0 / basis.norms2d(modes)

        # moment-update quadrature vectors
        self.w_face = wts
        self.w_face_t = wts * nodes
        self.w_vol = w_v
        self.w_vol_xi = w_v * xi_v
        self.w_vol_eta = w_v * eta_v

        # material tables, evaluated pointwise at every flux location
        nx, ny = mesh.nx, mesh.ny
        xc, yc = mesh.cell_centers()
        xf = mesh.vertical_face_x()
        yf = mesh.horizontal_face_y()

        def tables(xg, yg):
            shape = np.broadcast(xg, yg).shape
            xg = np.broadcast_to(xg, shape)
            yg = np.broadcast_to(yg, shape)
            return material.eps(xg, yg), material.mu(xg, yg)

        self.eps_vf, self.mu_vf = tables(
            xf[:, None, None], (yc[:, None] + nodes[None, :] * dy)[None, :, :])
        self.eps_hf, self.mu_hf = tables(
            (xc[:, None] + nodes[None, :] * dx)[:, None, :], yf[None, :, None])
        self.eps_vx, self.mu_vx = tables(xf[:, None], yf[None, :])
        eps_vol, mu_vol = tables(
            (xc[:, None] + xi_v[None, :] * dx)[:, None, :],
            (yc[:, None] + eta_v[None, :] * dy)[None, :, :])
        self.inv_eps_vol = 1.0 / eps_vol
        self.inv_mu_vol = 1.0 / mu_vol

    def recon_tables(self, state: SimState):
        """Per-cell dense coefficient tables of the reconstructed D, trimmed
        to the structurally nonzero entries (rows_a / rows_b of the full
        36-entry table)."""
        inp = np.concatenate(
            [np.roll(state.a, 1, axis=0), state.a,
             np.roll(state.b, 1, axis=1), state.b, state.omega], axis=2)
        return _mm(inp, self.recon_a_T), _mm(inp, self.recon_b_T)

    def table_rows(self):
        return self._rows_a, self._rows_b

    def rhs(self, state: SimState) -> SimState:
        mesh = self.mesh
        dx, dy = mesh.dx, mesh.dy
        alpha = state.alpha
        ax_t, by_t = self.recon_tables(state)

        # vertical faces: left trace from the cell itself, right trace from
        # its +x neighbour; D_x is single-valued there by construction
        dy_l = _mm(by_t, self.trace_dy_plus_T)
        dy_r = np.roll(_mm(by_t, self.trace_dy_minus_T), -1, axis=0)
        bz_l = _mm(alpha, self.bz_vplus_T)
        bz_r = np.roll(_mm(alpha, self.bz_vminus_T), -1, axis=0)
        hz_v, ey_v = riemann_1d(1, 0, dy_l, dy_r, bz_l, bz_r,
                                self.eps_vf, self.mu_vf)

        # horizontal faces: down trace from the cell, up from its +y neighbour
        dx_d = _mm(ax_t, self.trace_dx_plus_T)
        dx_u = np.roll(_mm(ax_t, self.trace_dx_minus_T), -1, axis=1)
        bz_d = _mm(alpha, self.bz_hplus_T)
        bz_u = np.roll(_mm(alpha, self.bz_hminus_T), -1, axis=1)
        hz_h, ex_h = riemann_1d(0, 1, dx_d, dx_u, bz_d, bz_u,
                                self.eps_hf, self.mu_hf)

        # vertices: one four-state Riemann value per mesh vertex
        dxc = _mm(ax_t, self.corner_a_T)
        dyc = _mm(by_t, self.corner_b_T)
        bzc = _mm(alpha, self.corner_bz_T)
        h_tilde = riemann_2d(*_vertex_states(dxc), *_vertex_states(dyc),
                             *_vertex_states(bzc),
                             self.eps_vx, self.mu_vx, dx, dy)

        # face updates: dD_x/dt = +dH_z/dy along vertical faces,
        # dD_y/dt = -dH_z/dx along horizontal ones
        h_below = np.roll(h_tilde, 1, axis=1)
        da = (_mm(hz_v, self.fr_flux_T)
              + h_below[..., None] * self.fr_left
              + h_tilde[..., None] * self.fr_right) / dy
        h_left = np.roll(h_tilde, 1, axis=0)
        db = -(_mm(hz_h, self.fr_flux_T)
               + h_left[..., None] * self.fr_left
               + h_tilde[..., None] * self.fr_right) / dx

        # B_z DG update: volume term plus single-valued face fluxes
        ex_vol = _mm(ax_t, self.vol_a_T) * self.inv_eps_vol
        ey_vol = _mm(by_t, self.vol_b_T) * self.inv_eps_vol
        vol = _mm(ey_vol, self.proj_xi) / dx - _mm(ex_vol, self.proj_eta) / dy
        face_x = (_mm(ey_v, self.face_xp)
                  - _mm(np.roll(ey_v, 1, axis=0), self.face_xm)) / dx
        face_y = (_mm(ex_h, self.face_yp)
                  - _mm(np.roll(ex_h, 1, axis=1), self.face_ym)) / dy
        dalpha = (vol - face_x + face_y) * self.inv_norms

        domega = self._moment_rates(alpha, hz_v, hz_h)
        return SimState(self.k, da, db, dalpha, domega)

    def _moment_rates(self, alpha, hz_v, hz_h) -> np.ndarray:
        k = self.k
        nx, ny = self.mesh.nx, self.mesh.ny
        n_mom = reconstruction.N_MOMENTS[k]
        if n_mom == 0:
            return np.zeros((nx, ny, 0))
        dx, dy = self.mesh.dx, self.mesh.dy
        hz_vol = _mm(alpha, self.vol_bz_T) * self.inv_mu_vol
        iv0 = hz_vol @ self.w_vol
        hx_p = hz_v @ self.w_face
        hx_m = np.roll(hx_p, 1, axis=0)
        hy_p = hz_h @ self.w_face
        hy_m = np.roll(hy_p, 1, axis=1)
        out = np.empty((nx, ny, n_mom))
        out[..., 0] = -12.0 * ((0.5 * (hx_m + hx_p) - iv0) / dx
                               + (0.5 * (hy_m + hy_p) - iv0) / dy)
        if n_mom > 1:
            ivx = hz_vol @ self.w_vol_xi
            ivy = hz_vol @ self.w_vol_eta
            hx_p_eta = hz_v @ self.w_face_t
            hx_m_eta = np.roll(hx_p_eta, 1, axis=0)
            hy_p_xi = hz_h @ self.w_face_t
            hy_m_xi = np.roll(hy_p_xi, 1, axis=1)
            out[..., 1] = (-(180.0 / dx) * ((hx_p - hx_m) / 6.0 - 2.0 * ivx)
                           - (144.0 / dy) * (0.5 * (hy_m_xi + hy_p_xi) - ivx))
            out[..., 2] = (-(144.0 / dx) * (0.5 * (hx_m_eta + hx_p_eta) - ivy)
                           - (180.0 / dy) * ((hy_p - hy_m) / 6.0 - 2.0 * ivy))
        return out

"""Fixed-grid physical evolution: hybrid-WENO finite volume + SSPRK3.

All geometry is frozen during a physical step, so the reconstruction
context (stencil integrals, QR data, edge quadrature) is built once and
shared by the three Runge-Kutta stages; ghost states are refreshed before
every stage at that stage's time.
"""

from __future__ import annotations

import numpy as np

from . import geometry as geo
from .boundary import (
    TimeContext,
    extend_conserved,
    extend_egm_moments,
    extend_vertices,
    needs_exact_moments,
)
from .mesh import cell_corners
from .reconstruction import ReconContext, reconstruct_block
from .remap import SSPRK3_STAGE_WEIGHTS, ssprk3


def llf_physical_flux(model, U_int, U_ext, n_unit, a_max):
    """Local Lax-Friedrichs flux for the physical system (unit normal)."""
    fi = model.normal_flux(U_int, n_unit)
    fe = model.normal_flux(U_ext, n_unit)
    return 0.5 * (fi + fe - np.asarray(a_max)[..., None] * (U_ext - U_int))


def physical_dt(verts, averages, model, cfl: float) -> float:
    """CFL time step: dt = cfl * min over cells of m00 / max_k(a_k |l_k|)."""
    corners = cell_corners(verts)
    lengths = geo.edge_lengths(corners)
    n_unit = geo.scaled_normals(corners) / lengths[..., None]
    a = model.max_wavespeed(averages[:, :, None, :], n_unit)  # (nx, ny, 4)
    area = geo.shoelace_area(corners)
    denom = np.max(a * lengths, axis=-1)
    return cfl * float(np.min(area / denom))


class _EvolveSystem:
    """Geometry-frozen right-hand side of the semi-discrete scheme."""

    def __init__(self, moments, verts, model, bc):
        self.model = model
        self.bc = bc
        self.verts_ext = extend_vertices(verts, bc)
        self.corners_ext = cell_corners(self.verts_ext)
        self.exact_ext = (
            geo.exact_moments(self.corners_ext) if needs_exact_moments(bc) else None
        )
        self.egm_ext = extend_egm_moments(moments, self.exact_ext, bc)
        self.vol_ext = self.egm_ext[..., 0]
        self.ctx = ReconContext(self.corners_ext, self.vol_ext, self.egm_ext)
        self.area = moments[..., 0]

        vv = self.verts_ext[2:-2, 2:-2]
        ex = vv[:, 1:] - vv[:, :-1]  # x-edge vectors (B -> C)
        self.nx_star = np.stack([ex[..., 1], -ex[..., 0]], axis=-1)
        self.lx = np.linalg.norm(self.nx_star, axis=-1)
        self.nx_unit = self.nx_star / self.lx[..., None]
        ey = vv[:-1, :] - vv[1:, :]  # y-edge vectors (C -> D)
        self.ny_star = np.stack([ey[..., 1], -ey[..., 0]], axis=-1)
        self.ly = np.linalg.norm(self.ny_star, axis=-1)
        self.ny_unit = self.ny_star / self.ly[..., None]
        self._stage_fluxes = []
        self.t_base = 0.0
        self.dt = 0.0

    def rhs(self, averages, t):
        model = self.model
        V = averages * self.area[..., None]
        tctx = TimeContext(t=t, t_base=self.t_base, dt=self.dt, stage=len(self._stage_fluxes))
        V_ext = extend_conserved(
            V, self.bc, model, tctx, self.vol_ext, self.exact_ext, self.corners_ext
        )
        avg_poly = V_ext[1:-1, 1:-1] / self.vol_ext[1:-1, 1:-1, None]
        inflow = model.inflow_speed(avg_poly[:, :, None, :], self.ctx.unit_n)
        _, _, traces = reconstruct_block(self.ctx, V_ext, model, inflow)

        U_int = traces[:-1, 1:-1, 1]
        U_ext = traces[1:, 1:-1, 3, ::-1]
        n = self.nx_unit[:, :, None, :]
        a_max = np.maximum(
            np.max(model.max_wavespeed(U_int, n), axis=-1),
            np.max(model.max_wavespeed(U_ext, n), axis=-1),
        )
        f = llf_physical_flux(model, U_int, U_ext, n, a_max[..., None])
        Fx = np.einsum("g,ijgm->ijm", geo.GL_WEIGHTS, f) * self.lx[..., None]

        U_int = traces[1:-1, :-1, 2]
        U_ext = traces[1:-1, 1:, 0, ::-1]
        n = self.ny_unit[:, :, None, :]
        a_max = np.maximum(
            np.max(model.max_wavespeed(U_int, n), axis=-1),
            np.max(model.max_wavespeed(U_ext, n), axis=-1),
        )
        f = llf_physical_flux(model, U_int, U_ext, n, a_max[..., None])
        Fy = np.einsum("g,ijgm->ijm", geo.GL_WEIGHTS, f) * self.ly[..., None]

        dV = (Fx[:-1] - Fx[1:]) + (Fy[:, :-1] - Fy[:, 1:])
        bflux = (
            Fx[0].sum(axis=0)
            - Fx[-1].sum(axis=0)
            + Fy[:, 0].sum(axis=0)
            - Fy[:, -1].sum(axis=0)
        )
        self._stage_fluxes.append(bflux)
        return dV / self.area[..., None]


def evolve_step(averages, moments, verts, model, bc, dt: float, t: float):
    """One SSPRK3 physical step on the fixed mesh.

    Returns (new averages, boundary_flux) where boundary_flux is the
    net conserved quantity that left through the domain boundary during
    the step (zero up to roundoff for periodic runs).
    """
    sys = _EvolveSystem(moments, verts, model, bc)
    sys.t_base = t
    sys.dt = dt
    out = ssprk3(averages, sys.rhs, t, dt)
    bflux = np.zeros(model.m)
    for w, bf in zip(SSPRK3_STAGE_WEIGHTS, sys._stage_fluxes):
        bflux += dt * w * bf
    return out, bflux

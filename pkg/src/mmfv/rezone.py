"""Rezoning strategies: target meshes for the next time level.

Both strategies keep the domain boundary straight: random rezoning moves
boundary vertices rigidly with the drift velocity b, the Lagrangian
rezoner lets them slide along their side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .errors import RegularityError
from .mesh import cell_corners
from .rng import SplitMix64


@dataclass
class RezonePlan:
    """Target vertex positions and the derived constant vertex velocities."""

    target_verts: np.ndarray
    tau_final: float

    def velocities(self, source_verts: np.ndarray) -> np.ndarray:
        return (self.target_verts - source_verts) / self.tau_final


def random_rezone(
    verts0: np.ndarray,
    t_next: float,
    cr: float,
    b,
    rng: SplitMix64,
    spacing,
    tau_final: float,
) -> RezonePlan:
    """Random vertex perturbation about the initial uniform positions.

    Interior vertices jump to x0 + cr*(U1 hx, U2 hy) + b*t with fresh
    uniform(-0.5, 0.5) draws every call; boundary vertices translate
    rigidly with b*t. |cr| <= 0.5 keeps the mesh regular.
    """
    if abs(cr) > 0.5:
        raise ValueError(f"|C_r| must not exceed 0.5, got {cr}")
    hx, hy = spacing
    b = np.asarray(b, dtype=float)
    target = verts0 + b * t_next
    u = rng.uniform_centered(verts0[1:-1, 1:-1].shape)
    target[1:-1, 1:-1] += cr * u * np.array([hx, hy])
    geo.require_regular(cell_corners(target), context="random rezone plan")
    return RezonePlan(target, tau_final)


def _nodal_velocities(verts: np.ndarray, averages: np.ndarray, moments: np.ndarray, model):
    """Area-weighted average of adjacent-cell flow velocities per vertex."""
    vel = model.velocity(averages)  # (nx, ny, 2)
    area = moments[..., 0]
    wsum = np.zeros(verts.shape[:2])
    vsum = np.zeros(verts.shape)
    for di in (0, 1):
        for dj in (0, 1):
            sl = (slice(di, verts.shape[0] - 1 + di), slice(dj, verts.shape[1] - 1 + dj))
            wsum[sl] += area
            vsum[sl] += vel * area[..., None]
    return vsum / wsum[..., None]


def _smooth_pass(verts: np.ndarray) -> np.ndarray:
    """One Jacobi sweep: interior vertices average their four neighbors,
    boundary vertices average their two along-side neighbors, corners stay."""
    out = verts.copy()
    out[1:-1, 1:-1] = 0.25 * (
        verts[:-2, 1:-1] + verts[2:, 1:-1] + verts[1:-1, :-2] + verts[1:-1, 2:]
    )
    out[1:-1, 0] = 0.5 * (verts[:-2, 0] + verts[2:, 0])
    out[1:-1, -1] = 0.5 * (verts[:-2, -1] + verts[2:, -1])
    out[0, 1:-1] = 0.5 * (verts[0, :-2] + verts[0, 2:])
    out[-1, 1:-1] = 0.5 * (verts[-1, :-2] + verts[-1, 2:])
    return out


def _slide_boundaries(target: np.ndarray, source: np.ndarray) -> np.ndarray:
    """Constrain boundary vertices to their (straight) side: keep the
    normal coordinate of the source boundary, allow tangential motion."""
    out = target.copy()
    out[0, :, 0] = source[0, :, 0]
    out[-1, :, 0] = source[-1, :, 0]
    out[:, 0, 1] = source[:, 0, 1]
    out[:, -1, 1] = source[:, -1, 1]
    out[0, 0] = source[0, 0]
    out[-1, 0] = source[-1, 0]
    out[0, -1] = source[0, -1]
    out[-1, -1] = source[-1, -1]
    return out


def lagrangian_smooth_rezone(
    verts: np.ndarray,
    averages: np.ndarray,
    moments: np.ndarray,
    model,
    dt: float,
    passes: int,
    tau_final: float,
) -> RezonePlan:
    """Lagrangian vertex advection followed by Jacobi smoothing sweeps.

    If the smoothed mesh is irregular, the pass count is increased (up to
    10) before giving up. A simplified stand-in for full ALE mesh
    optimization; it tracks compression fronts but makes no optimality
    claim.
    """
    w = _nodal_velocities(verts, averages, moments, model)
    moved = _slide_boundaries(verts + dt * w, verts)
    npass = passes
    while True:
        target = moved
        for _ in range(npass):
            target = _slide_boundaries(_smooth_pass(target), verts)
        ok, _ = geo.regularity_violations(cell_corners(target))
        if np.all(ok):
            return RezonePlan(target, tau_final)
        if npass >= 10:
            raise RegularityError(
                f"lagrangian rezone produced irregular cells even after {npass} smoothing passes"
            )
        npass = min(10, npass + 2)

"""Ghost-cell construction (two layers) for all boundary conditions.

Ghost geometry comes from extending the vertex array: periodic sides wrap
with a coordinate shift by the domain period; every other condition
mirrors vertices across the (straight) boundary line, which keeps the
structured orientation counterclockwise. Ghost cell data is then filled
per side: periodic copies (moments via the translation identity), exact
analytic averages over the ghost geometry, reflected states with the
normal momentum negated, or zeroth-order extrapolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import geometry as geo
from .errors import ConfigError

SIDE_KINDS = ("periodic", "exact", "reflective", "outflow", "dmr_bottom", "dmr_top")


@dataclass
class TimeContext:
    """Time information handed to analytic boundary fills.

    Intermediate Runge-Kutta stages are not snapshots of the exact
    solution, so stage-aware handles (the polynomial advection tests)
    need the base time, step size, and stage index to reproduce the
    interior stage algebra in the ghost cells. Plain handles just read
    `t`, the stage evaluation time.
    """

    t: float
    t_base: float = 0.0
    dt: float = 0.0
    stage: Optional[int] = None

    @classmethod
    def at(cls, t: float) -> "TimeContext":
        return cls(t=t, t_base=t)


@dataclass
class BoundarySpec:
    """Per-side boundary conditions.

    `analytic` supplies exact ghost averages for `exact` sides as a
    callable (moments, corners, t) -> cell averages. `period` is the
    time-zero domain extent, still valid when the whole domain translates
    rigidly. `dmr` carries the double-Mach-reflection reference solution.
    """

    left: str = "periodic"
    right: str = "periodic"
    bottom: str = "periodic"
    top: str = "periodic"
    period: tuple = (1.0, 1.0)
    analytic: Optional[Callable] = None
    dmr: Optional[object] = None

    def __post_init__(self):
        for side in (self.left, self.right, self.bottom, self.top):
            if side not in SIDE_KINDS:
                raise ConfigError(f"unknown boundary kind: {side}")
        if (self.left == "periodic") != (self.right == "periodic"):
            raise ConfigError("periodic sides must come in matched pairs (x)")
        if (self.bottom == "periodic") != (self.top == "periodic"):
            raise ConfigError("periodic sides must come in matched pairs (y)")

    @classmethod
    def all_sides(cls, kind: str, **kw) -> "BoundarySpec":
        return cls(left=kind, right=kind, bottom=kind, top=kind, **kw)

    def sides(self):
        return {"left": self.left, "right": self.right, "bottom": self.bottom, "top": self.top}


def _extend_axis_vertices(verts, axis, lo_kind, hi_kind, period):
    """Add two ghost vertex planes on each end of one axis."""
    v = np.moveaxis(verts, axis, 0)
    n = v.shape[0] - 1
    if lo_kind == "periodic":
        shift = np.zeros(2)
        shift[axis] = period
        lo = v[n - 2 : n] - shift
        hi = v[1:3] + shift
    else:
        # Mirror across the boundary plane: flip only the axis coordinate.
        lo = v[2:0:-1].copy()
        lo[..., axis] = 2.0 * v[0, ..., axis] - lo[..., axis]
        hi = v[n - 1 : n - 3 : -1].copy()
        hi[..., axis] = 2.0 * v[n, ..., axis] - hi[..., axis]
    out = np.concatenate([lo, v, hi], axis=0)
    return np.moveaxis(out, 0, axis)


def extend_vertices(verts: np.ndarray, bc: BoundarySpec) -> np.ndarray:
    """Vertex array with two ghost layers per side, (nx+5, ny+5, 2)."""
    out = _extend_axis_vertices(verts, 0, bc.left, bc.right, bc.period[0])
    out = _extend_axis_vertices(out, 1, bc.bottom, bc.top, bc.period[1])
    return out


def extend_egm_moments(moments, exact_ext, bc: BoundarySpec):
    """Evolved moments over the extended block, (nx+4, ny+4, 6).

    Periodic ghosts translate the wrapped interior moments; all other
    ghosts carry the exact moments of their geometry (already available
    in exact_ext; pass None only for all-periodic boundaries).
    """
    if exact_ext is None:
        shp = (moments.shape[0] + 4, moments.shape[1] + 4, 6)
        out = np.empty(shp)
    else:
        out = exact_ext.copy()
    out[2:-2, 2:-2] = moments
    nx, ny = moments.shape[0], moments.shape[1]
    if bc.left == "periodic":
        shift = np.array([bc.period[0], 0.0])
        out[0:2, 2:-2] = geo.translate_moments(moments[nx - 2 : nx], -shift)
        out[nx + 2 :, 2:-2] = geo.translate_moments(moments[0:2], shift)
    if bc.bottom == "periodic":
        shift = np.array([0.0, bc.period[1]])
        inner = out[:, 2 : ny + 2]
        out[:, 0:2] = geo.translate_moments(inner[:, ny - 2 : ny], -shift)
        out[:, ny + 2 :] = geo.translate_moments(inner[:, 0:2], shift)
    return out


def _reflect_sign(m: int, axis: int) -> np.ndarray:
    s = np.ones(m)
    if m == 4:
        s[1 + axis] = -1.0
    return s


def _ghost_averages(kind, axis, lo_side, a, mom, crn, tctx, bc):
    """Two ghost planes of cell averages along one axis.

    a: interior-in-this-axis averages (already extended in the other
    axis when axis == 1), axis moved to the front; mom/crn: exact ghost
    moments and corners for the two ghost planes (front axis).
    """
    n = a.shape[0]
    if kind == "periodic":
        return a[n - 2 : n] if lo_side else a[0:2]
    if kind == "reflective":
        sign = _reflect_sign(a.shape[-1], axis)
        return a[1::-1] * sign if lo_side else a[: n - 3 : -1] * sign
    if kind == "outflow":
        edge = a[0:1] if lo_side else a[n - 1 : n]
        return np.repeat(edge, 2, axis=0)
    if kind == "exact":
        if bc.analytic is None:
            raise ConfigError("exact boundary requires an analytic solution handle")
        return bc.analytic(mom, crn, tctx)
    if kind == "dmr_top":
        return bc.dmr.top_averages(mom, crn, tctx.t)
    if kind == "dmr_bottom":
        sign = _reflect_sign(a.shape[-1], axis)
        mirrored = a[1::-1] * sign if lo_side else a[: n - 3 : -1] * sign
        return bc.dmr.bottom_averages(mom, crn, mirrored)
    raise ConfigError(f"unhandled boundary kind {kind}")


def needs_exact_moments(bc: BoundarySpec) -> bool:
    """True if any ghost fill reads exact moments of the ghost geometry."""
    return any(kind != "periodic" for kind in bc.sides().values())


def extend_conserved(V, bc: BoundarySpec, model, tctx, vol_ext, exact_ext, corners_ext):
    """Integrated conserved variables over the extended block.

    Interior values are placed verbatim; ghost averages are built per
    side and multiplied by the ghost volumes from vol_ext (equal to the
    exact ghost volume on non-periodic sides). exact_ext may be None for
    all-periodic boundaries.
    """
    nx, ny = V.shape[0], V.shape[1]
    avg = V / vol_ext[2:-2, 2:-2, None]
    if not isinstance(tctx, TimeContext):
        tctx = TimeContext.at(float(tctx))

    def sub(arr, sl):
        return None if arr is None else arr[sl][:, 2:-2]

    # x direction: operate on (nx, ny, m)
    lo = _ghost_averages(
        bc.left, 0, True, avg, sub(exact_ext, slice(0, 2)),
        sub(corners_ext, slice(0, 2)), tctx, bc
    )
    hi = _ghost_averages(
        bc.right, 0, False, avg, sub(exact_ext, slice(nx + 2, nx + 4)),
        sub(corners_ext, slice(nx + 2, nx + 4)), tctx, bc
    )
    a_x = np.concatenate([lo, avg, hi], axis=0)  # (nx+4, ny, m)

    # y direction: move y to the front, full x range
    a_moved = np.moveaxis(a_x, 1, 0)  # (ny, nx+4, m)

    def suby(arr, sl):
        return None if arr is None else np.moveaxis(arr[:, sl], 1, 0)

    mom_lo = suby(exact_ext, slice(0, 2))
    crn_lo = suby(corners_ext, slice(0, 2))
    mom_hi = suby(exact_ext, slice(ny + 2, ny + 4))
    crn_hi = suby(corners_ext, slice(ny + 2, ny + 4))
    lo = _ghost_averages(bc.bottom, 1, True, a_moved, mom_lo, crn_lo, tctx, bc)
    hi = _ghost_averages(bc.top, 1, False, a_moved, mom_hi, crn_hi, tctx, bc)
    a_ext = np.moveaxis(np.concatenate([lo, a_moved, hi], axis=0), 0, 1)

    out = a_ext * vol_ext[..., None]
    out[2:-2, 2:-2] = V
    return out

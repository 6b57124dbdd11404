"""2-exact hybrid third-order reconstruction on 3x3 stencils.

Every cell owns a quadratic polynomial in its normalized centered basis,
fitted by constrained least squares to the integrated conserved variables
of the 3x3 neighborhood (exact conservation on the target cell). Cells
flagged by the KXRCF indicator fall back to a nonlinear WENO combination
of the quadratic with four linear candidates on corner sub-stencils.

Stencil members are ordered row-major over offsets (di, dj) in
{-1,0,1}^2 with dj slowest: index 4 is the target, 3/5 its west/east
neighbors, 1/7 south/north, 0/2/6/8 the corners.
"""

from __future__ import annotations

import numpy as np

from . import geometry as geo
from .errors import SingularStencil

# Member indices within the 3x3 stencil.
SW, S, SE, W, TARGET, E, NW, N, NE = range(9)

# Corner sub-stencils for the linear WENO candidates: each pairs the
# target with one x- and one y-neighbor so the 2x2 fit has full rank.
LINEAR_SUBSTENCILS = ((W, S), (E, S), (W, N), (E, N))

# ZQ linear weights: big quadratic first, then the four linear candidates.
GAMMA = np.array([0.96, 0.01, 0.01, 0.01, 0.01])

# Nonlinear-weight regularization. Small enough that zero-indicator
# candidates dominate near jumps (keeps trace overshoot below the 1e-12
# no-new-extrema slack for step data).
WENO_EPS = 1e-13

# KXRCF calibration: threshold and h-exponent (k+1)/2 for k = 2.
KXRCF_CK = 1.0
KXRCF_EXPONENT = 1.5


def stencil_members(ext: np.ndarray) -> np.ndarray:
    """Gather 3x3 neighborhoods from an extended cell array.

    ext has shape (NXe, NYe, ...); the result has shape
    (NXe-2, NYe-2, 9, ...) with member axis ordered as documented above.
    """
    nx, ny = ext.shape[0] - 2, ext.shape[1] - 2
    rows = []
    for dj in (0, 1, 2):
        for di in (0, 1, 2):
            rows.append(ext[di : di + nx, dj : dj + ny])
    return np.stack(rows, axis=2)


class ConstrainedFit:
    """Constrained least-squares quadratic fit with reusable factors.

    B: (..., 9, 6) integrals of the target's basis functions over each
    member. The target-cell constraint sum_c c_sr B_target = V_target is
    eliminated exactly; the remaining five coefficients minimize the
    residual over the stencil. The normal equations are solved with one
    step of iterative refinement, which restores full accuracy on
    consistent (polynomial) data.
    """

    def __init__(self, B: np.ndarray):
        self.B0 = B[..., TARGET, :]
        self.ratio = B[..., :, 0] / self.B0[..., None, 0]
        self.A = B[..., :, 1:] - self.ratio[..., None] * self.B0[..., None, 1:]
        At = np.swapaxes(self.A, -1, -2)
        G = At @ self.A
        scale = np.abs(np.diagonal(G, axis1=-2, axis2=-1)).max(axis=-1)
        if np.any(~np.isfinite(scale)) or np.any(scale <= 0.0):
            raise SingularStencil("degenerate quadratic stencil")
        try:
            self.pseudo_inv = np.linalg.inv(G) @ At  # (..., 5, 9)
        except np.linalg.LinAlgError as exc:
            raise SingularStencil("rank-deficient quadratic stencil") from exc

    def solve(self, V: np.ndarray) -> np.ndarray:
        V0 = V[..., TARGET, :]
        d = V - self.ratio[..., None] * V0[..., None, :]
        c_hi = self.pseudo_inv @ d
        c_hi = c_hi + self.pseudo_inv @ (d - self.A @ c_hi)
        c00 = (V0 - np.einsum("...jm,...j->...m", c_hi, self.B0[..., 1:])) / self.B0[
            ..., 0, None
        ]
        return np.concatenate([c00[..., None, :], c_hi], axis=-2)


def fit_quadratic(B: np.ndarray, V: np.ndarray) -> np.ndarray:
    """One-shot constrained quadratic fit, coefficients (..., 6, m)."""
    return ConstrainedFit(B).solve(V)


def _fit_linear(B: np.ndarray, V: np.ndarray, members) -> np.ndarray:
    """Linear fit on (target, members[0], members[1]); exact target mean.

    Returns (..., 3, m) coefficients (c00, c10, c01).
    """
    B0 = B[..., TARGET, :]
    V0 = V[..., TARGET, :]
    rows = []
    rhs = []
    for mem in members:
        ratio = B[..., mem, 0] / B0[..., 0]
        rows.append(B[..., mem, 1:3] - ratio[..., None] * B0[..., 1:3])
        rhs.append(V[..., mem, :] - ratio[..., None] * V0)
    a11, a12 = rows[0][..., 0], rows[0][..., 1]
    a21, a22 = rows[1][..., 0], rows[1][..., 1]
    det = a11 * a22 - a12 * a21
    scale = np.sqrt((a11 * a11 + a12 * a12) * (a21 * a21 + a22 * a22))
    if np.any(np.abs(det) <= 1e-12 * scale):
        raise SingularStencil("degenerate linear sub-stencil")
    c10 = (a22[..., None] * rhs[0] - a12[..., None] * rhs[1]) / det[..., None]
    c01 = (a11[..., None] * rhs[1] - a21[..., None] * rhs[0]) / det[..., None]
    c00 = (V0 - c10 * B0[..., 1, None] - c01 * B0[..., 2, None]) / B0[..., 0, None]
    return np.stack([c00, c10, c01], axis=-2)


def _smoothness_quadratic(c: np.ndarray, Bt: np.ndarray, h: np.ndarray) -> np.ndarray:
    """KXRCF-normalized smoothness of a quadratic, shape (..., m).

    Sum over 1 <= |alpha| <= 2 of h^(2|alpha|-2) * integral of (D^alpha p)^2
    over the target cell, expressed through the target basis integrals Bt.
    """
    c00, c10, c01, c20, c11, c02 = (c[..., k, :] for k in range(6))
    I = [Bt[..., k, None] for k in range(6)]
    gx = (
        c10 * c10 * I[0]
        + 4.0 * c20 * c20 * I[3]
        + c11 * c11 * I[5]
        + 4.0 * c10 * c20 * I[1]
        + 2.0 * c10 * c11 * I[2]
        + 4.0 * c20 * c11 * I[4]
    )
    gy = (
        c01 * c01 * I[0]
        + c11 * c11 * I[3]
        + 4.0 * c02 * c02 * I[5]
        + 2.0 * c01 * c11 * I[1]
        + 4.0 * c01 * c02 * I[2]
        + 4.0 * c11 * c02 * I[4]
    )
    h2 = (h * h)[..., None]
    return (gx + gy) / h2 + 4.0 * c20 * c20 + c11 * c11 + 4.0 * c02 * c02


def _smoothness_linear(c: np.ndarray) -> np.ndarray:
    return c[..., 1, :] ** 2 + c[..., 2, :] ** 2


def weno_fit(B: np.ndarray, V: np.ndarray, quad: np.ndarray | None = None):
    """WENO-ZQ combination of the quadratic with four linear candidates.

    Indicators are divided by the stencil variance of the cell averages,
    which makes the nonlinear weights invariant under u -> alpha*u + beta.
    Returns (coeffs (..., 6, m), weights (..., 5, m)).
    """
    if quad is None:
        quad = fit_quadratic(B, V)
    Bt = B[..., TARGET, :]
    h = np.sqrt(Bt[..., 0])
    linear = [_fit_linear(B, V, mem) for mem in LINEAR_SUBSTENCILS]

    avg = V / B[..., :, 0:1]
    var = np.var(avg, axis=-2) + 1e-40  # (..., m)

    betas = [_smoothness_quadratic(quad, Bt, h) / var]
    betas += [_smoothness_linear(c) / var for c in linear]
    beta = np.stack(betas, axis=-2)  # (..., 5, m)

    tau = (np.sum(np.abs(beta[..., 0:1, :] - beta[..., 1:, :]), axis=-2) / 4.0) ** 2
    wt = GAMMA[:, None] * (1.0 + tau[..., None, :] / (beta + WENO_EPS))
    w = wt / np.sum(wt, axis=-2, keepdims=True)

    out = (w[..., 0:1, :] / GAMMA[0]) * quad
    for j, c in enumerate(linear, start=1):
        adj = w[..., j, :] - w[..., 0, :] * (GAMMA[j] / GAMMA[0])
        out[..., 0:3, :] += adj[..., None, :] * c
    return out, w


def evaluate_poly(coeffs: np.ndarray, frame: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate polynomials at points.

    coeffs: (..., 6, m); frame: (..., 3); points: (..., P, 2) broadcasting
    against the leading axes. Returns (..., P, m).
    """
    X = (points[..., 0] - frame[..., None, 0]) / frame[..., None, 2]
    Y = (points[..., 1] - frame[..., None, 1]) / frame[..., None, 2]
    psi = np.empty(X.shape + (6,))
    psi[..., 0] = 1.0
    psi[..., 1] = X
    psi[..., 2] = Y
    psi[..., 3] = X * X
    psi[..., 4] = X * Y
    psi[..., 5] = Y * Y
    return psi @ coeffs


def kxrcf_flags(
    q_int: np.ndarray,
    q_ext: np.ndarray,
    inflow_speed: np.ndarray,
    lengths: np.ndarray,
    diameters: np.ndarray,
    q_norm: np.ndarray,
) -> np.ndarray:
    """KXRCF troubled-cell indicator.

    q_int/q_ext: (..., 4, 3, K) indicator-variable traces on the cell's
    edges (K variables, checked independently); inflow_speed: (..., 4)
    incoming characteristic speed per edge, negative marking inflow;
    lengths: (..., 4) edge lengths; diameters: (...,); q_norm: (..., K)
    max |cell average| over the stencil. True marks a troubled cell.
    """
    inflow = inflow_speed < 0.0
    jump = np.einsum("g,...kgq->...kq", geo.GL_WEIGHTS, q_int - q_ext)
    jump = jump * lengths[..., None]
    num = np.abs(np.sum(np.where(inflow[..., None], jump, 0.0), axis=-2))
    inflow_len = np.sum(np.where(inflow, lengths, 0.0), axis=-1)
    den = (diameters**KXRCF_EXPONENT * inflow_len)[..., None] * q_norm
    return np.any(num > KXRCF_CK * den, axis=-1)


class ReconContext:
    """Geometry-dependent data shared by reconstructions on one block.

    Built once per stage geometry (and reused across RK stages on a fixed
    mesh). `corners` covers the polynomial-owning block: interior cells
    plus one ghost ring; `vol_m00`/`shape_moments` additionally carry the
    second ghost ring used by the outermost stencils.
    """

    def __init__(self, corners_ext, vol_m00_ext, shape_moments_ext):
        self.corners = corners_ext[1:-1, 1:-1]
        self.vol_m00 = vol_m00_ext[1:-1, 1:-1]
        self.frames = geo.frames(self.vol_m00, shape_moments_ext[1:-1, 1:-1])
        mem_vol = stencil_members(vol_m00_ext)
        mem_shape = stencil_members(shape_moments_ext)
        B = geo.basis_integrals(mem_shape, self.frames[..., None, :])
        B[..., 0] = mem_vol  # cell averages are defined against this volume
        self.B = B
        self.fit = ConstrainedFit(B)
        self.edge_pts = geo.edge_points(self.corners)
        self.lengths = geo.edge_lengths(self.corners)
        self.unit_n = geo.scaled_normals(self.corners) / self.lengths[..., None]
        self.diam = geo.cell_diameters(self.corners)

    def traces_of(self, coeffs: np.ndarray) -> np.ndarray:
        """Evaluate edge-point traces of per-cell polynomials, (..., 4, 3, m)."""
        pts = self.edge_pts.reshape(self.edge_pts.shape[:-3] + (12, 2))
        out = evaluate_poly(coeffs, self.frames, pts)
        return out.reshape(out.shape[:-2] + (4, 3, out.shape[-1]))


def _exterior_traces(traces: np.ndarray) -> np.ndarray:
    """Neighbor traces at each cell's own edge points.

    traces: (NX, NY, 4, 3, m) per-cell interior traces. The neighbor across
    edge k evaluates the same coordinates on its opposite edge in reversed
    order. Boundary-of-block entries are filled with the cell's own trace
    (those edges are never consumed by the flux assembly).
    """
    ext = traces.copy()
    rev = traces[..., ::-1, :]
    ext[:, 1:, 0] = rev[:, :-1, 2]  # south neighbor's top edge
    ext[:-1, :, 1] = rev[1:, :, 3]  # east neighbor's west edge
    ext[:, :-1, 2] = rev[:, 1:, 0]  # north neighbor's bottom edge
    ext[1:, :, 3] = rev[:-1, :, 1]  # west neighbor's east edge
    return ext


def reconstruct_block(
    ctx: ReconContext,
    V_ext: np.ndarray,
    model,
    inflow_speed: np.ndarray,
    hybrid: bool = True,
):
    """Hybrid reconstruction of every polynomial-owning cell.

    V_ext: integrated conserved variables on the full extended block;
    inflow_speed: (NX, NY, 4) incoming characteristic speed per cell edge,
    used only by the troubled-cell indicator. Returns (coeffs, flags,
    traces) where traces are the per-cell interior traces (NX, NY, 4, 3, m).
    """
    Vn = stencil_members(V_ext)
    coeffs = ctx.fit.solve(Vn)
    traces = ctx.traces_of(coeffs)
    nxy = coeffs.shape[:2]
    flags = np.zeros(nxy, dtype=bool)
    if not hybrid:
        return coeffs, flags, traces

    q_tr = model.indicator_components(traces)
    q_ext = model.indicator_components(_exterior_traces(traces))
    avg = model.indicator_components(Vn / ctx.B[..., 0:1])
    q_norm = np.max(np.abs(avg), axis=-2)
    flags = kxrcf_flags(q_tr, q_ext, inflow_speed, ctx.lengths, ctx.diam, q_norm)

    if np.any(flags):
        idx = np.where(flags)
        wcoef, _ = weno_fit(ctx.B[idx], Vn[idx], quad=coeffs[idx])
        coeffs[idx] = wcoef
        pts = ctx.edge_pts[idx].reshape(-1, 12, 2)
        tr = evaluate_poly(wcoef, ctx.frames[idx], pts)
        traces[idx] = tr.reshape(-1, 4, 3, traces.shape[-1])

    if hasattr(model, "invalid_mask"):
        # Robustness guard for extreme jumps: a reconstructed point state
        # with negative density/pressure falls back to its cell average
        # (first order at that quadrature point only).
        bad = model.invalid_mask(traces)
        if np.any(bad):
            cell_avg = Vn[..., TARGET, :] / ctx.B[..., TARGET, 0:1]
            traces = np.where(
                bad[..., None], cell_avg[:, :, None, None, :], traces
            )
    return coeffs, flags, traces

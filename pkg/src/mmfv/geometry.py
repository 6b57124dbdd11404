"""Quadrilateral cell geometry: bilinear maps, exact moments, edge quadrature.

Conventions used throughout the package:

- A cell is a convex quadrilateral with vertices A, B, C, D ordered
  counterclockwise. Arrays of cells have shape (..., 4, 2); all functions
  broadcast over the leading axes so a single cell is just shape (4, 2).
- Edges are indexed 0..3 for AB, BC, CD, DA. The three Gauss-Lobatto
  quadrature points on an edge are (start vertex, midpoint, end vertex)
  with weights (1/6, 2/3, 1/6); outward normals come from rotating the
  edge vector by -pi/2.
- A moment set is the vector of integrals of x^s y^r over the cell for
  s + r <= 2, ordered [m00, m10, m01, m20, m11, m02].
- A basis frame is (xc, yc, h): the normalized monomials are
  psi_{s,r}(x, y) = ((x - xc)/h)^s ((y - yc)/h)^r.
"""

from __future__ import annotations

import numpy as np

from .errors import RegularityError, UnsupportedDegree

# 1D Gauss-Lobatto rule on [-1/2, 1/2]: exact for cubics.
GL_NODES = np.array([-0.5, 0.0, 0.5])
GL_WEIGHTS = np.array([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0])

# (s, r) exponent pairs in moment-set order.
MOMENT_POWERS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))

# Convexity margin: cross products must exceed this times diameter^2.
CONVEXITY_RTOL = 1e-12


def bilinear_coefficients(corners: np.ndarray):
    """Coefficients (a, b) of the bilinear map from [-1/2, 1/2]^2 to the cell.

    x(xi, eta) = a0 + a1 xi + a2 eta + a3 xi eta and likewise y with b;
    the reference corners (-+1/2, -+1/2) map to A, B, C, D exactly.
    Returns two arrays of shape (..., 4).
    """
    x = corners[..., 0]
    y = corners[..., 1]

    def solve(v):
        vA, vB, vC, vD = v[..., 0], v[..., 1], v[..., 2], v[..., 3]
        return np.stack(
            [
                (vA + vB + vC + vD) / 4.0,
                (vB + vC - vA - vD) / 2.0,
                (vC + vD - vA - vB) / 2.0,
                vA - vB + vC - vD,
            ],
            axis=-1,
        )

    return solve(x), solve(y)


def map_points(a: np.ndarray, b: np.ndarray, xi: float, eta: float) -> np.ndarray:
    """Physical coordinates of one reference point, shape (..., 2)."""
    x = a[..., 0] + a[..., 1] * xi + a[..., 2] * eta + a[..., 3] * xi * eta
    y = b[..., 0] + b[..., 1] * xi + b[..., 2] * eta + b[..., 3] * xi * eta
    return np.stack([x, y], axis=-1)


def exact_moments(corners: np.ndarray) -> np.ndarray:
    """Geometric moments m_{s,r} (s + r <= 2) of each cell, shape (..., 6).

    Uses the 3x3 tensor Gauss-Lobatto rule on the bilinear map, which is
    exact for these degrees: the integrand x^s y^r |J| has degree at most
    3 in each reference coordinate.
    """
    a, b = bilinear_coefficients(corners)
    out = np.zeros(corners.shape[:-2] + (6,))
    for i, xi in enumerate(GL_NODES):
        for j, eta in enumerate(GL_NODES):
            w = GL_WEIGHTS[i] * GL_WEIGHTS[j]
            x = a[..., 0] + a[..., 1] * xi + a[..., 2] * eta + a[..., 3] * xi * eta
            y = b[..., 0] + b[..., 1] * xi + b[..., 2] * eta + b[..., 3] * xi * eta
            jac = (a[..., 1] + a[..., 3] * eta) * (b[..., 2] + b[..., 3] * xi) - (
                a[..., 2] + a[..., 3] * xi
            ) * (b[..., 1] + b[..., 3] * eta)
            jac = np.abs(jac)
            out[..., 0] += w * jac
            out[..., 1] += w * x * jac
            out[..., 2] += w * y * jac
            out[..., 3] += w * x * x * jac
            out[..., 4] += w * x * y * jac
            out[..., 5] += w * y * y * jac
    return out


def shoelace_area(corners: np.ndarray) -> np.ndarray:
    """Signed polygon area; positive for counterclockwise ordering."""
    x = corners[..., 0]
    y = corners[..., 1]
    xn = np.roll(x, -1, axis=-1)
    yn = np.roll(y, -1, axis=-1)
    return 0.5 * np.sum(x * yn - xn * y, axis=-1)


def edge_vectors(corners: np.ndarray) -> np.ndarray:
    """Edge vectors B-A, C-B, D-C, A-D, shape (..., 4, 2)."""
    return np.roll(corners, -1, axis=-2) - corners


def edge_lengths(corners: np.ndarray) -> np.ndarray:
    return np.linalg.norm(edge_vectors(corners), axis=-1)


def scaled_normals(corners: np.ndarray) -> np.ndarray:
    """Outward normals with length |l^k|: the edge vector rotated by -pi/2."""
    e = edge_vectors(corners)
    return np.stack([e[..., 1], -e[..., 0]], axis=-1)


def unit_normals(corners: np.ndarray) -> np.ndarray:
    n = scaled_normals(corners)
    ln = np.linalg.norm(n, axis=-1, keepdims=True)
    if np.any(ln == 0.0):
        raise RegularityError("zero-length edge")
    return n / ln


def edge_points(corners: np.ndarray) -> np.ndarray:
    """Gauss-Lobatto points per edge, shape (..., 4, 3, 2).

    Ordered (start, midpoint, end) along the counterclockwise traversal,
    so a shared edge sees the same coordinates from both sides in
    reversed order.
    """
    p0 = corners
    p1 = np.roll(corners, -1, axis=-2)
    mid = 0.5 * (p0 + p1)
    return np.stack([p0, mid, p1], axis=-2)


def cell_at(corners0: np.ndarray, velocities: np.ndarray, tau: float) -> np.ndarray:
    """Cell vertices after moving linearly for pseudo-time tau."""
    return corners0 + tau * velocities


def cell_diameters(corners: np.ndarray) -> np.ndarray:
    """Max pairwise vertex distance per cell (edges and diagonals)."""
    d2 = np.sum(edge_vectors(corners) ** 2, axis=-1).max(axis=-1)
    g1 = np.sum((corners[..., 2, :] - corners[..., 0, :]) ** 2, axis=-1)
    g2 = np.sum((corners[..., 3, :] - corners[..., 1, :]) ** 2, axis=-1)
    return np.sqrt(np.maximum(d2, np.maximum(g1, g2)))


def regularity_violations(corners: np.ndarray):
    """Vectorized regularity verdicts.

    Returns (ok, reason) where ok is a boolean array over cells and
    reason an integer code: 0 ok, 1 degenerate vertices, 2 orientation
    (non-positive area), 3 non-convex.
    """
    reason = np.zeros(corners.shape[:-2], dtype=np.int8)
    e = edge_vectors(corners)
    e2 = np.sum(e * e, axis=-1)
    g1 = np.sum((corners[..., 2, :] - corners[..., 0, :]) ** 2, axis=-1)
    g2 = np.sum((corners[..., 3, :] - corners[..., 1, :]) ** 2, axis=-1)
    min_pair = np.minimum(np.min(e2, axis=-1), np.minimum(g1, g2))
    reason = np.where(min_pair <= 0.0, 1, reason)

    area = shoelace_area(corners)
    reason = np.where((reason == 0) & (area <= 0.0), 2, reason)

    en = np.roll(e, -1, axis=-2)
    cross = e[..., 0] * en[..., 1] - e[..., 1] * en[..., 0]
    diam2 = np.maximum(np.max(e2, axis=-1), np.maximum(g1, g2))
    convex = np.all(cross > CONVEXITY_RTOL * diam2[..., None], axis=-1)
    reason = np.where((reason == 0) & ~convex, 3, reason)
    return reason == 0, reason


_REASONS = {1: "degenerate vertices", 2: "orientation (not counterclockwise)", 3: "non-convex"}


def regularity_check(corners: np.ndarray):
    """Single-cell verdict: (True, 'ok') or (False, description)."""
    ok, reason = regularity_violations(corners)
    if np.all(ok):
        return True, "ok"
    code = int(np.atleast_1d(reason).flat[np.argmax(~np.atleast_1d(ok))])
    return False, _REASONS.get(code, "irregular")


def require_regular(corners: np.ndarray, context: str = "") -> None:
    """Raise RegularityError naming the first offending cell."""
    ok, reason = regularity_violations(corners)
    if np.all(ok):
        return
    ok = np.atleast_1d(ok)
    reason = np.atleast_1d(reason)
    first = tuple(int(i) for i in np.argwhere(~ok)[0])
    code = int(reason[first])
    where = f" at cell {first}" if corners.ndim > 2 else ""
    ctx = f" [{context}]" if context else ""
    raise RegularityError(f"{_REASONS.get(code, 'irregular')}{where}{ctx}")


def centroids(moments: np.ndarray) -> np.ndarray:
    """Centroid(s) from a moment set, shape (..., 2)."""
    return moments[..., 1:3] / moments[..., 0:1]


def frames(volume_m00: np.ndarray, shape_moments: np.ndarray) -> np.ndarray:
    """Basis frames (xc, yc, h), shape (..., 3).

    The centroid comes from the moments that describe the cell shape;
    the scale h = sqrt(m00) comes from the volume actually used to form
    cell averages (these differ only in GCL mode).
    """
    c = centroids(shape_moments)
    h = np.sqrt(volume_m00)
    return np.concatenate([c, h[..., None]], axis=-1)


def basis_integrals(moments: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Integrals of all six psi_{s,r} over cells, shape (..., 6).

    frame holds the *target* cell's (xc, yc, h); moments belong to the
    cell integrated over (a stencil member). Expanding psi in monomials
    gives the binomial combination of that cell's moments.
    """
    xc = frame[..., 0]
    yc = frame[..., 1]
    h = frame[..., 2]
    m00, m10, m01, m20, m11, m02 = (moments[..., k] for k in range(6))
    out = np.empty(np.broadcast(m00, xc).shape + (6,))
    out[..., 0] = m00
    out[..., 1] = (m10 - xc * m00) / h
    out[..., 2] = (m01 - yc * m00) / h
    h2 = h * h
    out[..., 3] = (m20 - 2.0 * xc * m10 + xc * xc * m00) / h2
    out[..., 4] = (m11 - xc * m01 - yc * m10 + xc * yc * m00) / h2
    out[..., 5] = (m02 - 2.0 * yc * m01 + yc * yc * m00) / h2
    return out


def basis_integral(moments: np.ndarray, frame: np.ndarray, s: int, r: int) -> np.ndarray:
    """Single basis-function integral; (0,0) returns m00 bitwise."""
    if s < 0 or r < 0 or s + r > 2:
        raise UnsupportedDegree(f"basis integral of degree {s + r} not supported")
    if (s, r) == (0, 0):
        return moments[..., 0]
    idx = MOMENT_POWERS.index((s, r))
    return basis_integrals(moments, frame)[..., idx]


def translate_moments(moments: np.ndarray, shift: np.ndarray) -> np.ndarray:
    """Moments of the cell translated by `shift` (binomial identity)."""
    dx = np.asarray(shift)[..., 0]
    dy = np.asarray(shift)[..., 1]
    m00, m10, m01, m20, m11, m02 = (moments[..., k] for k in range(6))
    out = np.empty_like(moments)
    out[..., 0] = m00
    out[..., 1] = m10 + dx * m00
    out[..., 2] = m01 + dy * m00
    out[..., 3] = m20 + 2.0 * dx * m10 + dx * dx * m00
    out[..., 4] = m11 + dx * m01 + dy * m10 + dx * dy * m00
    out[..., 5] = m02 + 2.0 * dy * m01 + dy * dy * m00
    return out


def edge_moment_rates(corners: np.ndarray, vertex_velocities: np.ndarray) -> np.ndarray:
    """Per-edge boundary integrals of x^s y^r (w . n), shape (..., 4, 6).

    w at the quadrature points is the linear interpolation of the edge's
    endpoint velocities; the three-point rule is exact here because the
    integrand has degree s + r + 1 <= 3 along the edge.
    """
    pts = edge_points(corners)  # (..., 4, 3, 2)
    v0 = vertex_velocities
    v1 = np.roll(vertex_velocities, -1, axis=-2)
    vmid = 0.5 * (v0 + v1)
    vel = np.stack([v0, vmid, v1], axis=-2)  # (..., 4, 3, 2)
    nstar = scaled_normals(corners)  # (..., 4, 2), length |l^k|
    wdotn = np.sum(vel * nstar[..., None, :], axis=-1)  # (..., 4, 3)
    x = pts[..., 0]
    y = pts[..., 1]
    mono = np.stack(
        [np.ones_like(x), x, y, x * x, x * y, y * y], axis=-1
    )  # (..., 4, 3, 6)
    return np.einsum("g,...kgp,...kg->...kp", GL_WEIGHTS, mono, wdotn)


def moment_rhs(corners: np.ndarray, vertex_velocities: np.ndarray) -> np.ndarray:
    """d/dtau of the moment set for cells moving with the given vertex
    velocities, shape (..., 6). Sums the four edge contributions of
    `edge_moment_rates`."""
    return np.sum(edge_moment_rates(corners, vertex_velocities), axis=-2)

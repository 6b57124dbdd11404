"""Shared test helpers: independent oracles and random-geometry factories.

The oracles here deliberately avoid the library's own code paths:
triangle moments use closed-form vertex formulas, edge integrals a dense
Gauss-Legendre rule, and the advected-average reference an explicit
binomial double sum.
"""

import math

import numpy as np
import pytest

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def triangle_moments(p1, p2, p3):
    """Closed-form integrals of 1, x, y, x^2, xy, y^2 over a triangle."""
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    A = 0.5 * ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))
    m00 = A
    m10 = A * (x1 + x2 + x3) / 3.0
    m01 = A * (y1 + y2 + y3) / 3.0
    m20 = A / 6.0 * (x1 * x1 + x2 * x2 + x3 * x3 + x1 * x2 + x1 * x3 + x2 * x3)
    m02 = A / 6.0 * (y1 * y1 + y2 * y2 + y3 * y3 + y1 * y2 + y1 * y3 + y2 * y3)
    m11 = A / 12.0 * (
        x1 * (2 * y1 + y2 + y3) + x2 * (y1 + 2 * y2 + y3) + x3 * (y1 + y2 + 2 * y3)
    )
    return np.array([m00, m10, m01, m20, m11, m02])


def quad_moments_oracle(corners):
    """Two-triangle decomposition of a convex quad's moments."""
    a, b, c, d = corners
    return triangle_moments(a, b, c) + triangle_moments(a, c, d)


def random_regular_quads(seed, count, distort=0.4):
    """Unit-square cells with perturbed corners, filtered to regular ones."""
    from mmfv import geometry as geo

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        batch = UNIT_SQUARE + distort * (rng.random((count, 4, 2)) - 0.5)
        ok, _ = geo.regularity_violations(batch)
        out.extend(batch[ok])
    return np.array(out[:count])


def binomial_shift_average(coeffs, ax, ay, t, moments):
    """Exact cell average of the advected quadratic, explicit double sum."""
    powers = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    index = {pq: k for k, pq in enumerate(powers)}
    total = 0.0
    for c, (s, r) in zip(coeffs, powers):
        inner = 0.0
        for k in range(s + 1):
            for l in range(r + 1):
                inner += (
                    math.comb(s, k)
                    * math.comb(r, l)
                    * (-ax * t) ** (s - k)
                    * (-ay * t) ** (r - l)
                    * moments[..., index[(k, l)]]
                )
        total = total + c * inner
    return total / moments[..., 0]


def dense_edge_integral(p0, p1, f, npts=64):
    """Dense Gauss-Legendre line integral of f(x, y) ds along a segment."""
    x, w = np.polynomial.legendre.leggauss(npts)
    s = 0.5 * (x + 1.0)
    pts = p0[None, :] + s[:, None] * (p1 - p0)[None, :]
    seg = np.linalg.norm(p1 - p0)
    return seg * np.sum(w * 0.5 * f(pts[:, 0], pts[:, 1]))


def distorted_mesh(nx, ny, seed, distort=0.4, bounds=(0.0, 1.0, 0.0, 1.0)):
    """Uniform mesh with randomly perturbed interior vertices."""
    from mmfv.mesh import Mesh
    from mmfv.rng import SplitMix64

    mesh = Mesh.uniform(nx, ny, bounds)
    hx, hy = mesh.spacing
    rng = SplitMix64(seed)
    v = mesh.verts.copy()
    v[1:-1, 1:-1] += distort * np.array([hx, hy]) * rng.uniform_centered((nx - 1, ny - 1, 2))
    return v


@pytest.fixture
def quad_coeffs():
    return np.array([1.0, 2.0, 3.0, 1.0, -1.0, 1.0])

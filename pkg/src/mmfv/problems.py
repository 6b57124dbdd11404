"""Benchmark problem definitions: initial data and analytic references."""

from __future__ import annotations

import numpy as np

from . import geometry as geo
from .errors import ConfigError

# 5-point Gauss-Legendre rule on [-1/2, 1/2] for projecting non-polynomial
# initial data onto cell averages.
_GL5_X, _GL5_W = np.polynomial.legendre.leggauss(5)
_GL5_X = _GL5_X / 2.0
_GL5_W = _GL5_W / 2.0


def project_pointwise(fn, corners: np.ndarray) -> np.ndarray:
    """Cell averages of a pointwise conserved-state function.

    fn maps coordinate arrays (x, y) -> states (..., m); integration uses
    the 5x5 tensor Gauss rule through the bilinear map of each cell.
    """
    a, b = geo.bilinear_coefficients(corners)
    num = None
    vol = np.zeros(corners.shape[:-2])
    for i, xi in enumerate(_GL5_X):
        for j, eta in enumerate(_GL5_X):
            w = _GL5_W[i] * _GL5_W[j]
            x = a[..., 0] + a[..., 1] * xi + a[..., 2] * eta + a[..., 3] * xi * eta
            y = b[..., 0] + b[..., 1] * xi + b[..., 2] * eta + b[..., 3] * xi * eta
            jac = np.abs(
                (a[..., 1] + a[..., 3] * eta) * (b[..., 2] + b[..., 3] * xi)
                - (a[..., 2] + a[..., 3] * xi) * (b[..., 1] + b[..., 3] * eta)
            )
            vals = fn(x, y) * (w * jac)[..., None]
            num = vals if num is None else num + vals
            vol += w * jac
    return num / vol[..., None]


class QuadraticAdvection:
    """Scalar advection of a quadratic polynomial: the exactness workhorse.

    coeffs are the six monomial coefficients [1, x, y, x^2, xy, y^2];
    the exact solution is the same polynomial with its argument shifted
    by -a*t, so exact cell averages follow from the moment translation
    identity.
    """

    def __init__(self, coeffs, ax: float, ay: float):
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.shape != (6,):
            raise ConfigError("quadratic advection needs six coefficients")
        self.a = np.array([float(ax), float(ay)])

    def exact_averages(self, moments: np.ndarray, t: float) -> np.ndarray:
        """Exact cell averages at time t, shape (..., 1)."""
        shifted = geo.translate_moments(moments, -self.a * t)
        avg = shifted @ self.coeffs / moments[..., 0]
        return avg[..., None]

    def coefficients_at(self, t: float) -> np.ndarray:
        """Monomial coefficients of the advected polynomial p(x - a t)."""
        dx, dy = self.a * t
        c = self.coeffs
        return np.array(
            [
                c[0] - c[1] * dx - c[2] * dy + c[3] * dx * dx + c[4] * dx * dy + c[5] * dy * dy,
                c[1] - 2.0 * c[3] * dx - c[4] * dy,
                c[2] - c[4] * dx - 2.0 * c[5] * dy,
                c[3],
                c[4],
                c[5],
            ]
        )

    def _advective_derivative(self, c: np.ndarray) -> np.ndarray:
        """Coefficients of a . grad p."""
        ax, ay = self.a
        return np.array(
            [ax * c[1] + ay * c[2], 2.0 * ax * c[3] + ay * c[4], ax * c[4] + 2.0 * ay * c[5], 0.0, 0.0, 0.0]
        )

    def stage_coefficients(self, tctx) -> np.ndarray:
        """Coefficients matching the interior SSPRK3 stage states.

        Intermediate stages hold forward-Euler transports of the base
        polynomial, not exact-solution snapshots; ghost data must follow
        the same algebra or the stage coupling breaks the exactness.
        """
        c0 = self.coefficients_at(tctx.t_base)
        if tctx.stage in (None, 0):
            return c0 if tctx.stage == 0 else self.coefficients_at(tctx.t)
        fe = lambda c: c - tctx.dt * self._advective_derivative(c)
        if tctx.stage == 1:
            return fe(c0)
        return 0.75 * c0 + 0.25 * fe(fe(c0))

    def boundary_handle(self):
        def fill(moments, corners, tctx):
            c = self.stage_coefficients(tctx)
            avg = moments @ c / moments[..., 0]
            return avg[..., None]

        return fill

    def pointwise(self, x, y, t=0.0):
        xs = x - self.a[0] * t
        ys = y - self.a[1] * t
        c = self.coeffs
        vals = c[0] + c[1] * xs + c[2] * ys + c[3] * xs * xs + c[4] * xs * ys + c[5] * ys * ys
        return vals[..., None]


class EulerSine:
    """Smooth Euler test: density sine wave advected by a uniform flow."""

    def __init__(self, model):
        self.model = model

    def primitive(self, x, y, t=0.0):
        rho = 1.0 + 0.2 * np.sin(2.0 * np.pi * (x + y - 2.0 * t))
        one = np.ones_like(x)
        return np.stack([rho, one, one, one], axis=-1)

    def conserved(self, x, y, t=0.0):
        return self.model.from_primitive(self.primitive(x, y, t))

    def averages(self, corners, t=0.0):
        return project_pointwise(lambda x, y: self.conserved(x, y, t), corners)


def blast_primitive(x, y):
    """Woodward-Colella interacting blast waves (quasi-1D in x)."""
    p = np.where(x < 0.1, 1.0e3, np.where(x < 0.9, 1.0e-2, 1.0e2))
    z = np.zeros_like(x)
    return np.stack([np.ones_like(x), z, z, p], axis=-1)


def shu_osher_primitive(x, y):
    """Shock / sine-entropy-wave interaction."""
    rho = np.where(x < -4.0, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
    vx = np.where(x < -4.0, 2.629369, 0.0)
    p = np.where(x < -4.0, 10.33333, 1.0)
    return np.stack([rho, vx, np.zeros_like(x), p], axis=-1)


def riemann2d_primitive(x, y):
    """Four-quadrant 2D Riemann problem: two contacts and two shocks."""
    q11 = np.array([0.8, 0.0, 0.0, 1.0])  # x<0.5, y<0.5
    q12 = np.array([1.0, 0.7276, 0.0, 1.0])  # x<0.5, y>=0.5
    q21 = np.array([1.0, 0.0, 0.7276, 1.0])  # x>=0.5, y<0.5
    q22 = np.array([0.5313, 0.0, 0.0, 0.4])  # x>=0.5, y>=0.5
    left = np.where(y[..., None] < 0.5, q11, q12)
    right = np.where(y[..., None] < 0.5, q21, q22)
    return np.where(x[..., None] < 0.5, left, right)


class DoubleMachReflection:
    """Mach-10 oblique-shock setup on [0,4] x [0,1] (conventional version).

    The incident shock meets y = 0 at x = 1/6 with a 60-degree
    inclination; the top boundary follows the exact shock locus
    x_s(t) = 1/6 + (1 + 20 t)/sqrt(3).
    """

    def __init__(self, model):
        self.model = model
        s60, c60 = np.sin(np.pi / 3.0), np.cos(np.pi / 3.0)
        self.post = np.array([8.0, 8.25 * s60, -8.25 * c60, 116.5])
        self.pre = np.array([1.4, 0.0, 0.0, 1.0])

    def primitive(self, x, y):
        behind = x < 1.0 / 6.0 + y / np.sqrt(3.0)
        return np.where(behind[..., None], self.post, self.pre)

    def _split(self, moments, xs):
        xc = geo.centroids(moments)[..., 0]
        behind = xc < xs
        prim = np.where(behind[..., None], self.post, self.pre)
        return self.model.from_primitive(prim)

    def top_averages(self, moments, corners, t):
        return self._split(moments, 1.0 / 6.0 + (1.0 + 20.0 * t) / np.sqrt(3.0))

    def bottom_averages(self, moments, corners, mirrored):
        xc = geo.centroids(moments)[..., 0]
        post = self.model.from_primitive(np.broadcast_to(self.post, mirrored.shape))
        return np.where(xc[..., None] < 1.0 / 6.0, post, mirrored)

    def left_handle(self):
        post = self.model.from_primitive(self.post)
        return lambda moments, corners, t: np.broadcast_to(
            post, moments.shape[:-1] + (4,)
        )

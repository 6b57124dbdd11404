"""Physics models: scalar linear advection and 2D compressible Euler.

States are arrays with the conserved components on the last axis
(m = 1 for advection, m = 4 for Euler as rho, rho*vx, rho*vy, E).
Normals likewise carry (nx, ny) on the last axis; they need not be
unit length for `normal_flux` (everything is linear in n), but
`max_wavespeed` expects unit normals.
"""

from __future__ import annotations

import numpy as np

from .errors import StateError


class Advection:
    """u_t + a . grad u = 0 with constant velocity a."""

    kind = "advection"
    m = 1

    def __init__(self, ax: float, ay: float):
        self.a = np.array([float(ax), float(ay)])

    def normal_flux(self, U: np.ndarray, n: np.ndarray) -> np.ndarray:
        an = n[..., 0] * self.a[0] + n[..., 1] * self.a[1]
        return U * an[..., None]

    def max_wavespeed(self, U: np.ndarray, n: np.ndarray) -> np.ndarray:
        an = n[..., 0] * self.a[0] + n[..., 1] * self.a[1]
        return np.abs(an) * np.ones(U.shape[:-1])

    def velocity(self, U: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self.a, U.shape[:-1] + (2,))

    def indicator_components(self, U: np.ndarray) -> np.ndarray:
        return U[..., 0:1]

    def inflow_speed(self, U: np.ndarray, n_unit: np.ndarray) -> np.ndarray:
        """Most negative incoming characteristic speed across an edge."""
        an = n_unit[..., 0] * self.a[0] + n_unit[..., 1] * self.a[1]
        return an * np.ones(U.shape[:-1])

    def validate(self, U: np.ndarray) -> None:
        if not np.all(np.isfinite(U)):
            raise StateError("non-finite advection state")


class Euler:
    """2D compressible Euler equations with ideal-gas law."""

    kind = "euler"
    m = 4

    def __init__(self, gamma: float = 1.4):
        if gamma <= 1.0:
            raise StateError(f"gamma must exceed 1, got {gamma}")
        self.gamma = float(gamma)

    def pressure(self, U: np.ndarray) -> np.ndarray:
        rho = U[..., 0]
        ke = 0.5 * (U[..., 1] ** 2 + U[..., 2] ** 2) / rho
        return (self.gamma - 1.0) * (U[..., 3] - ke)

    def from_primitive(self, prim: np.ndarray) -> np.ndarray:
        """(rho, vx, vy, p) -> conserved. Validates positivity."""
        rho, vx, vy, p = (prim[..., k] for k in range(4))
        if np.any(rho <= 0.0) or np.any(p <= 0.0):
            raise StateError("non-positive density or pressure in primitive state")
        E = p / (self.gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy)
        return np.stack([rho, rho * vx, rho * vy, E], axis=-1)

    def to_primitive(self, U: np.ndarray) -> np.ndarray:
        """Conserved -> (rho, vx, vy, p). Validates positivity."""
        rho = U[..., 0]
        if np.any(rho <= 0.0):
            raise StateError("non-positive density")
        vx = U[..., 1] / rho
        vy = U[..., 2] / rho
        p = (self.gamma - 1.0) * (U[..., 3] - 0.5 * rho * (vx * vx + vy * vy))
        if np.any(p <= 0.0):
            raise StateError("non-positive pressure")
        return np.stack([rho, vx, vy, p], axis=-1)

    def normal_flux(self, U: np.ndarray, n: np.ndarray) -> np.ndarray:
        rho = U[..., 0]
        vx = U[..., 1] / rho
        vy = U[..., 2] / rho
        p = (self.gamma - 1.0) * (U[..., 3] - 0.5 * rho * (vx * vx + vy * vy))
        vn = vx * n[..., 0] + vy * n[..., 1]
        return np.stack(
            [
                rho * vn,
                U[..., 1] * vn + p * n[..., 0],
                U[..., 2] * vn + p * n[..., 1],
                (U[..., 3] + p) * vn,
            ],
            axis=-1,
        )

    def max_wavespeed(self, U: np.ndarray, n: np.ndarray) -> np.ndarray:
        rho = U[..., 0]
        vx = U[..., 1] / rho
        vy = U[..., 2] / rho
        p = (self.gamma - 1.0) * (U[..., 3] - 0.5 * rho * (vx * vx + vy * vy))
        if np.any(rho <= 0.0) or np.any(p <= 0.0):
            raise StateError("non-physical state in wavespeed evaluation")
        c = np.sqrt(self.gamma * p / rho)
        return np.abs(vx * n[..., 0] + vy * n[..., 1]) + c

    def velocity(self, U: np.ndarray) -> np.ndarray:
        return U[..., 1:3] / U[..., 0:1]

    def indicator_components(self, U: np.ndarray) -> np.ndarray:
        """Density and total energy: jumps in either mark troubled cells
        (a pressure-only discontinuity leaves the density flat)."""
        return U[..., [0, 3]]

    def inflow_speed(self, U: np.ndarray, n_unit: np.ndarray) -> np.ndarray:
        """Acoustic inflow: v.n - c, negative whenever any characteristic
        enters the cell (pressure jumps at rest still register)."""
        rho = U[..., 0]
        vx = U[..., 1] / rho
        vy = U[..., 2] / rho
        p = (self.gamma - 1.0) * (U[..., 3] - 0.5 * rho * (vx * vx + vy * vy))
        c = np.sqrt(self.gamma * np.maximum(p, 1e-300) / rho)
        return vx * n_unit[..., 0] + vy * n_unit[..., 1] - c

    def invalid_mask(self, U: np.ndarray) -> np.ndarray:
        """Point states with non-positive density or pressure."""
        rho = U[..., 0]
        ke = 0.5 * (U[..., 1] ** 2 + U[..., 2] ** 2)
        # rho * p / (gamma - 1) > 0 without dividing by questionable rho
        return (rho <= 0.0) | (rho * U[..., 3] - ke <= 0.0)

    def validate(self, U: np.ndarray) -> None:
        self.to_primitive(U)


def make_model(kind: str, *, ax: float = 1.0, ay: float = 1.0, gamma: float = 1.4):
    if kind == "advection":
        return Advection(ax, ay)
    if kind == "euler":
        return Euler(gamma)
    raise ValueError(f"unknown model kind: {kind}")

"""Structured quadrilateral meshes.

The mesh is a logically Cartesian (Nx+1) x (Ny+1) vertex array; cell
(i, j) has corners A = v[i, j], B = v[i+1, j], C = v[i+1, j+1],
D = v[i, j+1], which is counterclockwise while the mesh stays regular.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def cell_corners(verts: np.ndarray) -> np.ndarray:
    """Per-cell corner array (nx, ny, 4, 2) from vertices (nx+1, ny+1, 2)."""
    return np.stack(
        [verts[:-1, :-1], verts[1:, :-1], verts[1:, 1:], verts[:-1, 1:]], axis=2
    )


def uniform_vertices(nx: int, ny: int, bounds) -> np.ndarray:
    """Uniform Cartesian vertex array over bounds = (x0, x1, y0, y1)."""
    x0, x1, y0, y1 = bounds
    x = np.linspace(x0, x1, nx + 1)
    y = np.linspace(y0, y1, ny + 1)
    return np.stack(np.meshgrid(x, y, indexing="ij"), axis=-1)


@dataclass
class Mesh:
    """Vertex array plus the time-zero domain box (used for periodicity)."""

    verts: np.ndarray
    bounds: tuple

    @classmethod
    def uniform(cls, nx: int, ny: int, bounds) -> "Mesh":
        return cls(uniform_vertices(nx, ny, bounds), tuple(float(b) for b in bounds))

    @property
    def nx(self) -> int:
        return self.verts.shape[0] - 1

    @property
    def ny(self) -> int:
        return self.verts.shape[1] - 1

    @property
    def spacing(self) -> tuple:
        x0, x1, y0, y1 = self.bounds
        return (x1 - x0) / self.nx, (y1 - y0) / self.ny

    def corners(self) -> np.ndarray:
        return cell_corners(self.verts)

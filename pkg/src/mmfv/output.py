"""CSV tables and legacy-VTK snapshots.

All floats are written with %.17g so outputs are byte-stable given
identical inputs.
"""

from __future__ import annotations

import os

import numpy as np

ERROR_HEADER = "mesh,Nx,Ny,L1,Linf,order_L1,order_Linf,N_levels_avg,Lw_max,runtime_s"
DIAG_HEADER = "step,t,dt,N_levels,min_volume,conservation_residual"


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_error_csv(path: str, rows) -> None:
    """rows: Each row is (mesh_label, nx, ny, L1, Linf, order_L1|None,
    order_Linf|None, n_levels_avg, lw_max, runtime_s)."""
    lines = [ERROR_HEADER]
    for row in rows:
        mesh, nx, ny, l1, linf, o1, oinf, nl, lw, rt = row
        lines.append(
            ",".join(
                [
                    str(mesh),
                    str(int(nx)),
                    str(int(ny)),
                    fmt(l1),
                    fmt(linf),
                    "" if o1 is None else fmt(o1),
                    "" if oinf is None else fmt(oinf),
                    fmt(nl),
                    fmt(lw),
                    fmt(rt),
                ]
            )
        )
    _write_lines(path, lines)


def write_diagnostics_csv(path: str, rows) -> None:
    lines = [DIAG_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [str(int(row["step"])), fmt(row["t"]), fmt(row["dt"]),
                 str(int(row["n_levels"])), fmt(row["min_volume"]),
                 fmt(row["conservation_residual"])]
            )
        )
    _write_lines(path, lines)


def _write_lines(path: str, lines) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_vtk(path: str, verts: np.ndarray, cell_data: dict, title: str = "snapshot") -> None:
    """Legacy-VTK unstructured grid with quad cells and cell scalars.

    verts: (nx+1, ny+1, 2); cell_data: name -> (nx, ny) array.
    """
    nvx, nvy = verts.shape[0], verts.shape[1]
    nx, ny = nvx - 1, nvy - 1
    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {nvx * nvy} double",
    ]
    # Vertex index (i, j) -> flat j*nvx + i (x fastest).
    for j in range(nvy):
        for i in range(nvx):
            lines.append(f"{fmt(verts[i, j, 0])} {fmt(verts[i, j, 1])} 0")
    ncell = nx * ny
    lines.append(f"CELLS {ncell} {5 * ncell}")
    for j in range(ny):
        for i in range(nx):
            a = j * nvx + i
            b = j * nvx + i + 1
            c = (j + 1) * nvx + i + 1
            d = (j + 1) * nvx + i
            lines.append(f"4 {a} {b} {c} {d}")
    lines.append(f"CELL_TYPES {ncell}")
    lines.extend(["9"] * ncell)
    lines.append(f"CELL_DATA {ncell}")
    for name, data in cell_data.items():
        lines.append(f"SCALARS {name} double 1")
        lines.append("LOOKUP_TABLE default")
        for j in range(ny):
            for i in range(nx):
                lines.append(fmt(data[i, j]))
    _write_lines(path, lines)


def snapshot_fields(model, averages: np.ndarray) -> dict:
    """Conserved plus primitive cell scalars for a snapshot."""
    out = {}
    if model.m == 1:
        out["u"] = averages[..., 0]
        return out
    prim = model.to_primitive(averages)
    out["rho"] = averages[..., 0]
    out["mom_x"] = averages[..., 1]
    out["mom_y"] = averages[..., 2]
    out["energy"] = averages[..., 3]
    out["vel_x"] = prim[..., 1]
    out["vel_y"] = prim[..., 2]
    out["pressure"] = prim[..., 3]
    return out

/** Synthetic fixtures matching the solver's file schemas. */

import { ERROR_HEADER } from "../src/csv.js";

export function errorCsv(rows: Array<[number, number, number]>): string {
    // rows: (n, L1, Linf); orders filled the way the solver does
    const lines = [ERROR_HEADER];
    let prev: [number, number] | null = null;
    for (const [n, l1, linf] of rows) {
        const o1 = prev ? Math.log2(prev[0] / l1).toPrecision(17) : "";
        const oi = prev ? Math.log2(prev[1] / linf).toPrecision(17) : "";
        lines.push(`${n}x${n},${n},${n},${l1},${linf},${o1},${oi},2,100,1.5`);
        prev = [l1, linf];
    }
    return lines.join("\n") + "\n";
}

/** Structured quad-mesh VTK with the given cell field(s). */
export function vtkText(
    nx: number,
    ny: number,
    fields: Record<string, (cx: number, cy: number) => number>,
    distort = 0.0,
): string {
    const nvx = nx + 1;
    const nvy = ny + 1;
    const lines = [
        "# vtk DataFile Version 3.0",
        "test snapshot",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        `POINTS ${nvx * nvy} double`,
    ];
    const px: number[] = [];
    const py: number[] = [];
    for (let j = 0; j < nvy; j++) {
        for (let i = 0; i < nvx; i++) {
            const interior = i > 0 && i < nx && j > 0 && j < ny;
            const wob = interior ? distort * Math.sin(3.7 * i + 1.3 * j) : 0;
            const x = i / nx + wob / nx;
            const y = j / ny - wob / ny;
            px.push(x);
            py.push(y);
            lines.push(`${x} ${y} 0`);
        }
    }
    lines.push(`CELLS ${nx * ny} ${5 * nx * ny}`);
    for (let j = 0; j < ny; j++) {
        for (let i = 0; i < nx; i++) {
            const a = j * nvx + i;
            lines.push(`4 ${a} ${a + 1} ${a + nvx + 1} ${a + nvx}`);
        }
    }
    lines.push(`CELL_TYPES ${nx * ny}`);
    for (let c = 0; c < nx * ny; c++) lines.push("9");
    lines.push(`CELL_DATA ${nx * ny}`);
    for (const [name, fn] of Object.entries(fields)) {
        lines.push(`SCALARS ${name} double 1`);
        lines.push("LOOKUP_TABLE default");
        for (let j = 0; j < ny; j++) {
            for (let i = 0; i < nx; i++) {
                const ids = [j * nvx + i, j * nvx + i + 1, (j + 1) * nvx + i + 1, (j + 1) * nvx + i];
                const cx = ids.reduce((s, id) => s + px[id], 0) / 4;
                const cy = ids.reduce((s, id) => s + py[id], 0) / 4;
                lines.push(`${fn(cx, cy)}`);
            }
        }
    }
    return lines.join("\n") + "\n";
}

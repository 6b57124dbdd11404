import { ParseError } from "./errors.js";

/**
 * The solver's legacy-VTK snapshots: an unstructured grid whose quads
 * follow the structured ordering (x-fastest points, row-major cells).
 */
export interface QuadMesh {
    /** vertex counts per direction */
    nvx: number;
    nvy: number;
    /** cell counts per direction */
    nx: number;
    ny: number;
    /** vertex coordinates, index j * nvx + i */
    px: Float64Array;
    py: Float64Array;
    /** cell scalar fields, index j * nx + i */
    fields: Map<string, Float64Array>;
}

class Cursor {
    lines: string[];
    pos = 0;
    constructor(text: string, public source: string) {
        this.lines = text.split(/\r?\n/);
    }
    next(): string {
        while (this.pos < this.lines.length) {
            const ln = this.lines[this.pos++];
            if (ln.trim() !== "") return ln.trim();
        }
        throw new ParseError(this.source, this.lines.length, "unexpected end of file");
    }
    get lineNo(): number {
        return this.pos;
    }
}

function expectPrefix(cur: Cursor, prefix: string): string {
    const ln = cur.next();
    if (!ln.startsWith(prefix)) {
        throw new ParseError(cur.source, cur.lineNo, `expected '${prefix}', got '${ln}'`);
    }
    return ln;
}

/** Read `count` whitespace-separated numbers spanning as many lines as needed. */
function readNumbers(cur: Cursor, count: number): Float64Array {
    const out = new Float64Array(count);
    let got = 0;
    while (got < count) {
        const parts = cur.next().split(/\s+/);
        for (const p of parts) {
            if (got >= count) {
                throw new ParseError(cur.source, cur.lineNo, "too many values on line");
            }
            const v = Number(p);
            if (Number.isNaN(v)) {
                throw new ParseError(cur.source, cur.lineNo, `expected a number, got '${p}'`);
            }
            out[got++] = v;
        }
    }
    return out;
}

export function parseVtk(text: string, source = "<vtk>"): QuadMesh {
    const cur = new Cursor(text, source);
    expectPrefix(cur, "# vtk DataFile");
    cur.next(); // title
    const fmt = cur.next();
    if (fmt !== "ASCII") {
        throw new ParseError(cur.source, cur.lineNo, `only ASCII supported, got '${fmt}'`);
    }
    expectPrefix(cur, "DATASET UNSTRUCTURED_GRID");

    const pts = expectPrefix(cur, "POINTS").split(/\s+/);
    const npts = Number(pts[1]);
    if (!Number.isInteger(npts) || npts <= 0) {
        throw new ParseError(cur.source, cur.lineNo, `bad point count '${pts[1]}'`);
    }
    const coords = readNumbers(cur, 3 * npts);
    const px = new Float64Array(npts);
    const py = new Float64Array(npts);
    for (let i = 0; i < npts; i++) {
        px[i] = coords[3 * i];
        py[i] = coords[3 * i + 1];
    }

    const cellsHdr = expectPrefix(cur, "CELLS").split(/\s+/);
    const ncell = Number(cellsHdr[1]);
    const conn = new Int32Array(4 * ncell);
    for (let c = 0; c < ncell; c++) {
        const parts = cur.next().split(/\s+/).map(Number);
        if (parts[0] !== 4 || parts.length !== 5) {
            throw new ParseError(cur.source, cur.lineNo, "only quad cells are supported");
        }
        conn.set(parts.slice(1), 4 * c);
    }
    expectPrefix(cur, "CELL_TYPES");
    for (let c = 0; c < ncell; c++) {
        if (cur.next() !== "9") {
            throw new ParseError(cur.source, cur.lineNo, "cell type must be 9 (quad)");
        }
    }

    // Recover the structured layout: the first cell is (0, 1, nvx+1, nvx).
    const nvx = conn[3];
    if (nvx < 2 || conn[1] !== 1 || conn[2] !== nvx + 1) {
        throw new ParseError(cur.source, cur.lineNo, "cells do not follow the structured layout");
    }
    const nx = nvx - 1;
    if (ncell % nx !== 0 || npts % nvx !== 0) {
        throw new ParseError(cur.source, cur.lineNo, "inconsistent structured dimensions");
    }
    const ny = ncell / nx;
    const nvy = npts / nvx;
    if (nvy !== ny + 1) {
        throw new ParseError(cur.source, cur.lineNo, "point/cell counts disagree");
    }
    for (let j = 0; j < ny; j++) {
        for (let i = 0; i < nx; i++) {
            const c = 4 * (j * nx + i);
            const a = j * nvx + i;
            if (
                conn[c] !== a ||
                conn[c + 1] !== a + 1 ||
                conn[c + 2] !== a + nvx + 1 ||
                conn[c + 3] !== a + nvx
            ) {
                throw new ParseError(cur.source, cur.lineNo, "cells do not follow the structured layout");
            }
        }
    }

    const cellData = expectPrefix(cur, "CELL_DATA").split(/\s+/);
    if (Number(cellData[1]) !== ncell) {
        throw new ParseError(cur.source, cur.lineNo, "CELL_DATA count mismatch");
    }
    const fields = new Map<string, Float64Array>();
    for (;;) {
        let header: string;
        try {
            header = cur.next();
        } catch {
            break; // no more scalars
        }
        const parts = header.split(/\s+/);
        if (parts[0] !== "SCALARS") {
            throw new ParseError(cur.source, cur.lineNo, `expected SCALARS, got '${parts[0]}'`);
        }
        expectPrefix(cur, "LOOKUP_TABLE");
        fields.set(parts[1], readNumbers(cur, ncell));
    }
    if (fields.size === 0) {
        throw new ParseError(cur.source, cur.lineNo, "no cell scalars found");
    }
    return { nvx, nvy, nx, ny, px, py, fields };
}

/** Cell centroid coordinates (vertex average), index j * nx + i. */
export function cellCentroids(mesh: QuadMesh): { cx: Float64Array; cy: Float64Array } {
    const { nx, ny, nvx, px, py } = mesh;
    const cx = new Float64Array(nx * ny);
    const cy = new Float64Array(nx * ny);
    for (let j = 0; j < ny; j++) {
        for (let i = 0; i < nx; i++) {
            const a = j * nvx + i;
            const ids = [a, a + 1, a + nvx + 1, a + nvx];
            let sx = 0;
            let sy = 0;
            for (const id of ids) {
                sx += px[id];
                sy += py[id];
            }
            cx[j * nx + i] = sx / 4;
            cy[j * nx + i] = sy / 4;
        }
    }
    return { cx, cy };
}

export function pickField(mesh: QuadMesh, name?: string): { name: string; data: Float64Array } {
    if (name) {
        const data = mesh.fields.get(name);
        if (!data) {
            const known = [...mesh.fields.keys()].join(", ");
            throw new ParseError("<fields>", 0, `no scalar '${name}' (have: ${known})`);
        }
        return { name, data };
    }
    const rho = mesh.fields.get("rho");
    if (rho) return { name: "rho", data: rho };
    const first = mesh.fields.entries().next().value as [string, Float64Array];
    return { name: first[0], data: first[1] };
}

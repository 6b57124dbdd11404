import { QuadMesh, pickField } from "./vtk.js";
import { SvgPlot } from "./svg.js";

/**
 * Contour lines of a cell scalar on a (possibly distorted) quad mesh.
 *
 * Cell values are first averaged to the vertices, then each quad is
 * traversed with marching squares; crossing points interpolate linearly
 * along the physical edges, so distorted cells come out correctly.
 */

export function vertexAverages(mesh: QuadMesh, cell: Float64Array): Float64Array {
    const { nvx, nvy, nx } = mesh;
    const acc = new Float64Array(nvx * nvy);
    const cnt = new Float64Array(nvx * nvy);
    for (let j = 0; j < mesh.ny; j++) {
        for (let i = 0; i < nx; i++) {
            const v = cell[j * nx + i];
            for (const [di, dj] of [[0, 0], [1, 0], [1, 1], [0, 1]]) {
                const id = (j + dj) * nvx + (i + di);
                acc[id] += v;
                cnt[id] += 1;
            }
        }
    }
    for (let k = 0; k < acc.length; k++) acc[k] /= cnt[k];
    return acc;
}

type Segment = [number, number, number, number];

/** Marching squares on one quad; emits 0..2 segments in physical space. */
function cellSegments(
    xs: number[],
    ys: number[],
    vs: number[],
    level: number,
    out: Segment[],
): void {
    // corner order: counterclockwise starting at the cell's A vertex
    let code = 0;
    for (let k = 0; k < 4; k++) if (vs[k] > level) code |= 1 << k;
    if (code === 0 || code === 15) return;

    const cross = (a: number, b: number): [number, number] => {
        const t = (level - vs[a]) / (vs[b] - vs[a]);
        return [xs[a] + t * (xs[b] - xs[a]), ys[a] + t * (ys[b] - ys[a])];
    };
    const edgePts: Array<[number, number] | null> = [null, null, null, null];
    for (let k = 0; k < 4; k++) {
        const a = k;
        const b = (k + 1) % 4;
        const inA = vs[a] > level;
        const inB = vs[b] > level;
        if (inA !== inB) edgePts[k] = cross(a, b);
    }
    const hit = edgePts
        .map((p, k) => ({ p, k }))
        .filter((e): e is { p: [number, number]; k: number } => e.p !== null);
    if (hit.length === 2) {
        out.push([hit[0].p[0], hit[0].p[1], hit[1].p[0], hit[1].p[1]]);
    } else if (hit.length === 4) {
        // saddle: disambiguate with the cell-center value
        const center = (vs[0] + vs[1] + vs[2] + vs[3]) / 4;
        const pairs =
            (center > level) === (vs[0] > level)
                ? [
                      [0, 3],
                      [1, 2],
                  ]
                : [
                      [0, 1],
                      [2, 3],
                  ];
        for (const [a, b] of pairs) {
            const pa = edgePts[a]!;
            const pb = edgePts[b]!;
            out.push([pa[0], pa[1], pb[0], pb[1]]);
        }
    }
}

export function contourSegments(mesh: QuadMesh, nodal: Float64Array, level: number): Segment[] {
    const { nx, ny, nvx, px, py } = mesh;
    const out: Segment[] = [];
    for (let j = 0; j < ny; j++) {
        for (let i = 0; i < nx; i++) {
            const a = j * nvx + i;
            const ids = [a, a + 1, a + nvx + 1, a + nvx];
            cellSegments(
                ids.map((id) => px[id]),
                ids.map((id) => py[id]),
                ids.map((id) => nodal[id]),
                level,
                out,
            );
        }
    }
    return out;
}

export interface ContourResult {
    svg: string;
    levels: number[];
    segmentCount: number;
    warning?: string;
}

export function contourPlot(
    mesh: QuadMesh,
    fieldName: string | undefined,
    levelCount = 23,
): ContourResult {
    if (levelCount < 2) {
        throw new RangeError(`contour level count must be >= 2, got ${levelCount}`);
    }
    const { name, data } = pickField(mesh, fieldName);
    const nodal = vertexAverages(mesh, data);
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of nodal) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
    }
    const plot = new SvgPlot(
        {
            xmin: Math.min(...mesh.px),
            xmax: Math.max(...mesh.px),
            ymin: Math.min(...mesh.py),
            ymax: Math.max(...mesh.py),
        },
        { title: `${name} contours`, xlabel: "x", ylabel: "y", equalAspect: true },
    );

    const levels: number[] = [];
    let segments = 0;
    let warning: string | undefined;
    if (hi - lo <= 1e-300 * Math.max(1, Math.abs(hi))) {
        warning = `field '${name}' is constant: empty contour set`;
    } else {
        for (let k = 1; k <= levelCount; k++) {
            levels.push(lo + (k * (hi - lo)) / (levelCount + 1));
        }
        for (const level of levels) {
            const segs = contourSegments(mesh, nodal, level);
            segments += segs.length;
            const frac = (level - lo) / (hi - lo);
            const shade = Math.round(40 + 180 * frac);
            const color = `rgb(${shade},${Math.round(60 + 60 * frac)},${255 - shade})`;
            for (const [x0, y0, x1, y1] of segs) {
                plot.polyline(
                    [
                        [x0, y0],
                        [x1, y1],
                    ],
                    color,
                    1.0,
                );
            }
        }
    }
    plot.label(96, 56, `${levels.length} levels, ${segments} segments`, "#555", 12);
    return { svg: plot.render(), levels, segmentCount: segments, warning };
}

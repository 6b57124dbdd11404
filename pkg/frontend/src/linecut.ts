import { EmptyCut } from "./errors.js";
import { QuadMesh, cellCentroids, pickField } from "./vtk.js";
import { SvgPlot } from "./svg.js";

export interface LinecutResult {
    svg: string;
    /** sorted (free coordinate, value) samples along the cut */
    samples: Array<[number, number]>;
}

/**
 * Cell-average profile along a cut line.
 *
 * For each structured row (or column) perpendicular to the cut, the cell
 * whose centroid lies nearest the cut is sampled; samples are sorted by
 * the free coordinate. axis names the coordinate held fixed: "y" cuts
 * along constant y (profile over x), "x" the transpose.
 */
export function extractCut(
    mesh: QuadMesh,
    axis: "x" | "y",
    value: number,
): Array<[number, number]> {
    const { nx, ny } = mesh;
    const { cx, cy } = cellCentroids(mesh);
    const fixed = axis === "y" ? cy : cx;
    const free = axis === "y" ? cx : cy;

    let lo = Infinity;
    let hi = -Infinity;
    for (const v of fixed) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
    }
    if (value < lo || value > hi) {
        throw new EmptyCut(
            `cut ${axis} = ${value} lies outside the centroid range [${lo}, ${hi}]`,
        );
    }

    const nFree = axis === "y" ? nx : ny;
    const nFixed = axis === "y" ? ny : nx;
    const at = (iFree: number, iFixed: number) =>
        axis === "y" ? iFixed * nx + iFree : iFree * nx + iFixed;

    const picks: number[] = [];
    for (let iFree = 0; iFree < nFree; iFree++) {
        let best = -1;
        let bestDist = Infinity;
        for (let iFixed = 0; iFixed < nFixed; iFixed++) {
            const d = Math.abs(fixed[at(iFree, iFixed)] - value);
            if (d < bestDist) {
                bestDist = d;
                best = at(iFree, iFixed);
            }
        }
        picks.push(best);
    }
    return picks
        .map((idx) => [free[idx], idx] as [number, number])
        .sort((a, b) => a[0] - b[0])
        .map(([coord, idx]) => [coord, idx]);
}

export function linecutPlot(
    mesh: QuadMesh,
    axis: "x" | "y",
    value: number,
    fieldName?: string,
): LinecutResult {
    const { name, data } = pickField(mesh, fieldName);
    const picked = extractCut(mesh, axis, value);
    const samples = picked.map(([coord, idx]) => [coord, data[idx]] as [number, number]);

    const xs = samples.map((s) => s[0]);
    const ys = samples.map((s) => s[1]);
    const freeName = axis === "y" ? "x" : "y";
    const plot = new SvgPlot(
        {
            xmin: Math.min(...xs),
            xmax: Math.max(...xs),
            ymin: Math.min(...ys),
            ymax: Math.max(...ys),
        },
        {
            title: `${name} along ${axis} = ${value}`,
            xlabel: freeName,
            ylabel: name,
        },
    );
    plot.polyline(samples, "#bbb", 1.0);
    for (const [x, y] of samples) plot.circle(x, y, 3, "#1f77b4");
    plot.label(96, 56, `${samples.length} cells sampled`, "#555", 12);
    return { svg: plot.render(), samples };
}

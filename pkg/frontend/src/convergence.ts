import { ErrorRow } from "./csv.js";
import { SvgPlot } from "./svg.js";

/** Least-squares slope of log(err) against log(h), h = 1/Nx. */
export function fitSlope(rows: ErrorRow[], key: "l1" | "linf"): number | null {
    if (rows.length < 2) return null;
    const xs = rows.map((r) => Math.log(1.0 / r.nx));
    const ys = rows.map((r) => Math.log(r[key]));
    const n = xs.length;
    const mx = xs.reduce((a, b) => a + b, 0) / n;
    const my = ys.reduce((a, b) => a + b, 0) / n;
    let num = 0;
    let den = 0;
    for (let i = 0; i < n; i++) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) ** 2;
    }
    return num / den;
}

export interface ConvergenceResult {
    svg: string;
    slopeL1: number | null;
    slopeLinf: number | null;
}

/** Log-log error-vs-h plot with fitted slopes and a slope-3 guide line. */
export function convergencePlot(rows: ErrorRow[], title = "convergence"): ConvergenceResult {
    const hs = rows.map((r) => 1.0 / r.nx);
    const errs = rows.flatMap((r) => [r.l1, r.linf]);
    const plot = new SvgPlot(
        {
            xmin: Math.min(...hs),
            xmax: Math.max(...hs),
            ymin: Math.min(...errs),
            ymax: Math.max(...errs),
        },
        { title, xlabel: "h", ylabel: "error", logX: true, logY: true },
    );

    const l1Pts = rows.map((r) => [1.0 / r.nx, r.l1] as [number, number]);
    const linfPts = rows.map((r) => [1.0 / r.nx, r.linf] as [number, number]);
    plot.polyline(l1Pts, "#1f77b4", 2);
    plot.polyline(linfPts, "#d62728", 2);
    for (const [x, y] of l1Pts) plot.circle(x, y, 4, "#1f77b4");
    for (const [x, y] of linfPts) plot.circle(x, y, 4, "#d62728");

    const slopeL1 = fitSlope(rows, "l1");
    const slopeLinf = fitSlope(rows, "linf");
    if (slopeL1 !== null) {
        // slope-3 reference through the finest L1 point
        const fine = rows[rows.length - 1];
        const h1 = 1.0 / fine.nx;
        const h0 = 1.0 / rows[0].nx;
        const guide: Array<[number, number]> = [
            [h0, fine.l1 * (h0 / h1) ** 3],
            [h1, fine.l1],
        ];
        plot.polyline(guide, "#888", 1.2, "6,4");
        plot.label(96, 56, `L1 slope = ${slopeL1.toFixed(2)}`, "#1f77b4");
        plot.label(96, 76, `Linf slope = ${(slopeLinf as number).toFixed(2)}`, "#d62728");
        plot.label(96, 96, "guide: slope 3", "#888", 12);
    } else {
        plot.label(96, 56, "single data point: no slope fit", "#555");
    }
    return { svg: plot.render(), slopeL1, slopeLinf };
}

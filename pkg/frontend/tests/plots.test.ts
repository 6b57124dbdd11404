import { describe, expect, it } from "vitest";

import { convergencePlot, fitSlope } from "../src/convergence.js";
import { contourPlot, contourSegments, vertexAverages } from "../src/contour.js";
import { EmptyCut } from "../src/errors.js";
import { extractCut, linecutPlot } from "../src/linecut.js";
import { parseErrorTable } from "../src/csv.js";
import { parseVtk } from "../src/vtk.js";
import { errorCsv, vtkText } from "./helpers.js";

describe("convergence plot", () => {
    it("annotates slope 3 for an exactly third-order table", () => {
        const rows = parseErrorTable(errorCsv([[40, 1e-4, 2e-4], [80, 1.25e-5, 2.5e-5]]));
        const res = convergencePlot(rows);
        expect(res.slopeL1).toBeCloseTo(3.0, 10);
        expect(res.svg).toContain("L1 slope = 3.00");
        expect(res.svg).toContain("guide: slope 3");
    });

    it("single row: points only, no slope", () => {
        const rows = parseErrorTable(errorCsv([[40, 1e-4, 2e-4]]));
        const res = convergencePlot(rows);
        expect(res.slopeL1).toBeNull();
        expect(res.svg).toContain("no slope fit");
    });

    it("fits a near-3 slope on a paper-shaped table", () => {
        const rows = parseErrorTable(
            errorCsv([
                [80, 1.11e-4, 1.84e-4],
                [120, 3.35e-5, 5.69e-5],
                [160, 1.42e-5, 2.43e-5],
            ]),
        );
        expect(fitSlope(rows, "l1")).toBeGreaterThan(2.8);
        expect(fitSlope(rows, "l1")).toBeLessThan(3.1);
    });
});

describe("contour plot", () => {
    it("constant field gives an empty contour set and a warning", () => {
        const mesh = parseVtk(vtkText(6, 6, { rho: () => 2.5 }));
        const res = contourPlot(mesh, undefined, 23);
        expect(res.segmentCount).toBe(0);
        expect(res.warning).toMatch(/constant/);
    });

    it("linear field yields straight contours at the right places", () => {
        const mesh = parseVtk(vtkText(16, 16, { rho: (x) => x }));
        const nodal = vertexAverages(mesh, mesh.fields.get("rho")!);
        const segs = contourSegments(mesh, nodal, 0.5);
        expect(segs.length).toBeGreaterThan(0);
        for (const [x0, , x1] of segs) {
            expect(x0).toBeCloseTo(0.5, 6);
            expect(x1).toBeCloseTo(0.5, 6);
        }
    });

    it("renders the default 23 levels on smooth data", () => {
        const mesh = parseVtk(
            vtkText(20, 20, { rho: (x, y) => Math.sin(3 * x) + Math.cos(2 * y) }, 0.15),
        );
        const res = contourPlot(mesh, "rho");
        expect(res.levels).toHaveLength(23);
        expect(res.segmentCount).toBeGreaterThan(100);
        expect(res.svg).toContain("<svg");
    });

    it("rejects a level count below 2", () => {
        const mesh = parseVtk(vtkText(4, 4, { rho: (x) => x }));
        expect(() => contourPlot(mesh, undefined, 1)).toThrowError(RangeError);
    });
});

describe("line cut", () => {
    it("samples one cell per column along y = const", () => {
        const mesh = parseVtk(vtkText(12, 5, { rho: (x) => 1 + x * x }));
        const res = linecutPlot(mesh, "y", 0.5);
        expect(res.samples).toHaveLength(12);
        const xs = res.samples.map((s) => s[0]);
        expect([...xs].sort((a, b) => a - b)).toEqual(xs);
        for (const [x, v] of res.samples) {
            expect(v).toBeCloseTo(1 + x * x, 10);
        }
    });

    it("cut outside the domain raises EmptyCut", () => {
        const mesh = parseVtk(vtkText(6, 6, { rho: () => 1 }));
        expect(() => extractCut(mesh, "y", 2.5)).toThrowError(EmptyCut);
    });

    it("transposed cut along x = const", () => {
        const mesh = parseVtk(vtkText(5, 9, { rho: (_, y) => y }));
        const res = linecutPlot(mesh, "x", 0.4);
        expect(res.samples).toHaveLength(9);
        for (const [y, v] of res.samples) {
            expect(v).toBeCloseTo(y, 10);
        }
    });
});

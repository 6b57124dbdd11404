#!/usr/bin/env node
/**
 * plots: turn the solver's CSV/VTK outputs into figures.
 *
 *   plots convergence <errors.csv> --out <file.svg>
 *   plots contour     <snapshot.vtk> --out <file.svg> [--levels 23] [--field rho]
 *   plots linecut     <snapshot.vtk> --out <file.svg> [--axis y] [--value 0] [--field rho]
 *
 * Output is always SVG (vector); rasterization needs native dependencies
 * this toolchain does not assume.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { convergencePlot } from "./convergence.js";
import { contourPlot } from "./contour.js";
import { EmptyCut, ParseError } from "./errors.js";
import { linecutPlot } from "./linecut.js";
import { parseErrorTable } from "./csv.js";
import { parseVtk } from "./vtk.js";

interface Args {
    kind: string;
    input: string;
    out: string;
    levels: number;
    axis: "x" | "y";
    value: number;
    field?: string;
}

export function parseArgs(argv: string[]): Args {
    if (argv.length < 2) {
        throw new Error(
            "usage: plots convergence|contour|linecut <input> --out <file.svg> [options]",
        );
    }
    const [kind, input, ...rest] = argv;
    if (!["convergence", "contour", "linecut"].includes(kind)) {
        throw new Error(`unknown plot kind '${kind}'`);
    }
    const args: Args = { kind, input, out: "", levels: 23, axis: "y", value: 0 };
    for (let i = 0; i < rest.length; i += 2) {
        const key = rest[i];
        const val = rest[i + 1];
        if (val === undefined) throw new Error(`missing value for ${key}`);
        switch (key) {
            case "--out":
                args.out = val;
                break;
            case "--levels":
                args.levels = Number(val);
                break;
            case "--axis":
                if (val !== "x" && val !== "y") throw new Error("--axis must be x or y");
                args.axis = val;
                break;
            case "--value":
                args.value = Number(val);
                break;
            case "--field":
                args.field = val;
                break;
            default:
                throw new Error(`unknown option ${key}`);
        }
    }
    if (!args.out) throw new Error("--out is required");
    return args;
}

export function runCli(argv: string[]): number {
    let args: Args;
    try {
        args = parseArgs(argv);
    } catch (err) {
        console.error(`error: ${(err as Error).message}`);
        return 2;
    }
    let text: string;
    try {
        text = readFileSync(args.input, "utf-8");
    } catch (err) {
        console.error(`error: cannot read ${args.input}: ${(err as NodeJS.ErrnoException).message}`);
        return 1;
    }
    try {
        let svg: string;
        if (args.kind === "convergence") {
            const rows = parseErrorTable(text, args.input);
            const res = convergencePlot(rows, args.input.split("/").pop());
            svg = res.svg;
            if (res.slopeL1 !== null) {
                console.log(`L1 slope ${res.slopeL1.toFixed(3)}, Linf slope ${res.slopeLinf!.toFixed(3)}`);
            }
        } else if (args.kind === "contour") {
            const mesh = parseVtk(text, args.input);
            const res = contourPlot(mesh, args.field, args.levels);
            if (res.warning) console.warn(`warning: ${res.warning}`);
            console.log(`${res.levels.length} contour levels, ${res.segmentCount} segments`);
            svg = res.svg;
        } else {
            const mesh = parseVtk(text, args.input);
            const res = linecutPlot(mesh, args.axis, args.value, args.field);
            console.log(`${res.samples.length} samples along ${args.axis} = ${args.value}`);
            svg = res.svg;
        }
        const dir = dirname(args.out);
        if (dir && dir !== ".") mkdirSync(dir, { recursive: true });
        writeFileSync(args.out, svg + "\n", "utf-8");
        console.log(`wrote ${args.out}`);
        return 0;
    } catch (err) {
        if (err instanceof ParseError || err instanceof EmptyCut || err instanceof RangeError) {
            console.error(`error: ${err.message}`);
            return 1;
        }
        throw err;
    }
}

const isMain =
    process.argv[1] !== undefined &&
    import.meta.url.endsWith(process.argv[1].split("/").pop() as string);
if (isMain) {
    process.exit(runCli(process.argv.slice(2)));
}

import { ParseError } from "./errors.js";

/** One row of the solver's convergence/error table. */
export interface ErrorRow {
    mesh: string;
    nx: number;
    ny: number;
    l1: number;
    linf: number;
    orderL1: number | null;
    orderLinf: number | null;
    nLevelsAvg: number;
    lwMax: number;
    runtimeS: number;
}

export const ERROR_HEADER =
    "mesh,Nx,Ny,L1,Linf,order_L1,order_Linf,N_levels_avg,Lw_max,runtime_s";

function num(field: string, source: string, line: number): number {
    const v = Number(field);
    if (field.trim() === "" || Number.isNaN(v)) {
        throw new ParseError(source, line, `expected a number, got '${field}'`);
    }
    return v;
}

function numOrNull(field: string, source: string, line: number): number | null {
    if (field.trim() === "") return null;
    return num(field, source, line);
}

/** Parse the solver's error-table CSV (exact schema, no extensions). */
export function parseErrorTable(text: string, source = "<csv>"): ErrorRow[] {
    const lines = text.split(/\r?\n/).filter((ln, i) => ln.trim() !== "" || i > 0);
    if (lines.length === 0) {
        throw new ParseError(source, 1, "empty file");
    }
    if (lines[0].trim() !== ERROR_HEADER) {
        throw new ParseError(source, 1, `expected header '${ERROR_HEADER}'`);
    }
    const rows: ErrorRow[] = [];
    for (let i = 1; i < lines.length; i++) {
        const raw = lines[i];
        if (raw.trim() === "") continue;
        const parts = raw.split(",");
        if (parts.length !== 10) {
            throw new ParseError(source, i + 1, `expected 10 fields, got ${parts.length}`);
        }
        rows.push({
            mesh: parts[0],
            nx: num(parts[1], source, i + 1),
            ny: num(parts[2], source, i + 1),
            l1: num(parts[3], source, i + 1),
            linf: num(parts[4], source, i + 1),
            orderL1: numOrNull(parts[5], source, i + 1),
            orderLinf: numOrNull(parts[6], source, i + 1),
            nLevelsAvg: num(parts[7], source, i + 1),
            lwMax: num(parts[8], source, i + 1),
            runtimeS: num(parts[9], source, i + 1),
        });
    }
    if (rows.length === 0) {
        throw new ParseError(source, 2, "no data rows");
    }
    return rows;
}

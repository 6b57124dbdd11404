/** Error types shared by the parsers and plot builders. */

/** A malformed input file; carries the file and line that broke. */
export class ParseError extends Error {
    constructor(
        public readonly source: string,
        public readonly line: number,
        detail: string,
    ) {
        super(`${source}:${line}: ${detail}`);
        this.name = "ParseError";
    }
}

/** A line cut that intersects no cells of the mesh. */
export class EmptyCut extends Error {
    constructor(detail: string) {
        super(detail);
        this.name = "EmptyCut";
    }
}

/** Minimal SVG scene builder: fixed canvas, margins, data-space mapping. */

export interface Extent {
    xmin: number;
    xmax: number;
    ymin: number;
    ymax: number;
}

const esc = (s: string) =>
    s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class SvgPlot {
    readonly width = 760;
    readonly height = 560;
    readonly margin = { left: 78, right: 24, top: 44, bottom: 58 };
    private body: string[] = [];
    private extent: Extent;

    constructor(
        extent: Extent,
        private opts: {
            title?: string;
            xlabel?: string;
            ylabel?: string;
            logX?: boolean;
            logY?: boolean;
            equalAspect?: boolean;
        } = {},
    ) {
        this.extent = this.pad(extent);
    }

    private pad(e: Extent): Extent {
        let { xmin, xmax, ymin, ymax } = e;
        if (this.opts.logX) {
            xmin = Math.log10(xmin);
            xmax = Math.log10(xmax);
        }
        if (this.opts.logY) {
            ymin = Math.log10(ymin);
            ymax = Math.log10(ymax);
        }
        const dx = (xmax - xmin || 1) * 0.06;
        const dy = (ymax - ymin || 1) * 0.06;
        let out = { xmin: xmin - dx, xmax: xmax + dx, ymin: ymin - dy, ymax: ymax + dy };
        if (this.opts.equalAspect) {
            const iw = this.width - this.margin.left - this.margin.right;
            const ih = this.height - this.margin.top - this.margin.bottom;
            const sx = iw / (out.xmax - out.xmin);
            const sy = ih / (out.ymax - out.ymin);
            const s = Math.min(sx, sy);
            const cx = (out.xmin + out.xmax) / 2;
            const cy = (out.ymin + out.ymax) / 2;
            out = {
                xmin: cx - iw / s / 2,
                xmax: cx + iw / s / 2,
                ymin: cy - ih / s / 2,
                ymax: cy + ih / s / 2,
            };
        }
        return out;
    }

    sx(x: number): number {
        const v = this.opts.logX ? Math.log10(x) : x;
        const frac = (v - this.extent.xmin) / (this.extent.xmax - this.extent.xmin);
        return this.margin.left + frac * (this.width - this.margin.left - this.margin.right);
    }

    sy(y: number): number {
        const v = this.opts.logY ? Math.log10(y) : y;
        const frac = (v - this.extent.ymin) / (this.extent.ymax - this.extent.ymin);
        return this.height - this.margin.bottom - frac * (this.height - this.margin.top - this.margin.bottom);
    }

    polyline(points: Array<[number, number]>, stroke: string, width = 1.5, dash = ""): void {
        if (points.length < 2) return;
        const d = points
            .map(([x, y], i) => `${i ? "L" : "M"}${this.sx(x).toFixed(2)},${this.sy(y).toFixed(2)}`)
            .join(" ");
        const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
        this.body.push(
            `<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
        );
    }

    circle(x: number, y: number, r: number, fill: string): void {
        this.body.push(
            `<circle cx="${this.sx(x).toFixed(2)}" cy="${this.sy(y).toFixed(2)}" r="${r}" fill="${fill}"/>`,
        );
    }

    /** Raw annotation in canvas coordinates (for legends and slope labels). */
    label(px: number, py: number, text: string, fill = "#222", size = 14): void {
        this.body.push(
            `<text x="${px}" y="${py}" font-size="${size}" fill="${fill}" font-family="sans-serif">${esc(text)}</text>`,
        );
    }

    private axisTicks(lo: number, hi: number, log: boolean): number[] {
        if (log) {
            const out: number[] = [];
            for (let e = Math.ceil(lo); e <= Math.floor(hi); e++) out.push(e);
            if (out.length < 2) out.push(lo, hi);
            return out;
        }
        const span = hi - lo;
        const step = 10 ** Math.floor(Math.log10(span / 4));
        const mult = span / step > 8 ? 2 : 1;
        const out: number[] = [];
        for (let v = Math.ceil(lo / (step * mult)) * step * mult; v <= hi; v += step * mult) {
            out.push(v);
        }
        return out;
    }

    private axes(): string[] {
        const out: string[] = [];
        const { left, right, top, bottom } = this.margin;
        const x0 = left;
        const x1 = this.width - right;
        const y0 = this.height - bottom;
        const y1 = top;
        out.push(
            `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#555"/>`,
        );
        const fmtTick = (v: number, log: boolean) =>
            log ? `1e${v}` : `${Number(v.toPrecision(6))}`;
        for (const v of this.axisTicks(this.extent.xmin, this.extent.xmax, !!this.opts.logX)) {
            const frac = (v - this.extent.xmin) / (this.extent.xmax - this.extent.xmin);
            const px = x0 + frac * (x1 - x0);
            if (px < x0 - 1 || px > x1 + 1) continue;
            out.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#555"/>`);
            out.push(
                `<text x="${px}" y="${y0 + 20}" font-size="12" text-anchor="middle" fill="#333" font-family="sans-serif">${fmtTick(v, !!this.opts.logX)}</text>`,
            );
        }
        for (const v of this.axisTicks(this.extent.ymin, this.extent.ymax, !!this.opts.logY)) {
            const frac = (v - this.extent.ymin) / (this.extent.ymax - this.extent.ymin);
            const py = y0 - frac * (y0 - y1);
            if (py < y1 - 1 || py > y0 + 1) continue;
            out.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#555"/>`);
            out.push(
                `<text x="${x0 - 8}" y="${py + 4}" font-size="12" text-anchor="end" fill="#333" font-family="sans-serif">${fmtTick(v, !!this.opts.logY)}</text>`,
            );
        }
        if (this.opts.title) {
            out.push(
                `<text x="${this.width / 2}" y="26" font-size="16" text-anchor="middle" fill="#111" font-family="sans-serif">${esc(this.opts.title)}</text>`,
            );
        }
        if (this.opts.xlabel) {
            out.push(
                `<text x="${(x0 + x1) / 2}" y="${this.height - 14}" font-size="14" text-anchor="middle" fill="#111" font-family="sans-serif">${esc(this.opts.xlabel)}</text>`,
            );
        }
        if (this.opts.ylabel) {
            const cx = 20;
            const cy = (y0 + y1) / 2;
            out.push(
                `<text x="${cx}" y="${cy}" font-size="14" text-anchor="middle" fill="#111" font-family="sans-serif" transform="rotate(-90 ${cx} ${cy})">${esc(this.opts.ylabel)}</text>`,
            );
        }
        return out;
    }

    render(): string {
        return [
            `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
            `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
            ...this.axes(),
            ...this.body,
            "</svg>",
        ].join("\n");
    }
}

/** Minimal deterministic SVG scene builder: linear scales, axes with
 * round tick steps, and the handful of marks the figure kinds need.
 * Coordinates are fixed to two decimals so identical inputs always
 * produce byte-identical files. */

export interface Extent {
  min: number;
  max: number;
}

export function extent(values: number[]): Extent {
  if (values.length === 0) throw new Error("extent of empty data");
  let min = values[0];
  let max = values[0];
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (min === max) {
    const pad = Math.abs(min) > 0 ? Math.abs(min) * 0.05 : 0.5;
    return { min: min - pad, max: max + pad };
  }
  const pad = (max - min) * 0.05;
  return { min: min - pad, max: max + pad };
}

export class Scale {
  constructor(
    public readonly domain: Extent,
    public readonly range: [number, number],
  ) {}

  at(v: number): number {
    const t = (v - this.domain.min) / (this.domain.max - this.domain.min);
    return this.range[0] + t * (this.range[1] - this.range[0]);
  }

  ticks(target = 6): number[] {
    const span = this.domain.max - this.domain.min;
    const raw = span / target;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const steps = [1, 2, 5, 10].map((s) => s * mag);
    const step = steps.find((s) => span / s <= target) ?? steps[3];
    const out: number[] = [];
    for (
      let v = Math.ceil(this.domain.min / step) * step;
      v <= this.domain.max + step * 1e-9;
      v += step
    ) {
      out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return out;
  }
}

const f = (v: number): string => v.toFixed(2);
const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export class Svg {
  private parts: string[] = [];
  readonly margin: Margins = { top: 28, right: 20, bottom: 42, left: 56 };

  constructor(
    public readonly width = 640,
    public readonly height = 480,
  ) {}

  get plotRangeX(): [number, number] {
    return [this.margin.left, this.width - this.margin.right];
  }

  get plotRangeY(): [number, number] {
    return [this.height - this.margin.bottom, this.margin.top];
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${f(x)}" cy="${f(y)}" r="${f(r)}" fill="${fill}"/>`);
  }

  cross(x: number, y: number, size: number, stroke: string): void {
    const s = size / 2;
    this.parts.push(
      `<path d="M${f(x - s)} ${f(y - s)}L${f(x + s)} ${f(y + s)}` +
        `M${f(x - s)} ${f(y + s)}L${f(x + s)} ${f(y - s)}" ` +
        `stroke="${stroke}" stroke-width="1.2" fill="none"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, dashed = false): void {
    const dash = dashed ? ' stroke-dasharray="5 4"' : "";
    this.parts.push(
      `<line x1="${f(x1)}" y1="${f(y1)}" x2="${f(x2)}" y2="${f(y2)}" ` +
        `stroke="${stroke}" stroke-width="1"${dash}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, dashed = false): void {
    const d = points.map(([x, y]) => `${f(x)},${f(y)}`).join(" ");
    const dash = dashed ? ' stroke-dasharray="5 4"' : "";
    this.parts.push(
      `<polyline points="${d}" fill="none" stroke="${stroke}" stroke-width="1.4"${dash}/>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${f(x)}" y="${f(y)}" width="${f(w)}" height="${f(h)}" fill="${fill}"/>`,
    );
  }

  text(x: number, y: number, value: string, anchor = "middle", size = 11): void {
    this.parts.push(
      `<text x="${f(x)}" y="${f(y)}" text-anchor="${anchor}" ` +
        `font-family="sans-serif" font-size="${size}">${esc(value)}</text>`,
    );
  }

  axes(sx: Scale, sy: Scale, xlabel: string, ylabel: string, title: string): void {
    const [x0, x1] = this.plotRangeX;
    const [y0, y1] = this.plotRangeY;
    this.line(x0, y0, x1, y0, "#000");
    this.line(x0, y0, x0, y1, "#000");
    for (const t of sx.ticks()) {
      const x = sx.at(t);
      this.line(x, y0, x, y0 + 4, "#000");
      this.text(x, y0 + 16, trimTick(t));
    }
    for (const t of sy.ticks()) {
      const y = sy.at(t);
      this.line(x0 - 4, y, x0, y, "#000");
      this.text(x0 - 7, y + 3.5, trimTick(t), "end");
    }
    this.text((x0 + x1) / 2, this.height - 8, xlabel);
    this.parts.push(
      `<text x="14" y="${f((y0 + y1) / 2)}" text-anchor="middle" ` +
        `font-family="sans-serif" font-size="11" ` +
        `transform="rotate(-90 14 ${f((y0 + y1) / 2)})">${esc(ylabel)}</text>`,
    );
    this.text((x0 + x1) / 2, 16, title, "middle", 13);
  }

  /** Horizontal dashed guide inside the plot area, clipped to domain. */
  hguide(sy: Scale, value: number, stroke = "#2b6cb0"): void {
    if (value < sy.domain.min || value > sy.domain.max) return;
    const [x0, x1] = this.plotRangeX;
    this.line(x0, sy.at(value), x1, sy.at(value), stroke, true);
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="#ffffff"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function trimTick(v: number): string {
  const s = v.toPrecision(6);
  return String(Number(s));
}

/** Two-stop color ramp for heat maps (white -> deep blue). */
export function heatColor(t: number): string {
  const clamp = Math.max(0, Math.min(1, t));
  const r = Math.round(255 - 215 * clamp);
  const g = Math.round(255 - 175 * clamp);
  const b = Math.round(255 - 80 * clamp);
  return `rgb(${r},${g},${b})`;
}

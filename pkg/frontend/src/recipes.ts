/** Declarative figure recipes over the solver CLI's CSV outputs.
 *
 * A recipe is a JSON file naming the figure kind, its input files, the
 * overlay toggles, and the output SVG path, so archived data sets can
 * be re-rendered without re-running any solver. */

import fs from "node:fs";
import path from "node:path";

import { EmptyInputError, Row, SchemaError, loadCsv, num, numStrict } from "./schema.js";
import { Scale, Svg, extent, heatColor } from "./svg.js";

export type FigureKind =
  | "spectrum_scatter"
  | "mode_profile"
  | "phase_map"
  | "sweep_lines"
  | "branch"
  | "heatmap2d";

export interface FigureRecipe {
  kind: FigureKind;
  /** One or more input CSV paths (several = side-by-side columns). */
  inputs: string[];
  output: string;
  title?: string;
  /** Bulk stiffness pair for the band-edge guides {0,2k1,2k2,2k1+2k2}. */
  k1?: number;
  k2?: number;
  overlays?: {
    band_edges?: boolean;
    predicted?: boolean;
  };
  /** Kind-specific selectors (mode index, phase-map axes, ...). */
  mode?: number;
  x?: string;
  y?: string;
  color?: string;
}

const KINDS: FigureKind[] = [
  "spectrum_scatter",
  "mode_profile",
  "phase_map",
  "sweep_lines",
  "branch",
  "heatmap2d",
];

export function readRecipe(file: string): FigureRecipe {
  const raw = JSON.parse(fs.readFileSync(file, "utf8"));
  if (!KINDS.includes(raw.kind)) {
    throw new Error(`${file}: unknown figure kind: ${raw.kind}`);
  }
  if (!Array.isArray(raw.inputs) || raw.inputs.length === 0) {
    throw new Error(`${file}: recipe needs a non-empty inputs list`);
  }
  if (typeof raw.output !== "string") {
    throw new Error(`${file}: recipe needs an output path`);
  }
  const base = path.dirname(file);
  raw.inputs = raw.inputs.map((p: string) => path.resolve(base, p));
  raw.output = path.resolve(base, raw.output);
  return raw as FigureRecipe;
}

function bandGuides(svg: Svg, sy: Scale, recipe: FigureRecipe): void {
  if (recipe.overlays?.band_edges === false) return;
  if (recipe.k1 === undefined || recipe.k2 === undefined) return;
  const { k1, k2 } = recipe;
  for (const edge of [0, 2 * k1, 2 * k2, 2 * (k1 + k2)]) {
    svg.hguide(sy, edge);
  }
}

// ---------------------------------------------------------------------------
// Renderers, one per figure kind
// ---------------------------------------------------------------------------

function renderSpectrumScatter(recipe: FigureRecipe): Svg {
  const columns = recipe.inputs.map((p) => loadCsv(p, "spectrum"));
  const svg = new Svg();
  const all = columns.flatMap((rows) => rows.map((r) => numStrict(r, "omega2")));
  const sy = new Scale(extent(all), svg.plotRangeY);
  const sx = new Scale({ min: 0.5, max: columns.length + 0.5 }, svg.plotRangeX);
  svg.axes(sx, sy, "boundary setting", "omega^2", recipe.title ?? "eigenfrequencies");
  bandGuides(svg, sy, recipe);
  columns.forEach((rows, i) => {
    for (const r of rows) {
      const out = r["in_band"] === "false";
      svg.cross(sx.at(i + 1), sy.at(numStrict(r, "omega2")), 7, out ? "#c53030" : "#444");
    }
  });
  return svg;
}

function renderModeProfile(recipe: FigureRecipe): Svg {
  const rows = loadCsv(recipe.inputs[0], "modes");
  const wanted = recipe.mode ?? numStrict(rows[0], "index");
  const mode = rows.filter((r) => numStrict(r, "index") === wanted);
  if (mode.length === 0) {
    throw new EmptyInputError(`${recipe.inputs[0]}: no rows for mode ${wanted}`);
  }
  const svg = new Svg();
  const sites = mode.map((r) => numStrict(r, "site"));
  const values = mode.map((r) => numStrict(r, "value"));
  const sx = new Scale(extent(sites), svg.plotRangeX);
  const sy = new Scale(extent(values.concat([0])), svg.plotRangeY);
  svg.axes(sx, sy, "site", "amplitude", recipe.title ?? `mode ${wanted}`);
  const zero = sy.at(0);
  mode.forEach((r, i) => {
    const x = sx.at(sites[i]);
    const y = sy.at(values[i]);
    svg.line(x, zero, x, y, "#777");
    svg.circle(x, y, 2.2, "#2b6cb0");
  });
  return svg;
}

function renderPhaseMap(recipe: FigureRecipe): Svg {
  const rows = loadCsv(recipe.inputs[0], "phase");
  const xcol = recipe.x ?? "k31";
  const ycol = recipe.y ?? "k2";
  const ccol = recipe.color ?? "count_finite";
  const svg = new Svg();
  const xs = rows.map((r) => numStrict(r, xcol));
  const ys = rows.map((r) => numStrict(r, ycol));
  const counts = rows.map((r) => numStrict(r, ccol));
  const sx = new Scale(extent(xs), svg.plotRangeX);
  const sy = new Scale(extent(ys), svg.plotRangeY);
  svg.axes(sx, sy, xcol, ycol, recipe.title ?? `edge-state count (${ccol})`);
  const palette = ["#38a169", "#ecc94b", "#c53030", "#6b46c1", "#2b6cb0"];
  rows.forEach((_, i) => {
    const color = palette[Math.min(counts[i], palette.length - 1)];
    svg.circle(sx.at(xs[i]), sy.at(ys[i]), 4, color);
  });
  return svg;
}

function renderSweepLines(recipe: FigureRecipe): Svg {
  const rows = loadCsv(recipe.inputs[0], "sweep_k32");
  // Placeholder rows (no out-of-band frequency at that stiffness) carry
  // empty omega2; a sweep with no data at all is a graceful error.
  const data = rows.filter((r) => num(r, "omega2", true) !== null);
  if (data.length === 0) {
    throw new EmptyInputError(`${recipe.inputs[0]}: sweep has no out-of-band rows`);
  }
  const svg = new Svg();
  const xs = data.map((r) => numStrict(r, "k32"));
  const ys = data.map((r) => numStrict(r, "omega2"));
  // Predicted columns are empty where no out-of-band mode is predicted.
  const predicted: Array<[number, number | null, number | null]> = rows.map((r) => [
    numStrict(r, "k32"),
    num(r, "predicted_left_omega2", true),
    num(r, "predicted_right_omega2", true),
  ]);
  const ally = ys.concat(
    predicted.flatMap(([, l, rr]) => [l, rr]).filter((v): v is number => v !== null),
  );
  const sx = new Scale(extent(xs), svg.plotRangeX);
  const sy = new Scale(extent(ally), svg.plotRangeY);
  svg.axes(sx, sy, "k32", "omega^2", recipe.title ?? "out-of-band frequencies");
  bandGuides(svg, sy, recipe);
  if (recipe.overlays?.predicted !== false) {
    const uniq = [...new Map(predicted.map((p) => [p[0], p])).values()].sort(
      (a, b) => a[0] - b[0],
    );
    const left = uniq.filter((p): p is [number, number, number | null] => p[1] !== null);
    const right = uniq.filter((p): p is [number, number | null, number] => p[2] !== null);
    if (left.length > 1) svg.polyline(left.map(([x, l]) => [sx.at(x), sy.at(l)]), "#2b6cb0", true);
    if (right.length > 1) svg.polyline(right.map(([x, , rr]) => [sx.at(x), sy.at(rr)]), "#38a169", true);
  }
  data.forEach((r, i) => {
    const left = r["label"] === "LeftEdge";
    svg.cross(sx.at(xs[i]), sy.at(ys[i]), 6, left ? "#2b6cb0" : "#38a169");
  });
  return svg;
}

function renderBranch(recipe: FigureRecipe): Svg {
  const rows = loadCsv(recipe.inputs[0], "branch");
  const xcol = recipe.x ?? "amplitude";
  const ycol = recipe.y ?? "omega2";
  const svg = new Svg();
  const xs = rows.map((r) => numStrict(r, xcol));
  const ys = rows.map((r) => numStrict(r, ycol));
  const iprs = rows.map((r) => numStrict(r, "ipr"));
  const sx = new Scale(extent(xs), svg.plotRangeX);
  const sy = new Scale(extent(ys), svg.plotRangeY);
  svg.axes(sx, sy, xcol, ycol, recipe.title ?? "continuation branch");
  bandGuides(svg, sy, recipe);
  svg.polyline(xs.map((x, i) => [sx.at(x), sy.at(ys[i])]), "#c53030");
  // Secondary trace: IPR rescaled into the same frame (dashed).
  const si = new Scale(extent(iprs), svg.plotRangeY);
  svg.polyline(xs.map((x, i) => [sx.at(x), si.at(iprs[i])]), "#6b46c1", true);
  rows.forEach((_, i) => svg.circle(sx.at(xs[i]), sy.at(ys[i]), 2, "#c53030"));
  return svg;
}

function renderHeatmap2d(recipe: FigureRecipe): Svg {
  const rows = loadCsv(recipe.inputs[0], "lattice2d_modes");
  const wanted = recipe.mode ?? numStrict(rows[0], "index");
  const mode = rows.filter((r) => numStrict(r, "index") === wanted);
  if (mode.length === 0) {
    throw new EmptyInputError(`${recipe.inputs[0]}: no rows for mode ${wanted}`);
  }
  const svg = new Svg();
  const is = mode.map((r) => numStrict(r, "row"));
  const js = mode.map((r) => numStrict(r, "col"));
  const mass = mode.map((r) => numStrict(r, "value") ** 2);
  const ni = Math.max(...is) + 1;
  const nj = Math.max(...js) + 1;
  const sx = new Scale({ min: 0, max: nj }, svg.plotRangeX);
  const sy = new Scale({ min: 0, max: ni }, svg.plotRangeY);
  svg.axes(sx, sy, "column", "row", recipe.title ?? `mode ${wanted} mass`);
  const top = Math.max(...mass);
  const w = sx.at(1) - sx.at(0);
  const h = sy.at(0) - sy.at(1);
  mode.forEach((_, m) => {
    svg.rect(sx.at(js[m]), sy.at(is[m] + 1), w, h, heatColor(mass[m] / top));
  });
  return svg;
}

const RENDERERS: Record<FigureKind, (recipe: FigureRecipe) => Svg> = {
  spectrum_scatter: renderSpectrumScatter,
  mode_profile: renderModeProfile,
  phase_map: renderPhaseMap,
  sweep_lines: renderSweepLines,
  branch: renderBranch,
  heatmap2d: renderHeatmap2d,
};

/** Render one recipe to its SVG file.  Nothing is written on error. */
export function render(recipe: FigureRecipe): string {
  const svg = RENDERERS[recipe.kind](recipe).render();
  fs.mkdirSync(path.dirname(recipe.output), { recursive: true });
  fs.writeFileSync(recipe.output, svg);
  return recipe.output;
}

export { EmptyInputError, SchemaError };

import { scaleLinear, scaleLog } from "d3-scale";

import { BoundsRow, BOUNDS_COLUMNS, RawRow, RunRow, SchemaError } from "./schema.js";
import { el, line, svgDoc, text } from "./svg.js";

/** Horizontal asymptote drawn on the convergence figure, 8 digits. */
export const SQRT2_REF = 1.41421356;

export interface FigureOptions {
  width?: number;
  height?: number;
}

const MARGIN = { top: 30, right: 30, bottom: 48, left: 64 };

function frame(w: number, h: number, xTitle: string, yTitle: string): string[] {
  return [
    line(MARGIN.left, h - MARGIN.bottom, w - MARGIN.right, h - MARGIN.bottom,
      { stroke: "#222" }),
    line(MARGIN.left, MARGIN.top, MARGIN.left, h - MARGIN.bottom, { stroke: "#222" }),
    text((MARGIN.left + w - MARGIN.right) / 2, h - 10, xTitle,
      { "text-anchor": "middle" }),
    el("text", {
      x: 16, y: (MARGIN.top + h - MARGIN.bottom) / 2, "text-anchor": "middle",
      transform: `rotate(-90 16 ${(MARGIN.top + h - MARGIN.bottom) / 2})`,
    }, yTitle),
  ];
}

/**
 * normalized_mean vs m on a log x axis, with 3 sigma error bars, the
 * independence-approximation overlay and the sqrt(2) reference line.
 * Purely presentational: every plotted quantity is a CSV field or a fixed
 * rescaling of one (oracle_mean is divided by sqrt(m ln m) to share the
 * normalized axis).
 */
export function renderConvergence(rows: RunRow[], opts: FigureOptions = {}): string {
  if (rows.length === 0) throw new SchemaError("no data rows");
  const w = opts.width ?? 720;
  const h = opts.height ?? 440;
  const pts = [...rows]
    .sort((a, b) => a.m - b.m)
    .map((r) => ({
      m: r.m,
      mean: r.normalized_mean,
      bar: 3 * r.normalized_std / Math.sqrt(r.samples),
      oracle: r.oracle_mean === null ? null : r.oracle_mean / Math.sqrt(r.m * Math.log(r.m)),
    }));

  const x = scaleLog()
    .domain([pts[0].m / 1.5, pts[pts.length - 1].m * 1.5])
    .range([MARGIN.left, w - MARGIN.right]);
  const ys = pts.flatMap((p) =>
    p.oracle === null ? [p.mean - p.bar, p.mean + p.bar] : [p.mean - p.bar, p.mean + p.bar, p.oracle]);
  ys.push(SQRT2_REF);
  const y = scaleLinear()
    .domain([Math.min(...ys) - 0.02, Math.max(...ys) + 0.02])
    .nice()
    .range([h - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [];
  for (const t of y.ticks(6)) {
    parts.push(line(MARGIN.left, y(t), w - MARGIN.right, y(t), { stroke: "#ddd" }));
    parts.push(text(MARGIN.left - 8, y(t) + 4, t.toString(), { "text-anchor": "end" }));
  }
  for (const p of pts) {
    parts.push(line(x(p.m), h - MARGIN.bottom, x(p.m), h - MARGIN.bottom + 5, { stroke: "#222" }));
    parts.push(text(x(p.m), h - MARGIN.bottom + 18, p.m.toString(), { "text-anchor": "middle" }));
  }
  parts.push(...frame(w, h, "m (log scale)", "E(C) / sqrt(m ln m)"));

  parts.push(line(MARGIN.left, y(SQRT2_REF), w - MARGIN.right, y(SQRT2_REF), {
    class: "ref", stroke: "#b22", "stroke-dasharray": "6 3",
  }));
  parts.push(text(w - MARGIN.right, y(SQRT2_REF) - 6, `sqrt(2) = ${SQRT2_REF}`, {
    "text-anchor": "end", fill: "#b22",
  }));

  const overlay = pts.filter((p) => p.oracle !== null) as Array<{ m: number; oracle: number }>;
  if (overlay.length > 0) {
    const path = overlay.map((p) => `${x(p.m).toFixed(2)},${y(p.oracle).toFixed(2)}`).join(" ");
    parts.push(el("polyline", {
      class: "oracle", points: path, fill: "none", stroke: "#777", "stroke-dasharray": "2 3",
    }));
    for (const p of overlay) {
      parts.push(el("rect", {
        class: "oracle", x: x(p.m) - 3.5, y: y(p.oracle) - 3.5, width: 7, height: 7,
        fill: "none", stroke: "#777",
      }));
    }
    parts.push(text(MARGIN.left + 8, MARGIN.top + 14, "squares: independence-approximation oracle",
      { fill: "#777" }));
  }

  for (const p of pts) {
    const [lo, hi] = [y(p.mean - p.bar), y(p.mean + p.bar)];
    parts.push(line(x(p.m), lo, x(p.m), hi, { class: "errorbar", stroke: "#125" }));
    parts.push(line(x(p.m) - 4, lo, x(p.m) + 4, lo, { stroke: "#125" }));
    parts.push(line(x(p.m) - 4, hi, x(p.m) + 4, hi, { stroke: "#125" }));
  }
  for (const p of pts) {
    parts.push(el("circle", { class: "mean", cx: x(p.m), cy: y(p.mean), r: 4, fill: "#125" }));
  }
  return svgDoc(w, h, parts);
}

/**
 * Counts of the max-statistic values from a per-sample CSV. C shares the
 * parity of m, so bars sit on integers of that parity with unit-integer
 * edges on either side; the dashed vertical line marks sqrt(2 m ln m).
 */
export function renderHistogram(rows: RawRow[], opts: FigureOptions = {}): string {
  if (rows.length === 0) throw new SchemaError("no data rows");
  const m = rows[0].m;
  if (rows.some((r) => r.m !== m)) {
    throw new SchemaError("histogram needs a single modulus; found several");
  }
  const w = opts.width ?? 720;
  const h = opts.height ?? 440;

  const counts = new Map<number, number>();
  for (const r of rows) counts.set(r.C, (counts.get(r.C) ?? 0) + 1);
  const cs = [...counts.keys()].sort((a, b) => a - b);
  const lambda = Math.sqrt(2 * m * Math.log(m));

  const x = scaleLinear()
    .domain([cs[0] - 2, Math.max(cs[cs.length - 1] + 2, Math.ceil(lambda) + 2)])
    .range([MARGIN.left, w - MARGIN.right]);
  const y = scaleLinear()
    .domain([0, Math.max(...counts.values())])
    .nice()
    .range([h - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [];
  for (const t of y.ticks(6)) {
    parts.push(line(MARGIN.left, y(t), w - MARGIN.right, y(t), { stroke: "#ddd" }));
    parts.push(text(MARGIN.left - 8, y(t) + 4, t.toString(), { "text-anchor": "end" }));
  }
  for (const t of x.ticks(8)) {
    parts.push(text(x(t), h - MARGIN.bottom + 18, t.toString(), { "text-anchor": "middle" }));
  }
  parts.push(...frame(w, h, `C over ${rows.length} samples at m = ${m}`, "count"));

  for (const c of cs) {
    // edges at c-1 and c+1: integers of the opposite parity, bins disjoint
    parts.push(el("rect", {
      class: "bin", "data-c": c,
      x: x(c - 1) + 0.5, y: y(counts.get(c)!),
      width: Math.max(x(c + 1) - x(c - 1) - 1, 1),
      height: y(0) - y(counts.get(c)!),
      fill: "#4a7", stroke: "none",
    }));
  }
  parts.push(line(x(lambda), MARGIN.top, x(lambda), h - MARGIN.bottom, {
    class: "ref", stroke: "#b22", "stroke-dasharray": "6 3",
  }));
  parts.push(text(x(lambda) + 5, MARGIN.top + 12, "sqrt(2 m ln m)", { fill: "#b22" }));
  return svgDoc(w, h, parts);
}

/** Bound-evaluation rows rendered verbatim as a monospace table. */
export function renderBoundsTable(rows: BoundsRow[], opts: FigureOptions = {}): string {
  if (rows.length === 0) throw new SchemaError("no data rows");
  const rowH = 20;
  const colX = [16, 210, 280, 350, 410, 480, 530, 580, 690];
  const w = opts.width ?? 790;
  const h = MARGIN.top + rowH * (rows.length + 1) + 16;

  const parts: string[] = [];
  const header = BOUNDS_COLUMNS.map((c, j) =>
    text(colX[j], MARGIN.top, c, { "font-weight": "bold", "font-family": "monospace" }));
  parts.push(...header);
  parts.push(line(16, MARGIN.top + 6, w - 16, MARGIN.top + 6, { stroke: "#222" }));
  rows.forEach((r, i) => {
    const yy = MARGIN.top + rowH * (i + 1);
    const dim = r.cells[BOUNDS_COLUMNS.indexOf("premise_met")] === "false";
    r.cells.forEach((cell, j) => {
      parts.push(text(colX[j], yy, cell, {
        class: "cell", "font-family": "monospace", fill: dim ? "#999" : "#111",
      }));
    });
  });
  return svgDoc(w, h, parts);
}

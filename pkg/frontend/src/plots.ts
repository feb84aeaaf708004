/**
 * The three figure kinds: evolution curves, floor-vs-size charts and
 * dataset scatter plots. Each renderer is a pure function from parsed
 * CSV rows to an SVG string.
 */

import { scaleLinear, scaleLog } from "d3-scale";
import { MetricsRow, SamplesRow, SchemaError, SweepRow } from "./csv.js";
import { Panel, Scale, Series, document as svgDocument, renderLegend, renderPanel } from "./svg.js";

export interface Input<R> {
  label: string;
  rows: R[];
}

const ALGORITHM_COLORS: Record<string, string> = {
  klms: "#9467bd",
  qklms: "#7f7f7f",
  dklms: "#2ca02c",
  qdklms: "#1f77b4",
  fbqdklms: "#d62728",
};
const FALLBACK_COLORS = ["#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22"];
const CLASS_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"];

/** One curve per (input, algorithm); labels carry the file only on clashes. */
function groupCurves<R extends { algorithm: string }>(inputs: Input<R>[]): Array<{ key: string; color: string; rows: R[] }> {
  const seenIn = new Map<string, Set<string>>();
  for (const input of inputs) {
    for (const row of input.rows) {
      if (!seenIn.has(row.algorithm)) seenIn.set(row.algorithm, new Set());
      seenIn.get(row.algorithm)!.add(input.label);
    }
  }
  const curves: Array<{ key: string; color: string; rows: R[] }> = [];
  let fallback = 0;
  for (const input of inputs) {
    const byAlg = new Map<string, R[]>();
    for (const row of input.rows) {
      if (!byAlg.has(row.algorithm)) byAlg.set(row.algorithm, []);
      byAlg.get(row.algorithm)!.push(row);
    }
    for (const [alg, rows] of byAlg) {
      const clash = seenIn.get(alg)!.size > 1;
      const key = clash ? `${alg} (${input.label})` : alg;
      const color = clash
        ? FALLBACK_COLORS[fallback++ % FALLBACK_COLORS.length]
        : ALGORITHM_COLORS[alg] ?? FALLBACK_COLORS[fallback++ % FALLBACK_COLORS.length];
      curves.push({ key, color, rows });
    }
  }
  return curves;
}

function extent(values: number[], label: string): [number, number] {
  if (values.length === 0) throw new SchemaError(`${label}: no values to plot`);
  let lo = values[0];
  let hi = values[0];
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

export function renderEvolution(inputs: Input<MetricsRow>[]): string {
  const curves = groupCurves(inputs);
  const rounds = curves.flatMap((c) => c.rows.map((r) => r.round));
  // a log MSE axis cannot carry zeros; such points are dropped, the rest kept
  const mses = curves.flatMap((c) => c.rows.map((r) => r.mse).filter((v) => v > 0));
  if (mses.length === 0) {
    throw new SchemaError("metrics: all mse values are <= 0, nothing to draw on a log axis");
  }
  const sizes = curves.flatMap((c) => c.rows.map((r) => r.avg_dict_size));

  const W = 640;
  const left = 72;
  const width = W - left - 28;
  const x = scaleLinear().domain(extent(rounds, "round")).range([left, left + width]) as unknown as Scale;
  // multiplicative padding keeps the log axis tight instead of rounding to decades
  const [mlo, mhi] = extent(mses, "mse");
  const yMse = scaleLog().domain([mlo / 1.15, mhi * 1.15]).range([246, 36]) as unknown as Scale;
  const ySize = scaleLinear().domain([0, extent(sizes, "avg_dict_size")[1] * 1.06]).range([504, 294]) as unknown as Scale;

  const mseSeries: Series[] = curves.map((c) => ({
    label: c.key,
    color: c.color,
    points: c.rows.filter((r) => r.mse > 0).map((r) => ({ x: r.round, y: r.mse })),
  }));
  const sizeSeries: Series[] = curves.map((c) => ({
    label: c.key,
    color: c.color,
    points: c.rows.map((r) => ({ x: r.round, y: r.avg_dict_size })),
  }));

  const top: Panel = {
    left, top: 36, width, height: 210,
    xScale: x, yScale: yMse,
    xLabel: "round", yLabel: "MSE (log scale)",
    series: mseSeries,
  };
  const bottom: Panel = {
    left, top: 294, width, height: 210,
    xScale: x, yScale: ySize,
    xLabel: "round", yLabel: "avg dictionary size",
    series: sizeSeries,
  };
  const body =
    renderPanel(top) +
    renderPanel(bottom) +
    renderLegend(mseSeries, left + width - 150, 52);
  return svgDocument(W, 548, "MSE and dictionary-size evolution", body);
}

export function renderSweep(inputs: Input<SweepRow>[]): string {
  const curves = groupCurves(inputs);
  const sizes = [...new Set(curves.flatMap((c) => c.rows.map((r) => r.node_count)))].sort(
    (a, b) => a - b
  );
  const floors = curves.flatMap((c) => c.rows.map((r) => r.mse_floor));

  const W = 520;
  const left = 72;
  const width = W - left - 28;
  const [flo, fhi] = extent(floors, "mse_floor");
  const pad = (fhi - flo || fhi || 1) * 0.08;
  const x = scaleLinear().domain([sizes[0], sizes[sizes.length - 1]]).range([left, left + width]) as unknown as Scale;
  const y = scaleLinear().domain([Math.max(0, flo - pad), fhi + pad]).range([276, 36]) as unknown as Scale;

  const series: Series[] = curves.map((c) => ({
    label: c.key,
    color: c.color,
    markers: true,
    points: [...c.rows]
      .sort((a, b) => a.node_count - b.node_count)
      .map((r) => ({ x: r.node_count, y: r.mse_floor })),
  }));
  const panel: Panel = {
    left, top: 36, width, height: 240,
    xScale: x, yScale: y,
    xLabel: "network size (nodes)", yLabel: "MSE floor",
    series,
    xTicks: sizes,
  };
  const body = renderPanel(panel) + renderLegend(series, left + width - 150, 52);
  return svgDocument(W, 348, "MSE floor vs network size", body);
}

export function renderScatter(inputs: Input<SamplesRow>[]): string {
  const rows = inputs.flatMap((i) => i.rows);
  const classes = [...new Set(rows.map((r) => r.desired))].sort((a, b) => b - a);

  const xs = rows.map((r) => r.coords[0]);
  const ys = rows.map((r) => r.coords[1]);
  const [xlo, xhi] = extent(xs, "x0");
  const [ylo, yhi] = extent(ys, "x1");
  const xpad = (xhi - xlo || 1) * 0.06;
  const ypad = (yhi - ylo || 1) * 0.06;

  const W = 520;
  const left = 72;
  const width = W - left - 28;
  const x = scaleLinear().domain([xlo - xpad, xhi + xpad]).range([left, left + width]) as unknown as Scale;
  const y = scaleLinear().domain([ylo - ypad, yhi + ypad]).range([436, 36]) as unknown as Scale;

  let dots = "";
  const legend: Series[] = [];
  classes.forEach((cls, i) => {
    const color = CLASS_COLORS[i % CLASS_COLORS.length];
    legend.push({ label: `class ${cls > 0 ? "+" : ""}${cls}`, color, points: [] });
    for (const r of rows) {
      if (r.desired !== cls) continue;
      dots += `<circle class="sample" cx="${x(r.coords[0]).toFixed(2)}" cy="${y(r.coords[1]).toFixed(2)}" r="1.7" fill="${color}" fill-opacity="0.65"/>\n`;
    }
  });
  const panel: Panel = {
    left, top: 36, width, height: 400,
    xScale: x, yScale: y,
    xLabel: "x0", yLabel: "x1",
    series: [],
  };
  const body = renderPanel(panel) + dots + renderLegend(legend, left + width - 90, 52);
  return svgDocument(W, 508, "samples by class", body);
}

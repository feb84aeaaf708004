/**
 * Hand-assembled SVG building blocks shared by the figure renderers.
 *
 * Scales and line paths come from d3; the document itself is plain string
 * templates so the output is a small standalone file with deterministic
 * geometry: same rows in, same bytes out.
 */

import { line } from "d3-shape";

/** Any continuous d3 scale (linear or log) mapped to pixel coordinates. */
export interface Scale {
  (v: number): number;
  ticks(count?: number): number[];
  domain(): number[];
}

export interface Pt {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  color: string;
  points: Pt[];
  markers?: boolean;
}

export interface Panel {
  left: number;
  top: number;
  width: number;
  height: number;
  xScale: Scale;
  yScale: Scale;
  xLabel: string;
  yLabel: string;
  series: Series[];
  xTicks?: number[];
  yTickCount?: number;
}

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const px = (v: number) => v.toFixed(2);

/** Short deterministic tick label: 0.05, 0.3162, 208, 1.0e-4. */
export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.001 && a < 100000) return String(Number(v.toPrecision(4)));
  return v.toExponential(1);
}

/** Tame d3's log ticks, which enumerate every mantissa across wide domains. */
export function niceTicks(scale: Scale, count: number): number[] {
  const t = scale.ticks(count);
  if (t.length <= count + 3) return t;
  const keep = t.filter((v) => {
    const m = v / Math.pow(10, Math.floor(Math.log10(Math.abs(v)) + 1e-12));
    return [1, 2, 5].some((k) => Math.abs(m - k) < 1e-9);
  });
  return keep.length >= 2 ? keep : t;
}

export function renderPanel(p: Panel): string {
  const right = p.left + p.width;
  const bottom = p.top + p.height;
  const xTicks = p.xTicks ?? niceTicks(p.xScale, 6);
  const yTicks = niceTicks(p.yScale, p.yTickCount ?? 5);
  let s = "";

  // grid + y tick labels
  for (const v of yTicks) {
    const y = p.yScale(v);
    s += `<line x1="${px(p.left)}" y1="${px(y)}" x2="${px(right)}" y2="${px(y)}" stroke="#e8e8e8" stroke-width="0.6"/>\n`;
    s += `<text x="${px(p.left - 6)}" y="${px(y + 3)}" font-size="9" fill="#444" text-anchor="end">${esc(fmt(v))}</text>\n`;
  }
  // x tick marks + labels
  for (const v of xTicks) {
    const x = p.xScale(v);
    s += `<line x1="${px(x)}" y1="${px(bottom)}" x2="${px(x)}" y2="${px(bottom + 4)}" stroke="#444" stroke-width="0.8"/>\n`;
    s += `<text x="${px(x)}" y="${px(bottom + 14)}" font-size="9" fill="#444" text-anchor="middle">${esc(fmt(v))}</text>\n`;
  }

  // frame
  s += `<rect x="${px(p.left)}" y="${px(p.top)}" width="${px(p.width)}" height="${px(p.height)}" fill="none" stroke="#444" stroke-width="0.8"/>\n`;

  // axis labels
  s += `<text x="${px(p.left + p.width / 2)}" y="${px(bottom + 28)}" font-size="10" fill="#222" text-anchor="middle">${esc(p.xLabel)}</text>\n`;
  s += `<text x="${px(p.left - 40)}" y="${px(p.top + p.height / 2)}" font-size="10" fill="#222" text-anchor="middle" transform="rotate(-90 ${px(p.left - 40)} ${px(p.top + p.height / 2)})">${esc(p.yLabel)}</text>\n`;

  // data
  const mk = line<Pt>()
    .x((d) => Number(px(p.xScale(d.x))))
    .y((d) => Number(px(p.yScale(d.y))));
  for (const series of p.series) {
    if (series.points.length === 0) continue;
    if (series.points.length > 1) {
      const d = mk(series.points);
      s += `<path class="curve" fill="none" stroke="${series.color}" stroke-width="1.4" d="${d}"/>\n`;
    }
    if (series.markers || series.points.length === 1) {
      for (const pt of series.points) {
        s += `<circle cx="${px(p.xScale(pt.x))}" cy="${px(p.yScale(pt.y))}" r="2.6" fill="${series.color}"/>\n`;
      }
    }
  }
  return s;
}

export function renderLegend(series: Series[], x: number, y: number): string {
  let s = "";
  series.forEach((item, i) => {
    const yy = y + i * 14;
    s += `<line x1="${px(x)}" y1="${px(yy)}" x2="${px(x + 18)}" y2="${px(yy)}" stroke="${item.color}" stroke-width="2"/>\n`;
    s += `<text x="${px(x + 23)}" y="${px(yy + 3.5)}" font-size="9" fill="#222">${esc(item.label)}</text>\n`;
  });
  return s;
}

export function document(width: number, height: number, title: string, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="#fff"/>\n` +
    `<text x="${width / 2}" y="18" font-size="12" font-weight="600" fill="#222" text-anchor="middle">${esc(title)}</text>\n` +
    body +
    `</svg>\n`
  );
}

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { parseMetrics, parseSamples, parseSweep } from "../src/csv.js";
import { renderEvolution, renderScatter, renderSweep } from "../src/plots.js";

const fixture = (name: string) =>
  readFileSync(fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url)), "utf-8");

const channel = () => [
  { label: "channel", rows: parseMetrics(fixture("channel-metrics.csv")) },
];
const solo = () => [
  { label: "solo", rows: parseMetrics(fixture("qklms-solo-metrics.csv")) },
];

function curveCount(svg: string): number {
  return (svg.match(/class="curve"/g) ?? []).length;
}

describe("renderEvolution", () => {
  it("draws one curve per algorithm on both panels", () => {
    const svg = renderEvolution(channel());
    // qdklms and fbqdklms, once on the MSE panel and once on the size panel
    expect(curveCount(svg)).toBe(4);
    expect(svg).toContain(">qdklms</text>");
    expect(svg).toContain(">fbqdklms</text>");
    expect(svg).toContain("MSE (log scale)");
  });

  it("uses a log MSE axis: geometric values land equally spaced", () => {
    const text =
      "algorithm,round,mse,avg_dict_size\n" +
      "qdklms,1,1.0,1\nqdklms,2,0.1,2\nqdklms,3,0.01,3\n";
    const svg = renderEvolution([{ label: "t", rows: parseMetrics(text) }]);
    const d = /<path class="curve".*?d="([^"]+)"/.exec(svg);
    expect(d).not.toBeNull();
    const ys = [...d![1].matchAll(/[\d.]+,([\d.]+)/g)].map((m) => Number(m[1]));
    expect(ys).toHaveLength(3);
    const [y1, y2, y3] = ys;
    expect(y2 - y1).toBeCloseTo(y3 - y2, 6);
    expect(y3).toBeGreaterThan(y1); // smaller MSE sits lower on the page
  });

  it("is deterministic", () => {
    expect(renderEvolution(channel())).toBe(renderEvolution(channel()));
  });

  it("overlays several files, one curve per algorithm each", () => {
    const svg = renderEvolution([...channel(), ...solo()]);
    expect(curveCount(svg)).toBe(6);
    expect(svg).toContain(">qklms</text>");
  });

  it("disambiguates a repeated algorithm by file name", () => {
    const rows = 'algorithm,round,mse,avg_dict_size\nqklms,1,0.9,1\nqklms,2,0.8,2\n';
    const svg = renderEvolution([
      { label: "before", rows: parseMetrics(rows) },
      { label: "after", rows: parseMetrics(rows) },
    ]);
    expect(svg).toContain(">qklms (before)</text>");
    expect(svg).toContain(">qklms (after)</text>");
  });

  it("refuses a file with no positive mse values", () => {
    const text = "algorithm,round,mse,avg_dict_size\nqdklms,1,0.0,1\n";
    expect(() => renderEvolution([{ label: "t", rows: parseMetrics(text) }])).toThrow(
      /log axis/
    );
  });
});

describe("renderSweep", () => {
  it("puts node_count on the x axis with a tick per size", () => {
    const svg = renderSweep([
      { label: "sweep", rows: parseSweep(fixture("crescent-sweep.csv")) },
    ]);
    expect(curveCount(svg)).toBe(2);
    for (const size of ["2", "4", "8", "16"]) {
      expect(svg).toMatch(new RegExp(`text-anchor="middle">${size}</text>`));
    }
    expect(svg).toContain("network size (nodes)");
    expect(svg).toContain("MSE floor");
  });
});

describe("renderScatter", () => {
  function classCentroids(svg: string) {
    const pts: Record<string, { x: number[]; y: number[] }> = {};
    for (const m of svg.matchAll(/cx="([\d.-]+)" cy="([\d.-]+)" r="1.7" fill="(#\w+)"/g)) {
      const c = (pts[m[3]] ??= { x: [], y: [] });
      c.x.push(Number(m[1]));
      c.y.push(Number(m[2]));
    }
    return pts;
  }
  const mean = (v: number[]) => v.reduce((a, b) => a + b, 0) / v.length;

  it("reproduces the two-moon structure of the crescent set", () => {
    const svg = renderScatter([
      { label: "crescent", rows: parseSamples(fixture("crescent-samples.csv")) },
    ]);
    const pts = classCentroids(svg);
    const classes = Object.keys(pts);
    expect(classes).toHaveLength(2);
    const [a, b] = classes.map((c) => pts[c]);
    expect(a.x.length + b.x.length).toBe(2000);
    expect(a.x.length).toBeGreaterThan(800);
    expect(b.x.length).toBeGreaterThan(800);
    // interleaved moons: one arc opens downward above the other
    expect(Math.abs(mean(a.y) - mean(b.y))).toBeGreaterThan(50);
    expect(svg).toContain(">class +1</text>");
    expect(svg).toContain(">class -1</text>");
  });

  it("reproduces the point symmetry of the spiral set", () => {
    const svg = renderScatter([
      { label: "spiral", rows: parseSamples(fixture("spiral-samples.csv")) },
    ]);
    const pts = classCentroids(svg);
    const [a, b] = Object.keys(pts).map((c) => pts[c]);
    // arms are mirror images through the center, so the class centroids
    // sit on opposite sides of it in both coordinates
    const cx = (mean(a.x) + mean(b.x)) / 2;
    const cy = (mean(a.y) + mean(b.y)) / 2;
    expect((mean(a.x) - cx) * (mean(b.x) - cx)).toBeLessThan(0);
    expect((mean(a.y) - cy) * (mean(b.y) - cy)).toBeLessThan(0);
  });

  it("is deterministic", () => {
    const inputs = () => [
      { label: "crescent", rows: parseSamples(fixture("crescent-samples.csv")) },
    ];
    expect(renderScatter(inputs())).toBe(renderScatter(inputs()));
  });
});

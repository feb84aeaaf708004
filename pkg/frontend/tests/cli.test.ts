import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { main } from "../src/cli.js";

const fixtures = fileURLToPath(new URL("./fixtures", import.meta.url));
const tmp = mkdtempSync(path.join(os.tmpdir(), "dklms-plots-"));
afterAll(() => rmSync(tmp, { recursive: true, force: true }));

let errors: string[] = [];
let logs: string[] = [];
beforeEach(() => {
  errors = [];
  logs = [];
  vi.spyOn(console, "error").mockImplementation((m) => errors.push(String(m)));
  vi.spyOn(console, "log").mockImplementation((m) => logs.push(String(m)));
});
afterEach(() => vi.restoreAllMocks());

const metricsIn = path.join(fixtures, "channel-metrics.csv");

describe("argument handling", () => {
  it("needs a kind", async () => {
    expect(await main([])).toBe(1);
    expect(errors[0]).toMatch(/error:/);
  });

  it("rejects an unknown kind", async () => {
    expect(await main(["pie", "--in", metricsIn, "--out", path.join(tmp, "x.svg")])).toBe(1);
    expect(errors[0]).toMatch(/pie/);
  });

  it("demands --in and --out", async () => {
    expect(await main(["evolution", "--out", "x.svg"])).toBe(1);
    expect(errors[0]).toMatch(/in/);
    expect(await main(["evolution", "--in", metricsIn])).toBe(1);
  });

  it("rejects unknown flags", async () => {
    expect(
      await main(["evolution", "--in", metricsIn, "--out", "x.svg", "--theme", "dark"])
    ).toBe(1);
  });
});

describe("failure modes", () => {
  it("missing input file is an I/O error", async () => {
    expect(await main(["evolution", "--in", "no-such.csv", "--out", path.join(tmp, "x.svg")])).toBe(2);
    expect(errors[0]).toMatch(/cannot read no-such\.csv/);
  });

  it("schema violations name the missing column", async () => {
    const bad = path.join(tmp, "bad.csv");
    writeFileSync(bad, "algorithm,round,avg_dict_size\nqdklms,1,1.0\n");
    expect(await main(["evolution", "--in", bad, "--out", path.join(tmp, "x.svg")])).toBe(1);
    expect(errors[0]).toMatch(/missing column "mse"/);
  });

  it("an empty CSV body is a schema error", async () => {
    const empty = path.join(tmp, "empty.csv");
    writeFileSync(empty, "algorithm,round,mse,avg_dict_size\n");
    expect(await main(["evolution", "--in", empty, "--out", path.join(tmp, "x.svg")])).toBe(1);
    expect(errors[0]).toMatch(/no data rows/);
  });

  it("feeding the wrong schema to a kind is rejected", async () => {
    expect(await main(["sweep", "--in", metricsIn, "--out", path.join(tmp, "x.svg")])).toBe(1);
    expect(errors[0]).toMatch(/missing column/);
  });
});

describe("rendering", () => {
  it("writes an SVG file and reports it", async () => {
    const out = path.join(tmp, "evo.svg");
    expect(await main(["evolution", "--in", metricsIn, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf-8")).toMatch(/^<svg /);
    expect(logs[0]).toBe(`wrote ${out}`);
  });

  it("creates missing output directories", async () => {
    const out = path.join(tmp, "deep", "nested", "evo.svg");
    expect(await main(["evolution", "--in", metricsIn, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("</svg>");
  });

  it("accepts several --in files", async () => {
    const out = path.join(tmp, "overlay.svg");
    const code = await main([
      "evolution",
      "--in", metricsIn,
      "--in", path.join(fixtures, "qklms-solo-metrics.csv"),
      "--out", out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain(">qklms</text>");
  });

  it("round-trips sweep and scatter too", async () => {
    for (const [kind, file] of [
      ["sweep", "crescent-sweep.csv"],
      ["scatter", "crescent-samples.csv"],
      ["scatter", "spiral-samples.csv"],
    ] as const) {
      const out = path.join(tmp, `${kind}-${file}.svg`);
      expect(await main([kind, "--in", path.join(fixtures, file), "--out", out])).toBe(0);
    }
  });
});

describe("built executable", () => {
  it("runs the same pipeline from dist/", () => {
    const cli = fileURLToPath(new URL("../dist/cli.js", import.meta.url));
    const out = path.join(tmp, "from-dist.svg");
    const stdout = execFileSync("node", [cli, "scatter", "--in",
      path.join(fixtures, "crescent-samples.csv"), "--out", out]).toString();
    expect(stdout).toContain(`wrote ${out}`);
    expect(readFileSync(out, "utf-8")).toMatch(/^<svg /);
  });
});

/**
 * Typed readers for the three experiment CSV schemas.
 *
 * The column layouts are a contract with the producer and are checked
 * exactly: a file with missing, extra or non-numeric fields is rejected
 * with a message that names the offending column, never silently coerced.
 */

import Papa from "papaparse";

export class SchemaError extends Error {}

export interface MetricsRow {
  algorithm: string;
  round: number;
  mse: number;
  avg_dict_size: number;
}

export interface SweepRow {
  algorithm: string;
  node_count: number;
  mse_floor: number;
  avg_final_dict_size: number;
}

export interface SamplesRow {
  node: number;
  round: number;
  coords: number[];
  desired: number;
}

const METRICS_COLUMNS = ["algorithm", "round", "mse", "avg_dict_size"];
const SWEEP_COLUMNS = ["algorithm", "node_count", "mse_floor", "avg_final_dict_size"];

interface RawTable {
  header: string[];
  rows: string[][];
}

function tokenize(text: string, label: string): RawTable {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`${label}: unparseable CSV (${e.message})`);
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new SchemaError(`${label}: empty file, expected a header row`);
  }
  if (data.length === 1) {
    throw new SchemaError(`${label}: no data rows after the header`);
  }
  return { header: data[0], rows: data.slice(1) };
}

function checkColumns(header: string[], expected: string[], label: string): void {
  const missing = expected.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`${label}: missing column "${missing.join('", "')}"`);
  }
  const extra = header.filter((c) => !expected.includes(c));
  if (extra.length > 0) {
    throw new SchemaError(`${label}: unexpected column "${extra.join('", "')}"`);
  }
  for (const [i, c] of expected.entries()) {
    if (header[i] !== c) {
      throw new SchemaError(
        `${label}: column "${c}" out of order, header is ${header.join(",")}`
      );
    }
  }
}

function toNumber(raw: string, column: string, line: number, label: string): number {
  const v = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(v)) {
    throw new SchemaError(`${label}: line ${line}: column "${column}" is not a number (${raw})`);
  }
  return v;
}

export function parseMetrics(text: string, label = "metrics"): MetricsRow[] {
  const { header, rows } = tokenize(text, label);
  checkColumns(header, METRICS_COLUMNS, label);
  return rows.map((r, i) => ({
    algorithm: r[0],
    round: toNumber(r[1], "round", i + 2, label),
    mse: toNumber(r[2], "mse", i + 2, label),
    avg_dict_size: toNumber(r[3], "avg_dict_size", i + 2, label),
  }));
}

export function parseSweep(text: string, label = "sweep"): SweepRow[] {
  const { header, rows } = tokenize(text, label);
  checkColumns(header, SWEEP_COLUMNS, label);
  return rows.map((r, i) => ({
    algorithm: r[0],
    node_count: toNumber(r[1], "node_count", i + 2, label),
    mse_floor: toNumber(r[2], "mse_floor", i + 2, label),
    avg_final_dict_size: toNumber(r[3], "avg_final_dict_size", i + 2, label),
  }));
}

/** Samples carry a task-dependent number of x columns: node,round,x0..xK,desired. */
export function parseSamples(text: string, label = "samples"): SamplesRow[] {
  const { header, rows } = tokenize(text, label);
  const dim = header.length - 3;
  const expected = ["node", "round"];
  for (let i = 0; i < Math.max(dim, 2); i++) expected.push(`x${i}`);
  expected.push("desired");
  checkColumns(header, expected, label);
  return rows.map((r, i) => ({
    node: toNumber(r[0], "node", i + 2, label),
    round: toNumber(r[1], "round", i + 2, label),
    coords: header
      .slice(2, 2 + dim)
      .map((c, j) => toNumber(r[2 + j], c, i + 2, label)),
    desired: toNumber(r[2 + dim], "desired", i + 2, label),
  }));
}

#!/usr/bin/env node
/**
 * plot <kind> --in <csv> [--in <csv>...] --out <img>
 *
 * Renders experiment CSV files as standalone SVG figures. Exit codes follow
 * the producer's convention: 0 success, 1 usage or schema error, 2 I/O error.
 */

import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import path from "node:path";
import yargs from "yargs";
import { SchemaError, parseMetrics, parseSamples, parseSweep } from "./csv.js";
import { renderEvolution, renderScatter, renderSweep } from "./plots.js";

class UsageError extends Error {}

const KINDS = ["evolution", "sweep", "scatter"] as const;
type Kind = (typeof KINDS)[number];

function render(kind: Kind, files: string[]): string {
  const inputs = files.map((file) => {
    const name = path.basename(file);
    let text: string;
    try {
      text = readFileSync(file, "utf-8");
    } catch (err) {
      throw new IoError(`cannot read ${file}: ${(err as Error).message}`);
    }
    return { label: name.replace(/\.[^.]*$/, ""), name, text };
  });
  switch (kind) {
    case "evolution":
      return renderEvolution(
        inputs.map((i) => ({ label: i.label, rows: parseMetrics(i.text, i.name) }))
      );
    case "sweep":
      return renderSweep(
        inputs.map((i) => ({ label: i.label, rows: parseSweep(i.text, i.name) }))
      );
    case "scatter":
      return renderScatter(
        inputs.map((i) => ({ label: i.label, rows: parseSamples(i.text, i.name) }))
      );
  }
}

class IoError extends Error {}

export async function main(argv: string[]): Promise<number> {
  try {
    const parser = yargs(argv)
      .scriptName("plot")
      .usage("$0 <kind> --in <csv> [--in <csv>...] --out <img>")
      .command("$0 <kind>", "render a figure from experiment CSV files", (y) =>
        y.positional("kind", {
          describe: "figure kind",
          choices: KINDS,
          type: "string",
        })
      )
      .option("in", {
        type: "string",
        array: true,
        demandOption: true,
        describe: "input CSV file, repeatable",
      })
      .option("out", {
        type: "string",
        demandOption: true,
        describe: "output SVG file",
      })
      .strict()
      .exitProcess(false)
      .fail((msg, err) => {
        throw new UsageError(msg ?? err?.message ?? "bad arguments");
      });
    const args = (await parser.parse()) as {
      kind?: Kind;
      in?: string[];
      out?: string;
      help?: boolean;
    };
    if (args.help) return 0;

    const svg = render(args.kind as Kind, args.in as string[]);
    const out = args.out as string;
    const dir = path.dirname(out);
    if (dir && dir !== ".") mkdirSync(dir, { recursive: true });
    writeFileSync(out, svg);
    console.log(`wrote ${out}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError || err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}

const entry = process.argv[1] ? path.resolve(process.argv[1]) : "";
if (import.meta.url === `file://${entry}`) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}

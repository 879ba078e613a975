#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { renderBoundsTable, renderConvergence, renderHistogram } from "./figures.js";
import { parseBoundsCsv, parseRawCsv, parseRunCsv, SchemaError } from "./schema.js";

const USAGE = "usage: plots <convergence|histogram|bounds-table> --in run.csv --out fig.svg";

export function render(kind: string, csvText: string): string {
  switch (kind) {
    case "convergence":
      return renderConvergence(parseRunCsv(csvText));
    case "histogram":
      return renderHistogram(parseRawCsv(csvText));
    case "bounds-table":
      return renderBoundsTable(parseBoundsCsv(csvText));
    default:
      throw new RangeError(`unknown figure kind: ${kind}`);
  }
}

export function main(argv: string[]): number {
  let positionals: string[];
  let values: { in?: string; out?: string };
  try {
    ({ positionals, values } = parseArgs({
      args: argv,
      allowPositionals: true,
      options: { in: { type: "string" }, out: { type: "string" } },
    }));
  } catch (e) {
    console.error((e as Error).message);
    console.error(USAGE);
    return 2;
  }
  const kind = positionals[0];
  if (positionals.length !== 1 || !kind || !values.in || !values.out) {
    console.error(USAGE);
    return 2;
  }

  let csvText: string;
  try {
    csvText = readFileSync(values.in, "utf8");
  } catch (e) {
    console.error(`cannot read ${values.in}: ${(e as Error).message}`);
    return 1;
  }
  let svg: string;
  try {
    svg = render(kind, csvText);
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(`schema mismatch: ${e.message}`);
      return 1;
    }
    if (e instanceof RangeError) {
      console.error(e.message);
      console.error(USAGE);
      return 2;
    }
    throw e;
  }
  // written only after a successful render: bad input leaves no file behind
  writeFileSync(values.out, svg);
  console.error(`wrote ${values.out}`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}

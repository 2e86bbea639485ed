#!/usr/bin/env node
/**
 * plotkit <fig1|fig2> --csv PATH --out DIR [--format svg|png]
 *
 * fig1 expects a query-frequency experiment CSV, fig2 a noise-sensitivity
 * one. Exit codes: 0 ok (including the empty-input no-op), 1 schema or IO
 * error, 2 usage error.
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { SchemaError } from "./csv.js";
import { Family, Format, renderFigures } from "./render.js";

const USAGE = "usage: plotkit <fig1|fig2> --csv PATH --out DIR [--format svg|png]";

export function runCli(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        csv: { type: "string" },
        out: { type: "string" },
        format: { type: "string", default: "svg" },
      },
    });
  } catch (e) {
    console.error(`error: ${(e as Error).message}\n${USAGE}`);
    return 2;
  }
  const family = args.positionals[0];
  const { csv, out, format } = args.values;
  if (args.positionals.length !== 1 || (family !== "fig1" && family !== "fig2")) {
    console.error(USAGE);
    return 2;
  }
  if (!csv || !out) {
    console.error(`error: --csv and --out are required\n${USAGE}`);
    return 2;
  }
  if (format !== "svg" && format !== "png") {
    console.error(`error: unknown format ${JSON.stringify(format)}\n${USAGE}`);
    return 2;
  }

  try {
    const result = renderFigures({
      family: family as Family,
      csvPath: csv,
      outDir: out,
      format: format as Format,
    });
    if (result.warning) {
      console.warn(`warning: ${result.warning}`);
      return 0;
    }
    for (const f of result.files) console.log(`${format.toUpperCase()} → ${f}`);
    console.log(`${result.panelCount} panel(s), ${result.seriesCount} series.`);
    return 0;
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(`schema error: ${e.message}`);
    } else {
      console.error(`error: ${(e as Error).message}`);
    }
    return 1;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(runCli(process.argv.slice(2)));
}

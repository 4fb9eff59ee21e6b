#!/usr/bin/env node
/** Standalone script: one exploitability curve per mutation rate. */

import { parseArgs } from "node:util";

import { isMain, requireOut, runCli } from "./cli_common.js";
import { plotSweep } from "./plot_sweep.js";

const USAGE = "usage: plot_sweep <sweep.csv> --out <file> [--title <text>]";

export function main(argv: string[]): number {
  return runCli(USAGE, () => {
    const { values, positionals } = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        out: { type: "string" },
        title: { type: "string" },
      },
    });
    if (positionals.length !== 1) throw new Error("need exactly one sweep CSV");
    plotSweep(positionals[0], requireOut(values), { title: values.title });
  });
}

if (isMain(import.meta.url)) process.exit(main(process.argv.slice(2)));

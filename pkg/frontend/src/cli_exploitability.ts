#!/usr/bin/env node
/** Standalone script: exploitability curves from aggregate metrics CSVs. */

import { parseArgs } from "node:util";

import { isMain, matchLabels, requireOut, runCli } from "./cli_common.js";
import { plotExploitability } from "./plot_exploitability.js";

const USAGE =
  "usage: plot_exploitability <csv...> --out <file> [--log-y] [--label <name> ...] [--title <text>]";

export function main(argv: string[]): number {
  return runCli(USAGE, () => {
    const { values, positionals } = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        out: { type: "string" },
        "log-y": { type: "boolean", default: false },
        label: { type: "string", multiple: true },
        title: { type: "string" },
      },
    });
    if (positionals.length === 0) throw new Error("need at least one input CSV");
    matchLabels(values.label, positionals.length);
    const inputs = positionals.map((path, i) => ({ path, label: values.label?.[i] }));
    plotExploitability(inputs, requireOut(values), {
      logY: values["log-y"],
      title: values.title,
    });
  });
}

if (isMain(import.meta.url)) process.exit(main(process.argv.slice(2)));

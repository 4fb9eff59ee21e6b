#!/usr/bin/env node
/** Standalone script: barycentric trajectory plot from trajectory CSVs. */

import { parseArgs } from "node:util";

import { isMain, matchLabels, requireOut, runCli } from "./cli_common.js";
import { labelFromPath } from "./plot_exploitability.js";
import { plotSimplex } from "./plot_simplex.js";

const USAGE =
  "usage: plot_simplex <csv...> --out <file> [--player 1|2] [--seed <n>] " +
  "[--marker p0,p1,p2] [--marker-label <text>] [--label <name> ...] [--title <text>]";

export function main(argv: string[]): number {
  return runCli(USAGE, () => {
    const { values, positionals } = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        out: { type: "string" },
        player: { type: "string", default: "1" },
        seed: { type: "string" },
        marker: { type: "string" },
        "marker-label": { type: "string" },
        label: { type: "string", multiple: true },
        title: { type: "string" },
      },
    });
    if (positionals.length === 0) throw new Error("need at least one trajectory CSV");
    const playerNum = Number(values.player);
    if (playerNum !== 1 && playerNum !== 2) throw new Error("--player must be 1 or 2");
    const player = playerNum as 1 | 2;
    matchLabels(values.label, positionals.length);
    const seed = values.seed === undefined ? undefined : Number(values.seed);
    if (seed !== undefined && !Number.isInteger(seed)) {
      throw new Error(`--seed must be an integer, got '${values.seed}'`);
    }
    const marker = values.marker?.split(",").map((s) => {
      const v = Number(s);
      if (Number.isNaN(v)) throw new Error(`bad marker coordinate '${s}'`);
      return v;
    });
    const inputs = positionals.map((path, i) => ({
      path,
      label: values.label?.[i] ?? labelFromPath(path),
      player,
      seed,
    }));
    plotSimplex(inputs, requireOut(values), {
      marker,
      markerLabel: values["marker-label"],
      title: values.title,
    });
  });
}

if (isMain(import.meta.url)) process.exit(main(process.argv.slice(2)));

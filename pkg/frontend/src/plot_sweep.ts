/** One chart per mutation-rate sweep: a series for each mu in the file. */

import { readFileSync, writeFileSync } from "node:fs";

import { parseSweep } from "./csv.js";
import { renderLineChart, Series } from "./svg.js";

export interface SweepOptions {
  logY?: boolean;
  title?: string;
}

export function renderSweepChart(path: string, opts: SweepOptions = {}): string {
  const rows = parseSweep(readFileSync(path, "utf8"));
  if (rows.length === 0) throw new Error(`sweep file '${path}' has no data rows`);
  const mus = [...new Set(rows.map((r) => r.mu))].sort((a, b) => a - b);
  const series: Series[] = mus.map((mu) => ({
    label: `mu=${mu}`,
    points: rows
      .filter((r) => r.mu === mu)
      .map((r) => [r.iteration, r.exploitability] as [number, number]),
  }));
  return renderLineChart(series, {
    logY: opts.logY ?? true,
    xLabel: "iteration",
    yLabel: "exploitability",
    title: opts.title,
  });
}

export function plotSweep(path: string, outPath: string, opts: SweepOptions = {}): void {
  writeFileSync(outPath, renderSweepChart(path, opts));
}

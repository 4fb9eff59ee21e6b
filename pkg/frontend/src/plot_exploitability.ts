/**
 * Exploitability-vs-iteration chart, one curve per algorithm. Means over
 * seeds come from the harness's aggregate CSV and are never recomputed
 * here; a per-seed metrics file is accepted only if it holds a single seed.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import {
  AGGREGATE_HEADER,
  METRICS_HEADER,
  SchemaError,
  parseAggregate,
  parseMetrics,
} from "./csv.js";
import { renderLineChart, Series } from "./svg.js";

export interface MetricsInput {
  path: string;
  label?: string;
}

/** `runs/metrics_mean.csv` -> `metrics_mean`, used when no label is given. */
export function labelFromPath(path: string): string {
  return basename(path).replace(/\.csv$/, "").replace(/^(metrics|aggregate)_/, "");
}

function curve(text: string, label: string): Series {
  const header = text.trim().split("\n", 1)[0];
  if (header === AGGREGATE_HEADER) {
    return {
      label,
      points: parseAggregate(text).map((r) => [r.iteration, r.exploitability]),
    };
  }
  if (header === METRICS_HEADER) {
    const rows = parseMetrics(text);
    const seeds = new Set(rows.map((r) => r.seed));
    if (seeds.size !== 1) {
      throw new SchemaError(
        `'${label}' holds ${seeds.size} seeds; means over seeds must come from the aggregate CSV`,
      );
    }
    return { label, points: rows.map((r) => [r.iteration, r.exploitability]) };
  }
  throw new SchemaError(`'${label}' matches neither the aggregate nor the metrics schema`);
}

export interface ExploitabilityOptions {
  logY?: boolean;
  title?: string;
}

export function renderExploitabilityChart(
  inputs: MetricsInput[],
  opts: ExploitabilityOptions = {},
): string {
  if (inputs.length === 0) throw new Error("need at least one input CSV");
  const series = inputs.map((inp) =>
    curve(readFileSync(inp.path, "utf8"), inp.label ?? labelFromPath(inp.path)),
  );
  return renderLineChart(series, {
    logY: opts.logY ?? false,
    xLabel: "iteration",
    yLabel: "exploitability",
    title: opts.title,
  });
}

export function plotExploitability(
  inputs: MetricsInput[],
  outPath: string,
  opts: ExploitabilityOptions = {},
): void {
  writeFileSync(outPath, renderExploitabilityChart(inputs, opts));
}

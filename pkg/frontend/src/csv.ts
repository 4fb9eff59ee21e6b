/**
 * Readers for the experiment CSV files. Headers are matched exactly and
 * every cell is validated; the renderer never writes or mutates its inputs.
 */

import Papa from "papaparse";

export class SchemaError extends Error {}

export interface MetricsRow {
  seed: number;
  iteration: number;
  exploitability: number;
  klToStationary: number | null;
}

export interface TrajectoryRow {
  seed: number;
  iteration: number;
  player: 1 | 2;
  action: number;
  probability: number;
}

export interface AggregateRow {
  iteration: number;
  exploitability: number;
  klToStationary: number | null;
}

export interface SweepRow {
  mu: number;
  iteration: number;
  exploitability: number;
}

export const METRICS_HEADER = "seed,iteration,exploitability,kl_to_stationary";
export const TRAJECTORY_HEADER = "seed,iteration,player,action,probability";
export const AGGREGATE_HEADER = "iteration,exploitability,kl_to_stationary";
export const SWEEP_HEADER = "mu,iteration,exploitability";

function rows(text: string, header: string, name: string): string[][] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${name}: ${parsed.errors[0].message}`);
  }
  const data = parsed.data;
  if (data.length === 0 || data[0].join(",") !== header) {
    throw new SchemaError(
      `${name}: expected header '${header}', got '${data[0]?.join(",") ?? ""}'`,
    );
  }
  const width = header.split(",").length;
  for (const [i, row] of data.entries()) {
    if (row.length !== width) {
      throw new SchemaError(`${name}: row ${i} has ${row.length} cells, expected ${width}`);
    }
  }
  return data.slice(1);
}

function real(cell: string, field: string): number {
  // python's repr spells infinities as 'inf'/'-inf'
  if (cell === "inf") return Infinity;
  if (cell === "-inf") return -Infinity;
  const v = Number(cell);
  if (cell === "" || Number.isNaN(v)) {
    throw new SchemaError(`bad number '${cell}' in ${field}`);
  }
  return v;
}

function integer(cell: string, field: string): number {
  const v = real(cell, field);
  if (!Number.isInteger(v)) throw new SchemaError(`expected integer '${cell}' in ${field}`);
  return v;
}

function optionalReal(cell: string, field: string): number | null {
  return cell === "" ? null : real(cell, field);
}

export function parseMetrics(text: string): MetricsRow[] {
  return rows(text, METRICS_HEADER, "metrics").map((r) => ({
    seed: integer(r[0], "seed"),
    iteration: integer(r[1], "iteration"),
    exploitability: real(r[2], "exploitability"),
    klToStationary: optionalReal(r[3], "kl_to_stationary"),
  }));
}

export function parseTrajectory(text: string): TrajectoryRow[] {
  return rows(text, TRAJECTORY_HEADER, "trajectory").map((r) => {
    const player = integer(r[2], "player");
    if (player !== 1 && player !== 2) {
      throw new SchemaError(`player must be 1 or 2, got ${player}`);
    }
    return {
      seed: integer(r[0], "seed"),
      iteration: integer(r[1], "iteration"),
      player,
      action: integer(r[3], "action"),
      probability: real(r[4], "probability"),
    };
  });
}

export function parseAggregate(text: string): AggregateRow[] {
  return rows(text, AGGREGATE_HEADER, "aggregate").map((r) => ({
    iteration: integer(r[0], "iteration"),
    exploitability: real(r[1], "exploitability"),
    klToStationary: optionalReal(r[2], "kl_to_stationary"),
  }));
}

export function parseSweep(text: string): SweepRow[] {
  return rows(text, SWEEP_HEADER, "sweep").map((r) => ({
    mu: real(r[0], "mu"),
    iteration: integer(r[1], "iteration"),
    exploitability: real(r[2], "exploitability"),
  }));
}

export interface TrajectoryPoint {
  iteration: number;
  strategy: number[];
}

/** Collect one player's strategy sequence from long-format trajectory rows. */
export function trajectoryStrategies(
  rowsIn: TrajectoryRow[],
  player: 1 | 2,
  seed?: number,
): TrajectoryPoint[] {
  const byIteration = new Map<number, Map<number, number>>();
  for (const r of rowsIn) {
    if (r.player !== player) continue;
    if (seed !== undefined && r.seed !== seed) continue;
    let m = byIteration.get(r.iteration);
    if (m === undefined) {
      m = new Map();
      byIteration.set(r.iteration, m);
    }
    if (m.has(r.action)) {
      throw new SchemaError(
        `duplicate action ${r.action} at iteration ${r.iteration} for player ${player}`,
      );
    }
    m.set(r.action, r.probability);
  }
  const iterations = [...byIteration.keys()].sort((a, b) => a - b);
  return iterations.map((iteration) => {
    const m = byIteration.get(iteration)!;
    const strategy: number[] = [];
    for (let a = 0; a < m.size; a++) {
      const p = m.get(a);
      if (p === undefined) {
        throw new SchemaError(`missing action ${a} at iteration ${iteration}`);
      }
      strategy.push(p);
    }
    const sum = strategy.reduce((s, v) => s + v, 0);
    if (Math.abs(sum - 1) > 1e-6) {
      throw new SchemaError(`strategy at iteration ${iteration} sums to ${sum}`);
    }
    return { iteration, strategy };
  });
}

export interface StationaryReport {
  p1: number[];
  p2: number[];
  xi: number;
  exploitability: number;
}

/** Parse the text report printed by `mftrl stationary`. */
export function parseStationaryReport(text: string): StationaryReport {
  const vector = (label: string): number[] => {
    const m = text.match(new RegExp(`${label}: \\[([^\\]]+)\\]`));
    if (!m) throw new SchemaError(`missing '${label}' line in stationary report`);
    return m[1]
      .trim()
      .split(/\s+/)
      .map((s) => real(s, label));
  };
  const scalar = (label: string): number => {
    const m = text.match(new RegExp(`${label}: ([-+0-9.eE]+)`));
    if (!m) throw new SchemaError(`missing '${label}' line in stationary report`);
    return real(m[1], label);
  };
  return {
    p1: vector("player 1"),
    p2: vector("player 2"),
    xi: scalar("xi"),
    exploitability: scalar("exploitability"),
  };
}

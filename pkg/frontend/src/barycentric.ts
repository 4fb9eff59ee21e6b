/**
 * Map 3-action mixed strategies onto an equilateral triangle so whole
 * trajectories can be drawn in the plane.
 */

export const SIMPLEX_VERTICES: ReadonlyArray<readonly [number, number]> = [
  [0, 0],
  [1, 0],
  [0.5, Math.sqrt(3) / 2],
];

/**
 * Planar coordinates of a probability vector over 3 actions. Action 0 sits
 * at the origin, action 1 at (1, 0), action 2 at the apex.
 */
export function toBarycentric(p: readonly number[]): [number, number] {
  if (p.length !== 3) {
    throw new Error(`need a 3-action strategy, got length ${p.length}`);
  }
  let sum = 0;
  for (const v of p) {
    if (!Number.isFinite(v) || v < 0) {
      throw new Error(`probabilities must be finite and nonnegative, got ${v}`);
    }
    sum += v;
  }
  if (Math.abs(sum - 1) > 1e-6) {
    throw new Error(`probabilities must sum to 1, got ${sum}`);
  }
  return [p[1] + 0.5 * p[2], (Math.sqrt(3) / 2) * p[2]];
}

/** Euclidean distance between two strategies in the planar embedding. */
export function barycentricDistance(p: readonly number[], q: readonly number[]): number {
  const [px, py] = toBarycentric(p);
  const [qx, qy] = toBarycentric(q);
  return Math.hypot(px - qx, py - qy);
}

/** Thin wrappers over d3-scale that carry their tick lists along. */

import { scaleLinear, scaleLog } from "d3-scale";

export interface Scale {
  map(v: number): number;
  ticks: number[];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickCount = 5,
): Scale {
  const s = scaleLinear().domain(domain).range(range);
  return { map: (v) => s(v), ticks: s.ticks(tickCount) };
}

/** Log scale with ticks at every decade inside the domain. */
export function logScale(domain: [number, number], range: [number, number]): Scale {
  if (domain[0] <= 0 || domain[1] <= 0) {
    throw new Error(`log scale needs a positive domain, got [${domain[0]}, ${domain[1]}]`);
  }
  const s = scaleLog().domain(domain).range(range);
  const ticks: number[] = [];
  const lo = Math.ceil(Math.log10(domain[0]) - 1e-9);
  const hi = Math.floor(Math.log10(domain[1]) + 1e-9);
  for (let e = lo; e <= hi; e++) ticks.push(Math.pow(10, e));
  return { map: (v) => s(v), ticks };
}

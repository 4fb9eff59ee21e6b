import { describe, expect, it } from "vitest";

import { linearScale, logScale } from "../src/scale.js";

describe("linearScale", () => {
  it("maps the domain endpoints onto the range", () => {
    const s = linearScale([0, 10], [100, 200]);
    expect(s.map(0)).toBe(100);
    expect(s.map(10)).toBe(200);
    expect(s.map(5)).toBe(150);
  });

  it("produces ascending in-domain ticks", () => {
    const s = linearScale([0, 100000], [0, 1]);
    expect(s.ticks.length).toBeGreaterThan(1);
    for (let i = 1; i < s.ticks.length; i++) {
      expect(s.ticks[i]).toBeGreaterThan(s.ticks[i - 1]);
    }
    expect(s.ticks[0]).toBeGreaterThanOrEqual(0);
    expect(s.ticks[s.ticks.length - 1]).toBeLessThanOrEqual(100000);
  });
});

describe("logScale", () => {
  it("maps decades evenly", () => {
    const s = logScale([1e-4, 1], [0, 4]);
    expect(s.map(1e-4)).toBeCloseTo(0, 12);
    expect(s.map(1e-2)).toBeCloseTo(2, 12);
    expect(s.map(1)).toBeCloseTo(4, 12);
  });

  it("ticks at every decade in the domain", () => {
    const s = logScale([1e-8, 1], [0, 1]);
    expect(s.ticks).toHaveLength(9);
    expect(s.ticks[0]).toBeCloseTo(1e-8, 20);
    expect(s.ticks[8]).toBe(1);
  });

  it("rejects nonpositive domains", () => {
    expect(() => logScale([0, 1], [0, 1])).toThrow(/positive domain/);
    expect(() => logScale([-1, 1], [0, 1])).toThrow(/positive domain/);
  });
});

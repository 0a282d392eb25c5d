// Pure data helpers behind the run-statistics panel.

import { describe, expect, it } from "vitest";

import { axisCeiling, latestWindow, nodeCurve, windowTotals } from "../src/chart";
import { StatsPoint } from "../src/store";

function point(step: number, nodes: number, grow = 0, slim = 0, neutral = 0): StatsPoint {
  return { step, nodes, matches: grow + slim + neutral, grow, slim, neutral };
}

describe("latestWindow", () => {
  it("returns the tail of the series", () => {
    const series = [point(1, 4), point(2, 6), point(3, 2)];
    expect(latestWindow(series, 2).map((p) => p.step)).toEqual([2, 3]);
    expect(latestWindow(series, 10)).toHaveLength(3);
    expect(latestWindow(series, 0)).toEqual([]);
    expect(latestWindow([], 5)).toEqual([]);
  });
});

describe("axisCeiling", () => {
  it("rounds up to a tidy bound", () => {
    expect(axisCeiling(9)).toBe(10);
    expect(axisCeiling(10)).toBe(10);
    expect(axisCeiling(28)).toBe(30);
    expect(axisCeiling(147)).toBe(150);
    expect(axisCeiling(1000)).toBe(1000);
  });
});

describe("windowTotals", () => {
  it("sums fired classes across the window", () => {
    const series = [point(1, 4, 2, 0, 1), point(2, 6, 1, 3, 0)];
    expect(windowTotals(series)).toEqual({ GROW: 3, SLIM: 3, NEUTRAL: 1 });
    expect(windowTotals([])).toEqual({ GROW: 0, SLIM: 0, NEUTRAL: 0 });
  });
});

describe("nodeCurve", () => {
  const geometry = { width: 300, height: 200, padding: 20 };

  it("maps points to strictly increasing x inside the padding", () => {
    const series = [point(1, 5), point(2, 8), point(3, 3)];
    const curve = nodeCurve(series, geometry);
    expect(curve).toHaveLength(3);
    for (let i = 1; i < curve.length; i++) {
      expect(curve[i].x).toBeGreaterThan(curve[i - 1].x);
    }
    for (const pt of curve) {
      expect(pt.x).toBeGreaterThanOrEqual(geometry.padding);
      expect(pt.x).toBeLessThanOrEqual(geometry.width - geometry.padding);
      expect(pt.y).toBeGreaterThanOrEqual(geometry.padding);
      expect(pt.y).toBeLessThanOrEqual(geometry.height - geometry.padding);
    }
  });

  it("puts larger node counts higher on the canvas", () => {
    const curve = nodeCurve([point(1, 2), point(2, 10)], geometry);
    expect(curve[1].y).toBeLessThan(curve[0].y);
  });

  it("handles an empty series and a single point", () => {
    expect(nodeCurve([], geometry)).toEqual([]);
    const single = nodeCurve([point(1, 5)], geometry);
    expect(single).toHaveLength(1);
    expect(Number.isFinite(single[0].x)).toBe(true);
  });
});

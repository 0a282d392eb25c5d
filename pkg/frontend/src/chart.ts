// Run-statistics panel: node counts and fired-rewrite classes over time.
//
// The data side (windowing, axis ticks, class totals) is pure and tested;
// drawStats paints onto any 2d canvas context and stays a thin veneer.

import { ClassTotals, StatsPoint } from "./store.js";

export const CLASS_COLORS: Record<keyof ClassTotals, string> = {
  GROW: "#2e9e55",
  SLIM: "#d64550",
  NEUTRAL: "#8a8a8a",
};

/** Last `n` points of the series (the chart's visible window). */
export function latestWindow(series: StatsPoint[], n: number): StatsPoint[] {
  if (n <= 0) {
    return [];
  }
  return series.slice(Math.max(0, series.length - n));
}

/** Rounded upper bound for a y axis: 28 -> 30, 147 -> 150, 9 -> 10. */
export function axisCeiling(maxValue: number): number {
  if (maxValue <= 10) {
    return 10;
  }
  const magnitude = Math.pow(10, Math.floor(Math.log10(maxValue)));
  const unit = magnitude / 2;
  return Math.ceil(maxValue / unit) * unit;
}

/** Sum the fired-rewrite classes across a window of points. */
export function windowTotals(points: StatsPoint[]): ClassTotals {
  const totals: ClassTotals = { GROW: 0, SLIM: 0, NEUTRAL: 0 };
  for (const p of points) {
    totals.GROW += p.grow;
    totals.SLIM += p.slim;
    totals.NEUTRAL += p.neutral;
  }
  return totals;
}

export interface ChartGeometry {
  width: number;
  height: number;
  padding: number;
}

/** Map a window of points to polyline coordinates for the node-count curve. */
export function nodeCurve(
  points: StatsPoint[],
  geometry: ChartGeometry,
): Array<{ x: number; y: number }> {
  if (points.length === 0) {
    return [];
  }
  const { width, height, padding } = geometry;
  const ceiling = axisCeiling(Math.max(...points.map((p) => p.nodes)));
  const innerW = width - 2 * padding;
  const innerH = height - 2 * padding;
  const span = Math.max(1, points.length - 1);
  return points.map((p, i) => ({
    x: padding + (innerW * i) / span,
    y: padding + innerH * (1 - p.nodes / ceiling),
  }));
}

export function drawStats(
  ctx: CanvasRenderingContext2D,
  series: StatsPoint[],
  totals: ClassTotals,
  geometry: ChartGeometry,
  windowSize = 200,
): void {
  const { width, height, padding } = geometry;
  ctx.clearRect(0, 0, width, height);
  const points = latestWindow(series, windowSize);
  if (points.length === 0) {
    ctx.fillStyle = "#666";
    ctx.fillText("no steps yet", padding, height / 2);
    return;
  }

  const curve = nodeCurve(points, geometry);
  ctx.strokeStyle = "#3567b5";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  curve.forEach((pt, i) => (i === 0 ? ctx.moveTo(pt.x, pt.y) : ctx.lineTo(pt.x, pt.y)));
  ctx.stroke();

  const last = points[points.length - 1];
  ctx.fillStyle = "#222";
  ctx.fillText(`step ${last.step}  nodes ${last.nodes}`, padding, padding - 4);

  let x = padding;
  for (const key of ["GROW", "SLIM", "NEUTRAL"] as const) {
    ctx.fillStyle = CLASS_COLORS[key];
    ctx.fillText(`${key} ${totals[key]}`, x, height - 4);
    x += ctx.measureText(`${key} ${totals[key]}`).width + 16;
  }
}

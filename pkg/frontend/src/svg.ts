/**
 * Minimal SVG assembly: build the document as a string so the renderers
 * stay dependency-free and the output diffs cleanly.
 */

import { linearScale, logScale, Scale } from "./scale.js";

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  body = "",
): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${esc(String(v))}"`)
    .join("");
  return body === "" ? `<${tag}${a}/>` : `<${tag}${a}>${body}</${tag}>`;
}

export function svgDocument(width: number, height: number, body: string[]): string {
  const open = `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`;
  return [open, ...body, "</svg>", ""].join("\n");
}

export function polylinePoints(pts: Array<[number, number]>): string {
  return pts.map(([x, y]) => `${round3(x)},${round3(y)}`).join(" ");
}

function round3(v: number): number {
  return Math.round(v * 1000) / 1000;
}

function formatTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    return v.toExponential(0).replace("e+", "e");
  }
  return String(Math.round(v * 1e6) / 1e6);
}

export interface Series {
  label: string;
  points: Array<[number, number]>;
}

export interface LineChartOptions {
  width?: number;
  height?: number;
  logY?: boolean;
  xLabel?: string;
  yLabel?: string;
  title?: string;
}

// values below this are clamped before log scaling; an exact zero from a
// converged run would otherwise leave the chart
export const LOG_FLOOR = 1e-16;

/**
 * Render line series with axes and a legend. Each series becomes one
 * `<polyline class="series">`, which also gives tests a countable hook.
 */
export function renderLineChart(series: Series[], opts: LineChartOptions = {}): string {
  if (series.length === 0) throw new Error("need at least one series");
  const width = opts.width ?? 720;
  const height = opts.height ?? 440;
  const margin = { left: 60, right: 20, top: 20, bottom: 40 };
  const innerW = width - margin.left - margin.right;
  const innerH = height - margin.top - margin.bottom;
  const logY = opts.logY ?? false;

  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of series) {
    if (s.points.length === 0) throw new Error(`series '${s.label}' is empty`);
    for (const [x, yRaw] of s.points) {
      const y = logY ? Math.max(yRaw, LOG_FLOOR) : yRaw;
      if (!Number.isFinite(x) || !Number.isFinite(y)) {
        throw new Error(`series '${s.label}' has a non-finite point`);
      }
      xMin = Math.min(xMin, x);
      xMax = Math.max(xMax, x);
      yMin = Math.min(yMin, y);
      yMax = Math.max(yMax, y);
    }
  }
  if (xMax === xMin) xMax = xMin + 1;
  if (yMax === yMin) yMax = logY ? yMin * 10 : yMin + 1;

  const xs = linearScale([xMin, xMax], [margin.left, margin.left + innerW]);
  const ys: Scale = logY
    ? logScale([yMin, yMax], [margin.top + innerH, margin.top])
    : linearScale([yMin, yMax], [margin.top + innerH, margin.top]);

  const body: string[] = [];
  body.push(el("rect", { x: 0, y: 0, width, height, fill: "white" }));

  // axes
  body.push(
    el("line", {
      x1: margin.left, y1: margin.top + innerH,
      x2: margin.left + innerW, y2: margin.top + innerH,
      stroke: "black",
    }),
    el("line", {
      x1: margin.left, y1: margin.top,
      x2: margin.left, y2: margin.top + innerH,
      stroke: "black",
    }),
  );
  for (const t of xs.ticks) {
    const x = round3(xs.map(t));
    body.push(
      el("line", { x1: x, y1: margin.top + innerH, x2: x, y2: margin.top + innerH + 5, stroke: "black" }),
      el(
        "text",
        { x, y: margin.top + innerH + 18, "text-anchor": "middle", "font-size": 11 },
        esc(formatTick(t)),
      ),
    );
  }
  for (const t of ys.ticks) {
    const y = round3(ys.map(t));
    body.push(
      el("line", { x1: margin.left - 5, y1: y, x2: margin.left, y2: y, stroke: "black" }),
      el(
        "text",
        { x: margin.left - 8, y: y + 4, "text-anchor": "end", "font-size": 11 },
        esc(formatTick(t)),
      ),
    );
  }
  if (opts.xLabel) {
    body.push(
      el(
        "text",
        { x: margin.left + innerW / 2, y: height - 6, "text-anchor": "middle", "font-size": 12 },
        esc(opts.xLabel),
      ),
    );
  }
  if (opts.yLabel) {
    body.push(
      el(
        "text",
        {
          x: 14, y: margin.top + innerH / 2, "text-anchor": "middle", "font-size": 12,
          transform: `rotate(-90 14 ${margin.top + innerH / 2})`,
        },
        esc(opts.yLabel),
      ),
    );
  }
  if (opts.title) {
    body.push(
      el(
        "text",
        { x: margin.left + innerW / 2, y: 14, "text-anchor": "middle", "font-size": 13 },
        esc(opts.title),
      ),
    );
  }

  series.forEach((s, i) => {
    const pts = s.points.map(
      ([x, y]) => [xs.map(x), ys.map(logY ? Math.max(y, LOG_FLOOR) : y)] as [number, number],
    );
    body.push(
      el("polyline", {
        class: "series",
        points: polylinePoints(pts),
        fill: "none",
        stroke: PALETTE[i % PALETTE.length],
        "stroke-width": 1.5,
      }),
    );
  });

  // legend, top right of the plot area
  series.forEach((s, i) => {
    const y = margin.top + 14 + 16 * i;
    const x = margin.left + innerW - 130;
    body.push(
      el("line", { x1: x, y1: y - 4, x2: x + 22, y2: y - 4, stroke: PALETTE[i % PALETTE.length], "stroke-width": 2 }),
      el("text", { x: x + 28, y, "font-size": 11 }, esc(s.label)),
    );
  });

  return svgDocument(width, height, body);
}

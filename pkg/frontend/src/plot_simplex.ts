/**
 * Strategy orbits for 3-action games, drawn inside the probability triangle.
 * Converging dynamics spiral in, cycling ones trace closed loops.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { toBarycentric, SIMPLEX_VERTICES } from "./barycentric.js";
import { parseTrajectory, trajectoryStrategies, TrajectoryPoint } from "./csv.js";
import { el, esc, polylinePoints, svgDocument, PALETTE } from "./svg.js";

export interface TrajectoryInput {
  path: string;
  label: string;
  player?: 1 | 2;
  seed?: number;
}

export interface SimplexOptions {
  width?: number;
  /** Drawn as a cross, e.g. the interior rest point or an equilibrium. */
  marker?: readonly number[];
  markerLabel?: string;
  title?: string;
}

export function renderSimplexChart(
  inputs: TrajectoryInput[],
  opts: SimplexOptions = {},
): string {
  const width = opts.width ?? 560;
  const margin = 40;
  const side = width - 2 * margin;
  const height = margin * 2 + (Math.sqrt(3) / 2) * side + 20;
  // flip y so the triangle apex points up
  const px = (x: number) => margin + x * side;
  const py = (y: number) => height - margin - y * side;
  const place = (p: readonly number[]): [number, number] => {
    const [x, y] = toBarycentric(p);
    return [px(x), py(y)];
  };

  const body: string[] = [];
  body.push(el("rect", { x: 0, y: 0, width, height, fill: "white" }));

  const corners = SIMPLEX_VERTICES.map(([x, y]) => [px(x), py(y)] as [number, number]);
  body.push(
    el("polygon", {
      class: "simplex-boundary",
      points: polylinePoints(corners),
      fill: "none",
      stroke: "black",
    }),
  );
  const vertexLabels = ["action 0", "action 1", "action 2"];
  const anchors = ["end", "start", "middle"];
  const offsets: Array<[number, number]> = [[-4, 14], [4, 14], [0, -8]];
  corners.forEach(([cx, cy], i) => {
    body.push(
      el(
        "text",
        { x: cx + offsets[i][0], y: cy + offsets[i][1], "text-anchor": anchors[i], "font-size": 11 },
        esc(vertexLabels[i]),
      ),
    );
  });

  inputs.forEach((inp, i) => {
    const rows = parseTrajectory(readFileSync(inp.path, "utf8"));
    const pts: TrajectoryPoint[] = trajectoryStrategies(rows, inp.player ?? 1, inp.seed);
    if (pts.length === 0) throw new Error(`no trajectory points in '${inp.label}'`);
    const color = PALETTE[i % PALETTE.length];
    body.push(
      el("polyline", {
        class: "series",
        points: polylinePoints(pts.map((p) => place(p.strategy))),
        fill: "none",
        stroke: color,
        "stroke-width": 1,
      }),
    );
    // blue start, red end, independent of the orbit color
    const [sx, sy] = place(pts[0].strategy);
    const [ex, ey] = place(pts[pts.length - 1].strategy);
    body.push(
      el("circle", { class: "start", cx: sx, cy: sy, r: 3.5, fill: "blue" }),
      el("circle", { class: "end", cx: ex, cy: ey, r: 3.5, fill: "red" }),
    );
  });

  if (opts.marker) {
    const [mx, my] = place(opts.marker);
    body.push(
      el("path", {
        class: "marker",
        d: `M ${mx - 5} ${my} L ${mx + 5} ${my} M ${mx} ${my - 5} L ${mx} ${my + 5}`,
        stroke: "black",
        "stroke-width": 1.5,
      }),
    );
    if (opts.markerLabel) {
      body.push(
        el("text", { x: mx + 8, y: my - 6, "font-size": 11 }, esc(opts.markerLabel)),
      );
    }
  }

  inputs.forEach((inp, i) => {
    const y = 16 + 16 * i;
    body.push(
      el("line", { x1: width - 130, y1: y - 4, x2: width - 108, y2: y - 4, stroke: PALETTE[i % PALETTE.length], "stroke-width": 2 }),
      el("text", { x: width - 102, y, "font-size": 11 }, esc(inp.label)),
    );
  });
  if (opts.title) {
    body.push(
      el("text", { x: width / 2, y: 16, "text-anchor": "middle", "font-size": 13 }, esc(opts.title)),
    );
  }

  return svgDocument(width, Math.ceil(height), body);
}

export function plotSimplex(
  inputs: TrajectoryInput[],
  outPath: string,
  opts: SimplexOptions = {},
): void {
  writeFileSync(outPath, renderSimplexChart(inputs, opts));
}

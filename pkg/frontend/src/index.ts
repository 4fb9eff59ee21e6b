export {
  SchemaError,
  parseMetrics,
  parseTrajectory,
  parseAggregate,
  parseSweep,
  trajectoryStrategies,
  parseStationaryReport,
} from "./csv.js";
export type {
  MetricsRow,
  TrajectoryRow,
  AggregateRow,
  SweepRow,
  TrajectoryPoint,
  StationaryReport,
} from "./csv.js";
export { SIMPLEX_VERTICES, toBarycentric, barycentricDistance } from "./barycentric.js";
export { linearScale, logScale } from "./scale.js";
export type { Scale } from "./scale.js";
export { renderLineChart, svgDocument, PALETTE, LOG_FLOOR } from "./svg.js";
export type { Series, LineChartOptions } from "./svg.js";
export {
  plotExploitability,
  renderExploitabilityChart,
  labelFromPath,
} from "./plot_exploitability.js";
export type { MetricsInput, ExploitabilityOptions } from "./plot_exploitability.js";
export { plotSweep, renderSweepChart } from "./plot_sweep.js";
export type { SweepOptions } from "./plot_sweep.js";
export { plotSimplex, renderSimplexChart } from "./plot_simplex.js";
export type { TrajectoryInput, SimplexOptions } from "./plot_simplex.js";

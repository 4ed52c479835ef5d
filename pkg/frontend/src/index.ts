export { parseCsvText, readResultFile, median, SCHEMA_LINE, HEADER } from "./csv.js";
export type { Row, ResultFile } from "./csv.js";
export { renderChart, PALETTE } from "./svg.js";
export type { Series, ChartOptions } from "./svg.js";
export {
  renderFigure, validateSpec, buildSerVsIterSeries, buildWaveSeries, SER_FLOOR,
} from "./render.js";
export type { FigureSpec, FigureKind } from "./render.js";
export { specFromArgs } from "./cli.js";

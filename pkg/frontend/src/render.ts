/**
 * The two figure kinds built from harness result files.
 *
 * ser_vs_iter: one line per (decoder kind, ensemble) — median over trials of
 * the overall SER (block=0 rows) per iteration, log-y, zeros floored at 1e-5.
 *
 * wave: per-block SER vs block index, one line per selected iteration;
 * line style keyed by ensemble (solid DCT, dotted Gaussian).
 */

import { existsSync } from "node:fs";
import { median, readResultFile, ResultFile, Row } from "./csv.js";
import { PALETTE, renderChart, Series } from "./svg.js";

export const SER_FLOOR = 1e-5;

export type FigureKind = "ser_vs_iter" | "wave";

export interface FigureSpec {
  kind: FigureKind;
  csvPaths: string[];
  iters: number[]; // iteration subset; required non-empty for "wave"
  logY: boolean;
  outPath: string;
}

export function validateSpec(spec: FigureSpec): void {
  if (spec.csvPaths.length === 0) throw new Error("no input CSV files given");
  for (const p of spec.csvPaths) {
    if (!existsSync(p)) throw new Error(`no such file: ${p}`);
  }
  if (spec.kind === "wave" && spec.iters.length === 0) {
    throw new Error("wave figures need a non-empty --iters list");
  }
}

function dotted(ensemble: string | null): boolean {
  return ensemble === "gaussian";
}

function label(kind: string, ensemble: string | null): string {
  return ensemble ? `${kind} (${ensemble})` : kind;
}

function groupBy<T, K>(items: T[], key: (t: T) => K): Map<K, T[]> {
  const out = new Map<K, T[]>();
  for (const it of items) {
    const k = key(it);
    const arr = out.get(k);
    if (arr) arr.push(it);
    else out.set(k, [it]);
  }
  return out;
}

function medianCurve(rows: Row[], x: (r: Row) => number,
                     y: (r: Row) => number | null): Array<[number, number]> {
  const byX = groupBy(rows.filter((r) => y(r) !== null), x);
  const xs = [...byX.keys()].sort((a, b) => a - b);
  return xs.map((v) => [v, median(byX.get(v)!.map((r) => y(r)!))]);
}

export function buildSerVsIterSeries(files: ResultFile[]): Series[] {
  const series: Series[] = [];
  let colorIdx = 0;
  for (const f of files) {
    const decoderRows = f.rows.filter((r) => r.block === 0);
    if (decoderRows.length === 0) {
      throw new Error(`${f.path}: no overall (block=0) rows; not a simulate CSV?`);
    }
    for (const [kind, rows] of groupBy(decoderRows, (r) => r.kind)) {
      series.push({
        label: label(kind, f.ensemble),
        points: medianCurve(rows, (r) => r.iter, (r) => r.overallSer),
        color: PALETTE[colorIdx++ % PALETTE.length],
        dotted: dotted(f.ensemble),
      });
    }
  }
  return series;
}

export function buildWaveSeries(files: ResultFile[], iters: number[]): Series[] {
  const series: Series[] = [];
  let colorIdx = 0;
  for (const f of files) {
    const blockRows = f.rows.filter((r) => r.block > 0 && r.ser !== null);
    if (blockRows.length === 0) {
      throw new Error(`${f.path}: no per-block rows`);
    }
    const maxIter = Math.max(...blockRows.map((r) => r.iter));
    for (const k of iters) {
      // curves persist after early stop: use the last recorded iteration
      const kEff = Math.min(k, maxIter);
      const rows = blockRows.filter((r) => r.iter === kEff);
      if (rows.length === 0) throw new Error(`${f.path}: no rows at iteration ${kEff}`);
      series.push({
        label: `k=${k}` + (f.ensemble ? ` (${f.ensemble})` : ""),
        points: medianCurve(rows, (r) => r.block, (r) => r.ser),
        color: PALETTE[colorIdx++ % PALETTE.length],
        dotted: dotted(f.ensemble),
      });
    }
  }
  return series;
}

export function renderFigure(spec: FigureSpec): string {
  validateSpec(spec);
  const files = spec.csvPaths.map(readResultFile);
  if (spec.kind === "ser_vs_iter") {
    return renderChart(buildSerVsIterSeries(files), {
      title: "Overall section error rate vs iteration",
      xLabel: "iteration",
      yLabel: "overall SER",
      logY: spec.logY,
      yFloor: SER_FLOOR,
    });
  }
  return renderChart(buildWaveSeries(files, spec.iters), {
    title: "Per-block section error rate",
    xLabel: "block index",
    yLabel: "SER",
    logY: spec.logY,
    yFloor: SER_FLOOR,
  });
}

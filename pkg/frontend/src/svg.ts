/**
 * Minimal deterministic SVG chart builder: log/linear axes, polyline series
 * with solid/dotted styles, legend, annotations. No timestamps, no
 * randomness — identical inputs produce byte-identical output.
 */

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
  dotted: boolean;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY: boolean;
  width?: number;
  height?: number;
  /** y values at or below this are drawn on the floor line (log scale). */
  yFloor?: number;
  floorNote?: string;
}

const MARGIN = { top: 40, right: 24, bottom: 48, left: 64 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#17becf",
];

function fmt(x: number): string {
  // fixed, locale-independent coordinate formatting
  return x.toFixed(2).replace(/\.00$/, "");
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    const e = Math.floor(Math.log10(Math.abs(v)));
    const m = Number((v / 10 ** e).toPrecision(12));
    return m === 1 ? `1e${e}` : `${m.toPrecision(2)}e${e}`;
  }
  return String(Number(v.toPrecision(4)));
}

function linTicks(lo: number, hi: number, n = 6): number[] {
  if (lo === hi) return [lo];
  const span = hi - lo;
  const step = 10 ** Math.floor(Math.log10(span / n));
  const mult = [1, 2, 5, 10].find((m) => span / (step * m) <= n) ?? 10;
  const s = step * mult;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); 10 ** e <= hi * (1 + 1e-9); e++) {
    ticks.push(10 ** e);
  }
  return ticks;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const floor = opts.yFloor ?? 1e-5;

  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ysRaw = series.flatMap((s) => s.points.map((p) => p[1]));
  if (xs.length === 0) throw new Error("nothing to plot: all series empty");
  const ys = opts.logY ? ysRaw.map((y) => Math.max(y, floor)) : ysRaw;

  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (opts.logY) {
    yLo = Math.min(yLo, floor);
    if (yHi <= yLo) yHi = yLo * 10;
  } else if (yHi === yLo) {
    yHi = yLo + 1;
  }

  const sx = (x: number) =>
    MARGIN.left + (xHi === xLo ? 0.5 : (x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) => {
    const v = opts.logY ? Math.log10(Math.max(y, floor)) : y;
    const lo = opts.logY ? Math.log10(yLo) : yLo;
    const hi = opts.logY ? Math.log10(yHi) : yHi;
    return MARGIN.top + (1 - (v - lo) / (hi - lo)) * plotH;
  };

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`);
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  out.push(`<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`);

  // frame
  out.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333" stroke-width="1"/>`);

  // ticks and grid
  const xt = linTicks(xLo, xHi);
  for (const v of xt) {
    const x = fmt(sx(v));
    out.push(`<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" stroke="#ddd" stroke-width="0.5"/>`);
    out.push(`<text x="${x}" y="${MARGIN.top + plotH + 16}" text-anchor="middle" font-size="11">${fmtTick(v)}</text>`);
  }
  const yt = opts.logY ? logTicks(yLo, yHi) : linTicks(yLo, yHi);
  for (const v of yt) {
    const y = fmt(sy(v));
    out.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#ddd" stroke-width="0.5"/>`);
    out.push(`<text x="${MARGIN.left - 6}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11">${fmtTick(v)}</text>`);
  }

  // axis labels
  out.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 12}" text-anchor="middle" font-size="12">${esc(opts.xLabel)}</text>`);
  out.push(`<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(opts.yLabel)}</text>`);

  // floor annotation (log scale only): zero SER is clamped to the floor
  const hasFloored = opts.logY && ysRaw.some((y) => y <= floor);
  if (hasFloored) {
    const y = fmt(sy(floor));
    out.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#999" stroke-width="1" stroke-dasharray="2,3"/>`);
    const note = opts.floorNote ?? `0 (floored at ${fmtTick(floor)})`;
    out.push(`<text x="${MARGIN.left + plotW - 4}" y="${fmt(sy(floor) - 5)}" text-anchor="end" font-size="10" fill="#666">${esc(note)}</text>`);
  }

  // series
  for (const s of series) {
    const pts = s.points.map(([x, y]) => `${fmt(sx(x))},${fmt(sy(y))}`).join(" ");
    const dash = s.dotted ? ` stroke-dasharray="2,4"` : "";
    out.push(`<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.8"${dash}/>`);
  }

  // legend
  let ly = MARGIN.top + 10;
  for (const s of series) {
    const lx = MARGIN.left + plotW - 170;
    const dash = s.dotted ? ` stroke-dasharray="2,4"` : "";
    out.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" stroke="${s.color}" stroke-width="1.8"${dash}/>`);
    out.push(`<text x="${lx + 32}" y="${ly + 4}" font-size="11">${esc(s.label)}</text>`);
    ly += 16;
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}

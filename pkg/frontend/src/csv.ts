/**
 * Parser for the harness result CSVs (schema=1).
 *
 * Layout: a `# schema=1` comment line, the fixed header
 * `kind,trial,seed,iter,block,ser,mse,overall_ser,clips,ms`, then data rows.
 * block=0 rows carry the overall (whole-message) values for an iteration;
 * blocks >= 1 are per column block.
 */

import { readFileSync, existsSync } from "node:fs";
import { dirname, join } from "node:path";
import Papa from "papaparse";

export const SCHEMA_LINE = "# schema=1";
export const HEADER = "kind,trial,seed,iter,block,ser,mse,overall_ser,clips,ms";

export interface Row {
  kind: string;
  trial: number;
  seed: number;
  iter: number;
  block: number;
  ser: number | null; // null when the column is blank (SE traces)
  mse: number | null;
  overallSer: number | null;
}

export interface ResultFile {
  path: string;
  ensemble: string | null; // from the sibling summary.json when present
  rows: Row[];
}

function numOrNull(v: string): number | null {
  if (v === "" || v === undefined) return null;
  const x = Number(v);
  if (!Number.isFinite(x)) throw new Error(`not a finite number: ${v}`);
  return x;
}

export function parseCsvText(text: string, path = "<string>"): Row[] {
  const lines = text.split(/\r?\n/);
  if (lines[0]?.trim() !== SCHEMA_LINE) {
    throw new Error(`${path}: missing or unsupported schema line (want "${SCHEMA_LINE}")`);
  }
  const body = lines.slice(1).join("\n");
  const parsed = Papa.parse<Record<string, string>>(body, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${path}: CSV parse error at row ${e.row}: ${e.message}`);
  }
  const fields = (parsed.meta.fields ?? []).join(",");
  if (fields !== HEADER) {
    throw new Error(`${path}: header mismatch: got "${fields}"`);
  }
  return parsed.data.map((r) => ({
    kind: r.kind,
    trial: Number(r.trial),
    seed: Number(r.seed),
    iter: Number(r.iter),
    block: Number(r.block),
    ser: numOrNull(r.ser),
    mse: numOrNull(r.mse),
    overallSer: numOrNull(r.overall_ser),
  }));
}

/** Read a results CSV plus the ensemble label from its sibling summary.json. */
export function readResultFile(path: string): ResultFile {
  if (!existsSync(path)) throw new Error(`no such file: ${path}`);
  const rows = parseCsvText(readFileSync(path, "utf8"), path);
  let ensemble: string | null = null;
  const summaryPath = join(dirname(path), "summary.json");
  if (existsSync(summaryPath)) {
    const doc = JSON.parse(readFileSync(summaryPath, "utf8"));
    if (typeof doc.ensemble === "string") ensemble = doc.ensemble;
  }
  return { path, ensemble, rows };
}

export function median(values: number[]): number {
  if (values.length === 0) throw new Error("median of empty list");
  const s = [...values].sort((a, b) => a - b);
  const mid = Math.floor(s.length / 2);
  return s.length % 2 === 1 ? s[mid] : 0.5 * (s[mid - 1] + s[mid]);
}

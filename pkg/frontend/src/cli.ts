#!/usr/bin/env node
/**
 * plotviz — render figures from scvamp harness CSVs.
 *
 *   plotviz --kind ser_vs_iter --csv out/results.csv --out fig3.svg
 *   plotviz --kind wave --csv out/results.csv --iters 1,10,20,40 --out fig4.svg
 *
 * Exit codes: 0 success, 2 bad arguments/inputs.
 */

import { parseArgs } from "node:util";
import { writeFileSync } from "node:fs";
import { FigureKind, FigureSpec, renderFigure } from "./render.js";

const USAGE =
  "usage: plotviz --kind {ser_vs_iter|wave} --csv FILE [--csv FILE ...] " +
  "--out FILE.svg [--iters 1,10,20] [--linear-y]";

export function specFromArgs(argv: string[]): FigureSpec {
  const { values } = parseArgs({
    args: argv,
    options: {
      kind: { type: "string" },
      csv: { type: "string", multiple: true },
      out: { type: "string" },
      iters: { type: "string" },
      "linear-y": { type: "boolean", default: false },
    },
  });
  if (values.kind !== "ser_vs_iter" && values.kind !== "wave") {
    throw new Error(`--kind must be ser_vs_iter or wave\n${USAGE}`);
  }
  if (!values.csv || values.csv.length === 0) {
    throw new Error(`at least one --csv is required\n${USAGE}`);
  }
  if (!values.out) throw new Error(`--out is required\n${USAGE}`);
  const iters = (values.iters ?? "")
    .split(",")
    .filter((s) => s.trim() !== "")
    .map((s) => {
      const k = Number(s);
      if (!Number.isInteger(k) || k < 0) throw new Error(`bad iteration: ${s}`);
      return k;
    });
  return {
    kind: values.kind as FigureKind,
    csvPaths: values.csv,
    iters,
    logY: !values["linear-y"],
    outPath: values.out,
  };
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = specFromArgs(argv);
    const svg = renderFigure(spec);
    writeFileSync(spec.outPath, svg);
  } catch (err) {
    console.error(`plotviz: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
  console.log(`wrote ${spec.outPath}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}

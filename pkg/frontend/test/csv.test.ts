import { describe, expect, it } from "vitest";
import { median, parseCsvText, readResultFile } from "../src/csv.js";

const GOOD = `# schema=1
kind,trial,seed,iter,block,ser,mse,overall_ser,clips,ms
scvamp,0,7,1,0,0.25,0.5,0.25,0,12.3
scvamp,0,7,1,1,0.5,1,0.25,0,12.3
scvamp,0,7,1,2,0,0,0.25,0,12.3
`;

describe("parseCsvText", () => {
  it("parses rows with types", () => {
    const rows = parseCsvText(GOOD);
    expect(rows).toHaveLength(3);
    expect(rows[0]).toMatchObject({
      kind: "scvamp", trial: 0, seed: 7, iter: 1, block: 0,
      ser: 0.25, mse: 0.5, overallSer: 0.25,
    });
    expect(rows[2].ser).toBe(0);
  });

  it("accepts blank numeric fields (SE traces)", () => {
    const text = GOOD.split("\n").slice(0, 2).join("\n") +
      "\nse,0,7,1,1,,0.9,,0,0\n";
    const rows = parseCsvText(text);
    expect(rows[0].ser).toBeNull();
    expect(rows[0].mse).toBe(0.9);
  });

  it("rejects a missing schema line", () => {
    expect(() => parseCsvText(GOOD.split("\n").slice(1).join("\n")))
      .toThrow(/schema/);
  });

  it("rejects a wrong schema version", () => {
    expect(() => parseCsvText("# schema=2\n" + GOOD.split("\n").slice(1).join("\n")))
      .toThrow(/schema/);
  });

  it("rejects a header mismatch", () => {
    const bad = GOOD.replace("overall_ser", "overall");
    expect(() => parseCsvText(bad)).toThrow(/header mismatch/);
  });

  it("rejects non-numeric values", () => {
    const bad = GOOD.replace("0.25,0.5", "oops,0.5");
    expect(() => parseCsvText(bad)).toThrow(/not a finite number/);
  });
});

describe("readResultFile", () => {
  it("reads the bundled CSV and its ensemble label", () => {
    const f = readResultFile("data/fig3_dct/results.csv");
    expect(f.ensemble).toBe("dct");
    expect(f.rows.length).toBeGreaterThan(100);
    const kinds = new Set(f.rows.map((r) => r.kind));
    expect(kinds).toEqual(new Set(["scvamp", "vamp"]));
  });

  it("errors on a missing file", () => {
    expect(() => readResultFile("data/nope.csv")).toThrow(/no such file/);
  });
});

describe("median", () => {
  it("handles odd and even lengths", () => {
    expect(median([3, 1, 2])).toBe(2);
    expect(median([4, 1, 2, 3])).toBe(2.5);
  });
  it("rejects empty input", () => {
    expect(() => median([])).toThrow();
  });
});

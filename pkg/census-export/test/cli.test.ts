import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { run } from "../src/cli.js";
import { loadEntry, loadLspaceValues } from "../src/source.js";
import { ExportError } from "../src/formats.js";

const FIXTURES = path.join(__dirname, "..", "fixtures");

let tmp: string;
beforeEach(() => {
  tmp = fs.mkdtempSync(path.join(os.tmpdir(), "census-export-"));
});
afterEach(() => {
  fs.rmSync(tmp, { recursive: true, force: true });
});

describe("source loading", () => {
  it("loads and validates a dump", () => {
    const entry = loadEntry(FIXTURES, 11);
    expect(entry.dodecahedra).toBe(4);
    expect(entry.gluings).toHaveLength(24);
  });

  it("fails cleanly when the dump is missing", () => {
    expect(() => loadEntry(FIXTURES, 7)).toThrow(ExportError);
    expect(() => loadEntry(FIXTURES, 7)).toThrow(/not available/);
  });

  it("rejects out-of-range indices", () => {
    expect(() => loadEntry(FIXTURES, 99)).toThrow(/0\.\.28/);
  });

  it("merges bundled census values with source overrides", () => {
    const values = loadLspaceValues(undefined);
    expect(values["s345(-1,3)"]).toBe(1);
    expect(values["v2553(-4,1)"]).toBe(-1);
    const extra = path.join(tmp, "lspace_values.json");
    fs.writeFileSync(extra, JSON.stringify({ extra_name: 1 }));
    const merged = loadLspaceValues(tmp);
    expect(merged["extra_name"]).toBe(1);
    fs.writeFileSync(extra, JSON.stringify({ "s345(-1,3)": -1 }));
    expect(() => loadLspaceValues(tmp)).toThrow(/conflict/);
  });
});

describe("cli", () => {
  it("exports a tessellation file with 4 chambers and 24 pairings", () => {
    const out = path.join(tmp, "index11.tess");
    const code = run([
      "tessellation",
      "--index",
      "11",
      "--source",
      FIXTURES,
      "--out",
      out,
    ]);
    expect(code).toBe(0);
    const text = fs.readFileSync(out, "utf-8");
    const lines = text.trimEnd().split("\n");
    expect(lines[0]).toBe("dim 3; polytope dodecahedron; chambers 4");
    expect(lines.filter((l) => l.startsWith("glue "))).toHaveLength(24);
  });

  it("exports the L-space table with the transcript values", () => {
    const out = path.join(tmp, "census.tsv");
    const code = run(["lspace-table", "--out", out]);
    expect(code).toBe(0);
    const text = fs.readFileSync(out, "utf-8");
    const expectTrue = [
      "s345(-1,3)",
      "v3245(1,2)",
      "t12195(-1,-3)",
      "v2876(-1,2)",
      "o9_36980(1,2)",
      "o9_34893(-3,2)",
    ];
    for (const name of expectTrue) {
      expect(text).toContain(`${name} 1`);
    }
    expect(text).toContain("v2553(-4,1) 0");
  });

  it("returns 1 when no source directory is configured", () => {
    delete process.env.CENSUS_SOURCE;
    const code = run(["tessellation", "--index", "11"]);
    expect(code).toBe(1);
  });

  it("returns 1 for a missing index even with a source", () => {
    const code = run(["tessellation", "--index", "5", "--source", FIXTURES]);
    expect(code).toBe(1);
  });

  it("returns 2 on usage errors", () => {
    expect(run(["tessellation", "--bogus", "x"])).toBe(2);
    expect(run(["unknown-command"])).toBe(2);
    expect(run([])).toBe(2);
  });
});

/**
 * Readers for the upstream data dumps.
 *
 * The exporter is a bridge: the gluing data of the dodecahedral census
 * lives in the SnapPy/Regina ecosystem, and a small script there can
 * dump one JSON file per manifold (`index<N>.json`, schema below).  This
 * side only validates and reformats; when no dump is present it fails
 * cleanly so the main toolkit is unaffected.
 *
 *     {
 *       "index": 11,
 *       "dodecahedra": 4,
 *       "homology": "Z/2 + Z/2 + Z/120",
 *       "lspace": true,
 *       "gluings": [
 *         {"from": [0, 3], "to": [1, 7], "map": [[0, 4], [1, 2], ...]}
 *       ]
 *     }
 *
 * L-space values for census names are merged from the bundled
 * `data/known_lspace_values.json` (published values) and an optional
 * `lspace_values.json` in the source directory.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { ExportError, TessellationEntry, validateEntry } from "./formats.js";

export function sourceEntryPath(sourceDir: string, index: number): string {
  return path.join(sourceDir, `index${index}.json`);
}

export function loadEntry(sourceDir: string, index: number): TessellationEntry {
  if (!Number.isInteger(index) || index < 0 || index > 28) {
    throw new ExportError(`census index ${index} outside the range 0..28`);
  }
  const file = sourceEntryPath(sourceDir, index);
  if (!fs.existsSync(file)) {
    throw new ExportError(
      `no gluing data for census index ${index}: ${file} is missing ` +
        `(the upstream dump is not available in this environment)`,
    );
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(fs.readFileSync(file, "utf-8"));
  } catch (err) {
    throw new ExportError(`cannot parse ${file}: ${(err as Error).message}`);
  }
  const entry = parsed as TessellationEntry;
  if (entry.index !== index) {
    throw new ExportError(
      `${file} declares index ${entry.index}, expected ${index}`,
    );
  }
  validateEntry(entry);
  return entry;
}

export interface LspaceSources {
  bundled: Record<string, number>;
  extra?: Record<string, number>;
}

export function bundledValuesPath(): string {
  return path.join(
    path.dirname(fileURLToPath(import.meta.url)),
    "..",
    "data",
    "known_lspace_values.json",
  );
}

export function loadLspaceValues(sourceDir?: string): Record<string, number> {
  const bundled = JSON.parse(
    fs.readFileSync(bundledValuesPath(), "utf-8"),
  ) as Record<string, number>;
  const merged: Record<string, number> = { ...bundled };
  if (sourceDir) {
    const extraPath = path.join(sourceDir, "lspace_values.json");
    if (fs.existsSync(extraPath)) {
      const extra = JSON.parse(fs.readFileSync(extraPath, "utf-8")) as Record<
        string,
        number
      >;
      for (const [name, value] of Object.entries(extra)) {
        if (name in merged && merged[name] !== value) {
          throw new ExportError(
            `census value conflict for ${name}: bundled ${merged[name]}, ` +
              `source ${value}`,
          );
        }
        merged[name] = value;
      }
    }
  }
  if (Object.keys(merged).length === 0) {
    process.stderr.write("warning: no census values available\n");
  }
  return merged;
}

/**
 * Writers for the corner-manifold toolkit's neutral file formats.
 *
 * Tessellation grammar (one file per manifold):
 *
 *     dim 3; polytope dodecahedron; chambers 4
 *     glue 0.3 1.7 : 0->4, 1->2, ...
 *
 * Census table: one `name value` pair per line with value in {0, 1}.
 */

export interface Gluing {
  from: [number, number];
  to: [number, number];
  map: Array<[number, number]>;
}

export interface TessellationEntry {
  index: number;
  name?: string;
  dodecahedra: number;
  homology?: string;
  lspace?: boolean;
  gluings: Gluing[];
}

export class ExportError extends Error {}

const FACETS_PER_DODECAHEDRON = 12;
const VERTICES_PER_PENTAGON = 5;

export function validateEntry(entry: TessellationEntry): void {
  if (!Number.isInteger(entry.index) || entry.index < 0 || entry.index > 28) {
    throw new ExportError(
      `census index ${entry.index} outside the dodecahedral range 0..28`,
    );
  }
  const n = entry.dodecahedra;
  if (!Number.isInteger(n) || n < 1) {
    throw new ExportError(`bad dodecahedron count ${n}`);
  }
  const expected = (n * FACETS_PER_DODECAHEDRON) / 2;
  if (entry.gluings.length !== expected) {
    throw new ExportError(
      `entry ${entry.index}: ${entry.gluings.length} gluings, a closed ` +
        `manifold on ${n} dodecahedra needs ${expected}`,
    );
  }
  const seen = new Set<string>();
  for (const g of entry.gluings) {
    for (const [c, f] of [g.from, g.to]) {
      if (c < 0 || c >= n || f < 0 || f >= FACETS_PER_DODECAHEDRON) {
        throw new ExportError(
          `entry ${entry.index}: slot ${c}.${f} out of range`,
        );
      }
      const key = `${c}.${f}`;
      if (seen.has(key)) {
        throw new ExportError(`entry ${entry.index}: slot ${key} glued twice`);
      }
      seen.add(key);
    }
    if (g.map.length !== VERTICES_PER_PENTAGON) {
      throw new ExportError(
        `entry ${entry.index}: a pentagon identification needs ` +
          `${VERTICES_PER_PENTAGON} vertex pairs`,
      );
    }
    const sources = new Set(g.map.map(([a]) => a));
    const targets = new Set(g.map.map(([, b]) => b));
    if (
      sources.size !== VERTICES_PER_PENTAGON ||
      targets.size !== VERTICES_PER_PENTAGON
    ) {
      throw new ExportError(
        `entry ${entry.index}: vertex identification is not a bijection`,
      );
    }
  }
  if (seen.size !== n * FACETS_PER_DODECAHEDRON) {
    throw new ExportError(`entry ${entry.index}: unglued facet slots remain`);
  }
}

export function tessellationText(entry: TessellationEntry): string {
  validateEntry(entry);
  const lines = [
    `dim 3; polytope dodecahedron; chambers ${entry.dodecahedra}`,
  ];
  const sorted = [...entry.gluings].sort(
    (a, b) => a.from[0] - b.from[0] || a.from[1] - b.from[1],
  );
  for (const g of sorted) {
    const pairs = [...g.map]
      .sort((a, b) => a[0] - b[0])
      .map(([a, b]) => `${a}->${b}`)
      .join(", ");
    lines.push(
      `glue ${g.from[0]}.${g.from[1]} ${g.to[0]}.${g.to[1]} : ${pairs}`,
    );
  }
  return lines.join("\n") + "\n";
}

/** Map census L-space values (1 / -1 / boolean) onto the {0,1} table. */
export function censusTableText(values: Record<string, number | boolean>): string {
  const lines: string[] = [];
  for (const name of Object.keys(values).sort()) {
    const raw = values[name];
    const bit = raw === true || raw === 1 ? 1 : 0;
    if (!(raw === true || raw === false || raw === 1 || raw === -1 || raw === 0)) {
      throw new ExportError(`unrecognised L-space value for ${name}: ${raw}`);
    }
    if (/\s/.test(name)) {
      throw new ExportError(`census name ${JSON.stringify(name)} contains whitespace`);
    }
    lines.push(`${name} ${bit}`);
  }
  return lines.join("\n") + "\n";
}

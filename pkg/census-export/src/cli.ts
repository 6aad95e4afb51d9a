#!/usr/bin/env node
/**
 * census-export tessellation --index N [--source DIR] [--out FILE]
 * census-export lspace-table [--source DIR] [--out FILE]
 *
 * Exit codes: 0 success, 1 data unavailable or invalid, 2 usage.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { censusTableText, ExportError, tessellationText } from "./formats.js";
import { loadEntry, loadLspaceValues } from "./source.js";

interface Args {
  command: string;
  index?: number;
  source?: string;
  out?: string;
}

function parseArgs(argv: string[]): Args {
  const [command, ...rest] = argv;
  if (!command) throw new UsageError("missing command");
  const args: Args = { command };
  for (let i = 0; i < rest.length; i += 1) {
    const flag = rest[i];
    const value = rest[i + 1];
    switch (flag) {
      case "--index":
        args.index = Number(value);
        i += 1;
        break;
      case "--source":
        args.source = value;
        i += 1;
        break;
      case "--out":
        args.out = value;
        i += 1;
        break;
      default:
        throw new UsageError(`unknown flag ${flag}`);
    }
  }
  return args;
}

class UsageError extends Error {}

function emit(text: string, out?: string): void {
  if (out) {
    fs.writeFileSync(out, text);
  } else {
    process.stdout.write(text);
  }
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`usage error: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    switch (args.command) {
      case "tessellation": {
        if (args.index === undefined || Number.isNaN(args.index)) {
          process.stderr.write("usage error: --index N is required\n");
          return 2;
        }
        const source = args.source ?? process.env.CENSUS_SOURCE;
        if (!source) {
          process.stderr.write(
            "error: no source directory (--source or CENSUS_SOURCE)\n",
          );
          return 1;
        }
        const entry = loadEntry(source, args.index);
        emit(tessellationText(entry), args.out);
        return 0;
      }
      case "lspace-table": {
        const source = args.source ?? process.env.CENSUS_SOURCE;
        const values = loadLspaceValues(source);
        emit(censusTableText(values), args.out);
        return 0;
      }
      default:
        process.stderr.write(`usage error: unknown command ${args.command}\n`);
        return 2;
    }
  } catch (err) {
    if (err instanceof ExportError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

function invokedDirectly(): boolean {
  if (process.argv[1] === undefined) return false;
  try {
    return (
      fs.realpathSync(process.argv[1]) ===
      fs.realpathSync(fileURLToPath(import.meta.url))
    );
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  process.exit(run(process.argv.slice(2)));
}

/**
 * ialink-render --fig <fig2..fig7> --in <csv dir> --out <svg path>
 *
 * Validates the input CSV against its versioned schema before rendering;
 * on schema mismatch it exits nonzero without writing anything.
 */

import { writeFileSync } from "fs";
import { SchemaError } from "./csv.js";
import { renderFigure } from "./figures.js";

function parseArgs(argv: string[]): { fig: string; inDir: string; out: string } {
  const args: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`usage: render --fig <id> --in <dir> --out <path>`);
    }
    args[key.slice(2)] = value;
  }
  const { fig, in: inDir, out } = args;
  if (!fig || !inDir || !out) {
    throw new Error("usage: render --fig <id> --in <dir> --out <path>");
  }
  return { fig, inDir, out };
}

export function main(argv: string[]): number {
  let opts;
  try {
    opts = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const svg = renderFigure(opts.fig, opts.inDir);
    writeFileSync(opts.out, svg, "utf-8");
    console.log(`wrote ${opts.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${(err as Error).message}`);
    } else {
      console.error((err as Error).message);
    }
    return 1;
  }
}

import { pathToFileURL } from "url";

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}

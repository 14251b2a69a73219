/**
 * Minimal CSV reader for the ialink output files plus header validation
 * against the versioned column schemas.  The files are plain UTF-8 with a
 * header row and never contain quoted fields.
 */

import { readFileSync } from "fs";

export const SCHEMAS: Record<string, string[]> = {
  fig2: ["network", "alpha", "sigma2_mc", "sigma2_approx", "bound_lower", "bound_upper"],
  fig3: ["alpha_abs", "beta", "gamma_db", "kld"],
  fig4: ["beta", "gamma_db", "sum_rate_sim", "sum_rate_analytic", "sum_rate_cap"],
  fig5: ["alpha", "gamma_db", "ia_rate_sim", "ia_rate_analytic", "bf_rate_sim"],
  fig6: ["gamma_db", "line_id", "point_idx", "alpha", "beta"],
  fig7: ["gamma_db", "line_id", "point_idx", "alpha", "beta"],
};

export class SchemaError extends Error {}

export interface Table {
  columns: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) throw new SchemaError("empty CSV file");
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(`row ${i + 2}: ${cells.length} fields, expected ${columns.length}`);
    }
    return cells;
  });
  return { columns, rows };
}

export function loadTable(path: string, schemaName: string): Table {
  const schema = SCHEMAS[schemaName];
  if (!schema) throw new SchemaError(`unknown schema ${schemaName}`);
  const table = parseCsv(readFileSync(path, "utf-8"));
  if (table.columns.length !== schema.length || !schema.every((c, i) => table.columns[i] === c)) {
    throw new SchemaError(
      `${path}: header [${table.columns.join(",")}] does not match schema ` +
        `${schemaName} [${schema.join(",")}]`
    );
  }
  return table;
}

export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new SchemaError(`missing column ${name}`);
  return table.rows.map((r) => Number(r[idx]));
}

export function columnText(table: Table, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new SchemaError(`missing column ${name}`);
  return table.rows.map((r) => r[idx]);
}

/** Unique values in first-appearance order. */
export function distinct<T>(values: T[]): T[] {
  const out: T[] = [];
  for (const v of values) if (!out.includes(v)) out.push(v);
  return out;
}

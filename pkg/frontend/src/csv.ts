/**
 * Typed access to the experiment CSVs.
 *
 * The CSVs are the only interface to the experiment pipeline; everything
 * downstream works off the parsed rows. Missing columns are a schema error,
 * an empty table is legal (the renderers treat it as a no-op).
 */

import Papa from "papaparse";

export class SchemaError extends Error {}

export type Row = Record<string, string>;

export interface Table {
  columns: string[];
  rows: Row[];
}

export function parseTable(text: string): Table {
  if (text.trim() === "") return { columns: [], rows: [] };
  const parsed = Papa.parse<Row>(text.trim(), { header: true, skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`CSV parse error at row ${e.row}: ${e.message}`);
  }
  return { columns: parsed.meta.fields ?? [], rows: parsed.data };
}

export function requireColumns(table: Table, needed: string[], context: string): void {
  if (table.rows.length === 0) return; // empty input is handled by the caller
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`${context}: missing column(s) ${missing.join(", ")}`);
  }
}

export function num(row: Row, col: string): number {
  const v = Number(row[col]);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`column ${col}: not a number (${JSON.stringify(row[col])})`);
  }
  return v;
}

export function mean(values: number[]): number {
  let s = 0;
  for (const v of values) s += v;
  return s / values.length;
}

/** Stable unique values, sorted numerically when every entry parses. */
export function distinct(rows: Row[], col: string): string[] {
  const seen = [...new Set(rows.map((r) => r[col]))];
  const nums = seen.map(Number);
  if (nums.every(Number.isFinite)) {
    return seen.sort((a, b) => Number(a) - Number(b));
  }
  return seen.sort();
}

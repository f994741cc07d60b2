/** Column schemas for the CSV files the solver CLI emits, plus the
 * validation that turns a parsed sheet into typed rows.  Any mismatch
 * is reported through SchemaError with the offending column named. */

import fs from "node:fs";
import Papa from "papaparse";

export class SchemaError extends Error {
  constructor(
    message: string,
    public readonly column?: string,
  ) {
    super(message);
    this.name = "SchemaError";
  }
}

export class EmptyInputError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyInputError";
  }
}

export type Row = Record<string, string>;

/** Columns each file kind must carry.  Extra columns are allowed. */
export const SCHEMAS: Record<string, string[]> = {
  spectrum: ["index", "omega2", "in_band", "label"],
  modes: ["index", "site", "value"],
  phase: ["k2", "k31", "k32", "count_semi", "count_finite", "regime"],
  sweep_k32: [
    "k32",
    "mode_index",
    "omega2",
    "label",
    "predicted_left_omega2",
    "predicted_right_omega2",
  ],
  branch: ["arclength", "amplitude", "omega", "omega2", "energy", "ipr", "residual"],
  lattice2d_modes: ["index", "row", "col", "value"],
};

export function loadCsv(path: string, schema: string): Row[] {
  const required = SCHEMAS[schema];
  if (!required) throw new Error(`unknown schema: ${schema}`);
  const text = fs.readFileSync(path, "utf8");
  const parsed = Papa.parse<Row>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const col of required) {
    if (!fields.includes(col)) {
      throw new SchemaError(`${path}: missing column: ${col}`, col);
    }
  }
  if (parsed.data.length === 0) {
    throw new EmptyInputError(`${path}: no data rows`);
  }
  return parsed.data;
}

/** Numeric cell access: empty cells are legal only when allowEmpty. */
export function num(row: Row, column: string, allowEmpty = false): number | null {
  const raw = row[column];
  if (raw === undefined) {
    throw new SchemaError(`missing column: ${column}`, column);
  }
  if (raw === "") {
    if (allowEmpty) return null;
    throw new SchemaError(`empty value in column: ${column}`, column);
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`non-numeric value "${raw}" in column: ${column}`, column);
  }
  return value;
}

export function numStrict(row: Row, column: string): number {
  return num(row, column, false) as number;
}

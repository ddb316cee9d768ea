/**
 * Reader for exported feature tables.
 *
 * A table is only accepted when its header matches the sidecar schema
 * exactly; targets are parsed per task (labels for the classification
 * tasks, seconds for remaining time).
 */

import { readFileSync } from "node:fs";

import Papa from "papaparse";

import { SchemaMismatch } from "./errors.js";
import { FeatureSchema, header, vectorWidth } from "./schema.js";

export interface FeatureRow {
  caseId: string;
  prefixLength: number;
  vector: Float64Array;
  /** label string for classification tasks, seconds for remaining_time */
  target: string | number;
}

export interface FeatureTable {
  schema: FeatureSchema;
  rows: FeatureRow[];
}

export function readFeatureCsv(path: string, schema: FeatureSchema): FeatureTable {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<string[]>(text.trimEnd(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaMismatch(`${path}: ${first.message} (row ${first.row})`);
  }
  const lines = parsed.data;
  if (lines.length === 0) {
    throw new SchemaMismatch(`${path}: empty feature file`);
  }

  const expected = header(schema);
  const got = lines[0];
  if (got.length !== expected.length || got.some((h, i) => h !== expected[i])) {
    throw new SchemaMismatch(
      `${path}: header does not match schema ` +
      `(${got.length} columns, expected ${expected.length})`);
  }

  const width = vectorWidth(schema);
  const rows: FeatureRow[] = [];
  for (let lineNo = 1; lineNo < lines.length; lineNo++) {
    const cells = lines[lineNo];
    if (cells.length !== expected.length) {
      throw new SchemaMismatch(
        `${path}: line ${lineNo + 1} has ${cells.length} cells, ` +
        `expected ${expected.length}`);
    }
    const vector = new Float64Array(width);
    for (let i = 0; i < width; i++) {
      const value = Number(cells[2 + i]);
      if (Number.isNaN(value)) {
        throw new SchemaMismatch(
          `${path}: line ${lineNo + 1}: non-numeric feature ${cells[2 + i]}`);
      }
      vector[i] = value;
    }
    const rawTarget = cells[cells.length - 1];
    const target = schema.task === "remaining_time" ? Number(rawTarget) : rawTarget;
    if (typeof target === "number" && Number.isNaN(target)) {
      throw new SchemaMismatch(
        `${path}: line ${lineNo + 1}: non-numeric target ${rawTarget}`);
    }
    rows.push({
      caseId: cells[0],
      prefixLength: Number(cells[1]),
      vector,
      target,
    });
  }
  return { schema, rows };
}

/** Number of distinct cases contributing rows; the unit the sampler reduces. */
export function distinctCases(table: FeatureTable): number {
  return new Set(table.rows.map((row) => row.caseId)).size;
}

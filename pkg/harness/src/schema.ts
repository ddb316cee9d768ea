/**
 * Feature schema sidecar, the contract shared with the producer tool.
 *
 * The JSON layout is the producer's: snake_case keys, vocabularies as
 * sorted string arrays, reserved slots for unknown and padding values.
 * The header reconstruction below must stay byte-for-byte in step with
 * the producer so that a mismatched file is rejected, not misread.
 */

import { readFileSync } from "node:fs";

import { SchemaMismatch } from "./errors.js";

export const UNK = "__UNK__";
export const PAD = "__PAD__";
export const END = "__END__";

export type Task = "next_activity" | "remaining_time" | "outcome";

export interface OutcomeSpec {
  attribute: string;
  comparator: string;
  constant: number | string;
}

export interface FeatureSchema {
  task: Task;
  activityVocabulary: string[];
  categoricalVocabularies: Record<string, string[]>;
  categoricalScopes: Record<string, string>;
  numericFeatures: string[];
  window: number;
  maxPrefixLength: number | null;
  outcome: OutcomeSpec | null;
}

export function readSchema(path: string): FeatureSchema {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  const task = raw.task;
  if (task !== "next_activity" && task !== "remaining_time" && task !== "outcome") {
    throw new SchemaMismatch(`unknown task ${JSON.stringify(task)} in ${path}`);
  }
  return {
    task,
    activityVocabulary: raw.activity_vocabulary,
    categoricalVocabularies: raw.categorical_vocabularies,
    categoricalScopes: raw.categorical_scopes,
    numericFeatures: raw.numeric_features,
    window: raw.window,
    maxPrefixLength: raw.max_prefix_length,
    outcome: raw.outcome,
  };
}

export function vectorWidth(schema: FeatureSchema): number {
  const acts = schema.activityVocabulary.length;
  let width = schema.window * (acts + 2) + acts + schema.numericFeatures.length;
  for (const vocab of Object.values(schema.categoricalVocabularies)) {
    width += vocab.length + 1;
  }
  return width;
}

export function featureNames(schema: FeatureSchema): string[] {
  const names: string[] = [];
  const slots = [...schema.activityVocabulary, UNK, PAD];
  for (let i = 1; i <= schema.window; i++) {
    for (const slot of slots) names.push(`win${i}=${slot}`);
  }
  for (const act of schema.activityVocabulary) names.push(`freq=${act}`);
  names.push(...schema.numericFeatures);
  // JSON.parse keeps the file's key order, which the producer sorts
  for (const attr of Object.keys(schema.categoricalVocabularies)) {
    for (const value of schema.categoricalVocabularies[attr]) {
      names.push(`${attr}=${value}`);
    }
    names.push(`${attr}=${UNK}`);
  }
  return names;
}

export function header(schema: FeatureSchema): string[] {
  return ["case_id", "prefix_length", ...featureNames(schema), "target"];
}

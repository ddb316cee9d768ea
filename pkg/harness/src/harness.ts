/**
 * Full-versus-sampled training comparison over exported feature files.
 *
 * The harness never sees a raw event log: its whole world is feature
 * CSVs plus the schema sidecar, and its output is a report CSV in the
 * producer's column layout. One model is trained on the full training
 * export, one per sampled export, all scored against the same test
 * export, and each sampled row carries quality and speed ratios against
 * the full model.
 */

import { writeFileSync } from "node:fs";
import { performance } from "node:perf_hooks";

import Papa from "papaparse";

import { TrainingFailure } from "./errors.js";
import { distinctCases, FeatureTable, readFeatureCsv } from "./features.js";
import {
  Classifier,
  DEFAULT_PARAMS,
  GbtParams,
  predictClassifier,
  predictRegressor,
  Regressor,
  trainClassifier,
  trainRegressor,
} from "./gbt.js";
import {
  AbsoluteMetrics,
  absoluteMetrics,
  Average,
  classificationMetrics,
  MACRO,
  regressionMetrics,
  relativeReport,
  REPORT_COLUMNS,
  ReportRow,
  reportRowValues,
} from "./metrics.js";
import { FeatureSchema, readSchema, vectorWidth } from "./schema.js";

export interface PlanFile {
  plan: string;
  path: string;
}

export interface HarnessRun {
  schemaPath: string;
  fullTrainPath: string;
  testPath: string;
  sampled: PlanFile[];
  average?: Average;
  params?: Partial<GbtParams>;
}

export interface HarnessResult {
  columns: readonly string[];
  rows: ReportRow[];
}

function matrixOf(table: FeatureTable): { x: Float64Array; rows: number; cols: number } {
  const cols = vectorWidth(table.schema);
  const rows = table.rows.length;
  const x = new Float64Array(rows * cols);
  for (let r = 0; r < rows; r++) x.set(table.rows[r].vector, r * cols);
  return { x, rows, cols };
}

type Model = Classifier | Regressor;

function trainOn(
  table: FeatureTable, params: GbtParams,
): { model: Model; seconds: number } {
  if (table.rows.length === 0) throw new TrainingFailure("empty training table");
  const { x, rows, cols } = matrixOf(table);
  const started = performance.now();
  let model: Model;
  if (table.schema.task === "remaining_time") {
    const y = Float64Array.from(table.rows, (row) => row.target as number);
    model = trainRegressor(x, y, rows, cols, params);
  } else {
    const labels = table.rows.map((row) => String(row.target));
    model = trainClassifier(x, labels, rows, cols, params);
  }
  return { model, seconds: (performance.now() - started) / 1000 };
}

function score(
  model: Model, test: FeatureTable, average: Average, trainingSeconds: number,
): AbsoluteMetrics {
  if (model.kind === "regressor") {
    const errors = test.rows.map((row) =>
      Math.max(0, predictRegressor(model, row.vector)) - (row.target as number));
    const { mae, rmse } = regressionMetrics(errors);
    return absoluteMetrics({ maeSeconds: mae, rmseSeconds: rmse, trainingSeconds });
  }
  const pairs = test.rows.map((row): [string, string] =>
    [predictClassifier(model, row.vector), String(row.target)]);
  const { accuracy, f1 } = classificationMetrics(pairs, average);
  return absoluteMetrics({ accuracy, f1Macro: f1, trainingSeconds });
}

export function runHarness(run: HarnessRun): HarnessResult {
  const schema: FeatureSchema = readSchema(run.schemaPath);
  const average = run.average ?? MACRO;
  const params: GbtParams = { ...DEFAULT_PARAMS, ...run.params };

  const fullTrain = readFeatureCsv(run.fullTrainPath, schema);
  const test = readFeatureCsv(run.testPath, schema);

  const whole = trainOn(fullTrain, params);
  const wholeMetrics = score(whole.model, test, average, whole.seconds);
  const trainCases = distinctCases(fullTrain);

  const rows: ReportRow[] = [];
  for (const { plan, path } of run.sampled) {
    const sampledTrain = readFeatureCsv(path, schema);
    const fitted = trainOn(sampledTrain, params);
    const sampledMetrics = score(fitted.model, test, average, fitted.seconds);
    const sampledCases = distinctCases(sampledTrain);
    rows.push({
      plan,
      task: schema.task,
      fold: "0",
      repetition: "1",
      trainCases,
      sampledCases,
      report: relativeReport(wholeMetrics, sampledMetrics, trainCases / sampledCases),
    });
  }
  return { columns: REPORT_COLUMNS, rows };
}

export function writeReportCsv(result: HarnessResult, path: string): void {
  const lines = [
    [...result.columns],
    ...result.rows.map(reportRowValues),
  ];
  writeFileSync(path, Papa.unparse(lines, { newline: "\n" }) + "\n", "utf-8");
}

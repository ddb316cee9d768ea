/**
 * Quality metrics and the relative report, kept definitionally identical
 * to the producer's metrics module (cross-checked on shared fixtures).
 *
 * Orientation: r_acc and r_f1 divide sampled by whole; r_mae, r_rmse,
 * r_fe, and r_t divide whole by sampled, so >= 1 always reads "training
 * on the sample was as good, or as fast, as training on everything".
 * A ratio whose numerator and denominator are both zero is null: the
 * quantity is absent on both sides, and the CSV cell stays empty.
 */

import { EmptyInput, ZeroDenominator } from "./errors.js";

export const MACRO = "macro";
export const WEIGHTED = "weighted";
export type Average = typeof MACRO | typeof WEIGHTED;

export interface AbsoluteMetrics {
  accuracy: number;
  f1Macro: number;
  maeSeconds: number;
  rmseSeconds: number;
  featureExtractionSeconds: number;
  trainingSeconds: number;
}

export function absoluteMetrics(partial: Partial<AbsoluteMetrics> = {}): AbsoluteMetrics {
  return {
    accuracy: 0,
    f1Macro: 0,
    maeSeconds: 0,
    rmseSeconds: 0,
    featureExtractionSeconds: 0,
    trainingSeconds: 0,
    ...partial,
  };
}

export interface MetricsReport {
  baseline: AbsoluteMetrics;
  sampled: AbsoluteMetrics;
  rS: number;
  rAcc: number | null;
  rF1: number | null;
  rMae: number | null;
  rRmse: number | null;
  rFe: number | null;
  rT: number | null;
}

/** Accuracy and F1 over (predicted, true) label pairs. */
export function classificationMetrics(
  pairs: Array<[string, string]>, average: Average = MACRO,
): { accuracy: number; f1: number } {
  if (pairs.length === 0) throw new EmptyInput("no predictions");

  let correct = 0;
  for (const [pred, truth] of pairs) if (pred === truth) correct++;
  const accuracy = correct / pairs.length;

  const classes = [...new Set(pairs.flat())].sort();
  const scores: number[] = [];
  const weights: number[] = [];
  for (const cls of classes) {
    let tp = 0, fp = 0, fn = 0;
    for (const [pred, truth] of pairs) {
      if (pred === cls && truth === cls) tp++;
      else if (pred === cls) fp++;
      else if (truth === cls) fn++;
    }
    const denom = 2 * tp + fp + fn;
    scores.push(denom ? (2 * tp) / denom : 0);
    weights.push(tp + fn);
  }

  let f1: number;
  if (average === MACRO) {
    f1 = scores.reduce((a, b) => a + b, 0) / scores.length;
  } else {
    const total = weights.reduce((a, b) => a + b, 0);
    f1 = total
      ? scores.reduce((acc, s, i) => acc + s * weights[i], 0) / total
      : 0;
  }
  return { accuracy, f1 };
}

/** MAE and RMSE of signed prediction errors, in seconds. */
export function regressionMetrics(errors: number[]): { mae: number; rmse: number } {
  if (errors.length === 0) throw new EmptyInput("no errors");
  const n = errors.length;
  let absSum = 0, sqSum = 0;
  for (const e of errors) {
    absSum += Math.abs(e);
    sqSum += e * e;
  }
  return { mae: absSum / n, rmse: Math.sqrt(sqSum / n) };
}

function ratio(numerator: number, denominator: number, field: string): number | null {
  if (denominator > 0) return numerator / denominator;
  if (numerator === 0) return null; // absent on both sides: not applicable
  throw new ZeroDenominator(field);
}

export function relativeReport(
  baseline: AbsoluteMetrics, sampled: AbsoluteMetrics, rS: number,
): MetricsReport {
  return {
    baseline,
    sampled,
    rS,
    rAcc: ratio(sampled.accuracy, baseline.accuracy, "accuracy"),
    rF1: ratio(sampled.f1Macro, baseline.f1Macro, "f1_macro"),
    rMae: ratio(baseline.maeSeconds, sampled.maeSeconds, "mae_seconds"),
    rRmse: ratio(baseline.rmseSeconds, sampled.rmseSeconds, "rmse_seconds"),
    rFe: ratio(baseline.featureExtractionSeconds,
               sampled.featureExtractionSeconds, "feature_extraction_seconds"),
    rT: ratio(baseline.trainingSeconds, sampled.trainingSeconds,
              "training_seconds"),
  };
}

export const REPORT_COLUMNS = [
  "plan", "task", "fold", "repetition",
  "train_cases", "sampled_cases", "r_s",
  "accuracy_whole", "accuracy_sampled", "r_acc",
  "f1_whole", "f1_sampled", "r_f1",
  "mae_whole", "mae_sampled", "r_mae",
  "rmse_whole", "rmse_sampled", "r_rmse",
  "fe_seconds_whole", "fe_seconds_sampled", "r_fe",
  "train_seconds_whole", "train_seconds_sampled", "r_t",
] as const;

export interface ReportRow {
  plan: string;
  task: string;
  fold: string;
  repetition: string;
  trainCases: number;
  sampledCases: number;
  report: MetricsReport;
}

/** Shortest round-trip float text, in the producer's style (1 -> "1.0"). */
export function floatCell(value: number): string {
  if (Number.isInteger(value) && Math.abs(value) < 1e16) {
    return `${value}.0`;
  }
  const text = String(value);
  // pad single-digit exponents: 1e-7 -> 1e-07
  return text.replace(/e([+-])(\d)$/, "e$10$2");
}

function cell(value: number | null): string {
  return value === null ? "" : floatCell(value);
}

function countCell(value: number): string {
  return Number.isInteger(value) ? String(value) : floatCell(value);
}

export function reportRowValues(row: ReportRow): string[] {
  const r = row.report;
  return [
    row.plan, row.task, row.fold, row.repetition,
    countCell(row.trainCases), countCell(row.sampledCases), cell(r.rS),
    cell(r.baseline.accuracy), cell(r.sampled.accuracy), cell(r.rAcc),
    cell(r.baseline.f1Macro), cell(r.sampled.f1Macro), cell(r.rF1),
    cell(r.baseline.maeSeconds), cell(r.sampled.maeSeconds), cell(r.rMae),
    cell(r.baseline.rmseSeconds), cell(r.sampled.rmseSeconds), cell(r.rRmse),
    cell(r.baseline.featureExtractionSeconds),
    cell(r.sampled.featureExtractionSeconds), cell(r.rFe),
    cell(r.baseline.trainingSeconds), cell(r.sampled.trainingSeconds),
    cell(r.rT),
  ];
}

/**
 * Builds the fixture files once per vitest run by driving the producer
 * CLI, exactly the way a user would: generate a log, split off a test
 * fold, sample the training part, export feature CSVs. The harness
 * under test then consumes only those exports.
 */

import { execFileSync } from "node:child_process";
import { mkdirSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

function run(command: string, args: string[]): void {
  execFileSync(command, args, { stdio: ["ignore", "ignore", "inherit"] });
}

function generateLog(path: string, cases: number, tail: number, seed: number): void {
  run("python3", ["-c",
    "import sys; from logsample import generate_skewed_log, write_log_csv; " +
    "write_log_csv(generate_skewed_log(case_count=int(sys.argv[1]), " +
    "tail_variant_count=int(sys.argv[2]), seed=int(sys.argv[3])), sys.argv[4])",
    String(cases), String(tail), String(seed), path]);
}

// the generated logs quote nothing, so splitting on commas is safe here
function filterByFold(
  logPath: string, foldsPath: string, trainPath: string, testPath: string,
): void {
  const folds = new Map<string, string>();
  const foldLines = readFileSync(foldsPath, "utf-8").trimEnd().split("\n");
  for (const line of foldLines.slice(1)) {
    const [caseId, fold] = line.split(",");
    folds.set(caseId, fold);
  }
  const logLines = readFileSync(logPath, "utf-8").trimEnd().split("\n");
  const header = logLines[0];
  const caseCol = header.split(",").indexOf("case_id");
  const train: string[] = [header];
  const test: string[] = [header];
  for (const line of logLines.slice(1)) {
    const caseId = line.split(",")[caseCol];
    (folds.get(caseId) === "0" ? test : train).push(line);
  }
  writeFileSync(trainPath, train.join("\n") + "\n", "utf-8");
  writeFileSync(testPath, test.join("\n") + "\n", "utf-8");
}

function fixture(name: string): string {
  return join(FIXTURES, name);
}

export default function setup(): void {
  rmSync(FIXTURES, { recursive: true, force: true });
  mkdirSync(FIXTURES, { recursive: true });

  // directional scenario: skewed log, unique vs division sampling
  generateLog(fixture("dir_log.csv"), 600, 48, 7);
  run("logsample", ["split", "--input", fixture("dir_log.csv"),
    "--folds", "5", "--seed", "13", "--output", fixture("dir_folds.csv")]);
  filterByFold(fixture("dir_log.csv"), fixture("dir_folds.csv"),
    fixture("dir_train_log.csv"), fixture("dir_test_log.csv"));
  for (const [plan, select] of [["unique", "unique"], ["d2", "d2"]]) {
    run("logsample", ["sample", "--input", fixture("dir_train_log.csv"),
      "--select", select, "--sort", "numeric:amount",
      "--output", fixture(`dir_${plan}_log.csv`)]);
  }
  run("logsample", ["featurize", "--input", fixture("dir_train_log.csv"),
    "--task", "next_activity", "--output", fixture("dir_full.csv"),
    "--schema-out", fixture("dir.schema.json")]);
  for (const name of ["unique", "d2"]) {
    run("logsample", ["featurize", "--input", fixture(`dir_${name}_log.csv`),
      "--schema-in", fixture("dir.schema.json"),
      "--output", fixture(`dir_${name}.csv`)]);
  }
  run("logsample", ["featurize", "--input", fixture("dir_test_log.csv"),
    "--schema-in", fixture("dir.schema.json"),
    "--output", fixture("dir_test.csv")]);

  // identity scenario: the full training export reused as its own sample,
  // for both a classification and a regression task
  generateLog(fixture("id_log.csv"), 150, 12, 41);
  run("logsample", ["split", "--input", fixture("id_log.csv"),
    "--folds", "5", "--seed", "13", "--output", fixture("id_folds.csv")]);
  filterByFold(fixture("id_log.csv"), fixture("id_folds.csv"),
    fixture("id_train_log.csv"), fixture("id_test_log.csv"));
  for (const task of ["next_activity", "remaining_time"]) {
    run("logsample", ["featurize", "--input", fixture("id_train_log.csv"),
      "--task", task, "--output", fixture(`id_${task}_full.csv`),
      "--schema-out", fixture(`id_${task}.schema.json`)]);
    run("logsample", ["featurize", "--input", fixture("id_test_log.csv"),
      "--schema-in", fixture(`id_${task}.schema.json`),
      "--output", fixture(`id_${task}_test.csv`)]);
  }
}

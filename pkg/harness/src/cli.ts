#!/usr/bin/env node
/**
 * Command line front end.
 *
 *   logsample-harness --schema train.schema.json \
 *     --full-train full.csv --test test.csv \
 *     --sampled unique=u.csv --sampled d2=d.csv \
 *     --out report.csv [--rounds 60] [--seed 17] [--average weighted]
 *
 * Exit codes: 0 success, 1 usage error, 2 data error.
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { runHarness, writeReportCsv, PlanFile } from "./harness.js";
import { MACRO, WEIGHTED } from "./metrics.js";

function parseSampled(specs: string[]): PlanFile[] {
  return specs.map((spec) => {
    const eq = spec.indexOf("=");
    if (eq <= 0 || eq === spec.length - 1) {
      throw new RangeError(`--sampled expects plan=path, got ${spec}`);
    }
    return { plan: spec.slice(0, eq), path: spec.slice(eq + 1) };
  });
}

export async function main(argv: string[]): Promise<number> {
  let args;
  try {
    args = await yargs(argv)
      .option("schema", { type: "string", demandOption: true })
      .option("full-train", { type: "string", demandOption: true })
      .option("test", { type: "string", demandOption: true })
      .option("sampled", { type: "string", array: true, demandOption: true })
      .option("out", { type: "string", demandOption: true })
      .option("rounds", { type: "number" })
      .option("seed", { type: "number" })
      .option("max-depth", { type: "number" })
      .option("average", { choices: [MACRO, WEIGHTED] as const, default: MACRO })
      .strict()
      .fail((msg) => {
        throw new RangeError(msg);
      })
      .parse();
  } catch (error) {
    console.error(`usage error: ${(error as Error).message}`);
    return 1;
  }

  let sampled: PlanFile[];
  try {
    sampled = parseSampled(args.sampled as string[]);
  } catch (error) {
    console.error(`usage error: ${(error as Error).message}`);
    return 1;
  }

  try {
    const result = runHarness({
      schemaPath: args.schema,
      fullTrainPath: args["full-train"],
      testPath: args.test,
      sampled,
      average: args.average as "macro" | "weighted",
      params: {
        ...(args.rounds !== undefined && { rounds: args.rounds }),
        ...(args.seed !== undefined && { seed: args.seed }),
        ...(args["max-depth"] !== undefined && { maxDepth: args["max-depth"] }),
      },
    });
    writeReportCsv(result, args.out);
    for (const row of result.rows) {
      const r = row.report;
      const quality = row.task === "remaining_time"
        ? `r_mae=${r.rMae?.toFixed(4)} r_rmse=${r.rRmse?.toFixed(4)}`
        : `r_acc=${r.rAcc?.toFixed(4)} r_f1=${r.rF1?.toFixed(4)}`;
      console.log(`${row.plan}: r_s=${r.rS.toFixed(4)} ${quality} ` +
        `r_t=${r.rT === null ? "-" : r.rT.toFixed(4)}`);
    }
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 2;
  }
}

const isDirectRun = import.meta.url === `file://${process.argv[1]}`;
if (isDirectRun) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}

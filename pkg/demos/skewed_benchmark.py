"""Benchmark sampling plans on a synthetic skewed log, end to end.

    python3 demos/skewed_benchmark.py [case_count]

Generates a log where one variant covers ~60% of the cases and a long tail
of rare variants covers the rest, then runs the full cross-validated
comparison: for each plan, train the n-gram next-activity baseline on the
sampled training folds and on the untouched ones, and report quality and
speed relative to training on everything.

With the default 2000 cases this takes a few seconds. The printed table is
the same one `logsample run` writes to report.txt.
"""

import sys
import time

from logsample import format_report_table, generate_skewed_log, run_pipeline
from logsample.pipeline import config_from_mapping

case_count = int(sys.argv[1]) if len(sys.argv) > 1 else 2000

log = generate_skewed_log(case_count=case_count, tail_variant_count=case_count // 12,
                          seed=7)
print(f"generated {log.case_count} cases, {len(log.events)} events")

config = config_from_mapping({
    "task": "next_activity",
    "folds": "5",
    "repetitions": "2",
    "plans": "unique, log3, log10, d2, d5, d10",
    "timing": "on",
})

started = time.perf_counter()
rows = run_pipeline(config, log=log)
print(f"pipeline finished in {time.perf_counter() - started:.1f}s\n")

aggregate = [row for row in rows if row.fold == "mean"]
print(format_report_table(aggregate, "next_activity"))

print("\nreading the table: ratios are oriented so that >= 1 means the")
print("sampled training set was as good (r_acc, r_f1) or as fast (r_fe, r_t)")
print("as training on the full folds; r_s is the size reduction factor.")

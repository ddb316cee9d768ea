"""From raw event log to next-activity predictions, step by step.

    python3 demos/featurize_and_predict.py

Shows what the pipeline does internally: split off a test set, turn both
logs into fixed-width prefix feature tables, train the n-gram baseline,
and score it. Useful as a template when you want the pieces individually
rather than the `run` command.
"""

from logsample import (
    FeatureConfig,
    assign_folds,
    build_schema,
    classification_metrics,
    decode_window,
    extract,
    generate_skewed_log,
    materialize_fold,
    predict,
    train_next_activity,
)

log = generate_skewed_log(case_count=600, tail_variant_count=40, seed=19)
assignment = assign_folds(log, fold_count=5, seed=13)
train_log, test_log = materialize_fold(log, assignment, test_fold=0)
print(f"train {train_log.case_count} cases / test {test_log.case_count} cases")

# the schema is learned on the training side only; unseen activities in the
# test side fall into a reserved slot instead of widening the vectors
schema = build_schema(train_log, "next_activity", FeatureConfig())
print(f"vocabulary={len(schema.activity_vocabulary)} activities, "
      f"vector width={schema.vector_width}")

train_table = extract(train_log, schema)
test_table = extract(test_log, schema)
print(f"{len(train_table.rows)} training prefixes, {len(test_table.rows)} test prefixes")

model = train_next_activity(train_table)

pairs = [(predict(model, row), row.target) for row in test_table.rows]
accuracy, f1 = classification_metrics(pairs)
print(f"accuracy={accuracy:.4f}  macro f1={f1:.4f}")

print("\na few predictions (window -> predicted / actual):")
for row in test_table.rows[:8]:
    window = decode_window(schema, row.vector)
    print(f"  {'>'.join(window):30s} -> {predict(model, row)} / {row.target}")

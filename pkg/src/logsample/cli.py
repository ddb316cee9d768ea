"""Command-line surface.

Subcommands cover each pipeline stage individually (stats, split, sample,
featurize, train-baseline, evaluate) so downstream tools can consume the
intermediate files, and `run` composes the whole cross-validated
experiment from a flat key=value config file.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from . import pipeline
from .baselines import (
    DEFAULT_BUCKET_CAP,
    DEFAULT_ORDER,
    predict,
    read_model,
    train_next_activity,
    train_outcome,
    train_remaining_time,
    write_model,
)
from .errors import LogSampleError
from .features import (
    NEXT_ACTIVITY,
    OUTCOME,
    REMAINING_TIME,
    TASKS,
    FeatureConfig,
    build_schema,
    extract,
    read_feature_csv,
    read_schema_json,
    write_feature_csv,
    write_schema_json,
)
from .folds import assign_folds
from .log_io import (
    CsvColumnMapping,
    read_csv,
    read_schema_file,
    read_xes,
    write_fold_csv,
    write_log_csv,
)
from .metrics import MACRO, WEIGHTED, classification_metrics, regression_metrics
from .model import EventLog, to_simple_log
from .sampling import SamplingPlan, sample, size_reduction
from .variants import build_index


class UsageError(Exception):
    """Raised for malformed invocations; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); keep our code map
        raise UsageError(message)


def _add_input_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="event log file")
    parser.add_argument("--format", choices=("csv", "xes"), default=None,
                        help="input format (default: by file extension)")
    parser.add_argument("--case-col", default=None)
    parser.add_argument("--activity-col", default=None)
    parser.add_argument("--start-col", default=None)
    parser.add_argument("--complete-col", default=None)
    parser.add_argument("--timestamp-format", default=None)
    parser.add_argument("--attr-schema", default=None,
                        help="attribute schema file overriding inference")


def _load_log(args) -> EventLog:
    fmt = args.format
    if fmt is None:
        fmt = "xes" if str(args.input).lower().endswith(".xes") else "csv"
    overrides = read_schema_file(args.attr_schema) if args.attr_schema else None
    if fmt == "xes":
        return read_xes(args.input)
    defaults = CsvColumnMapping()
    mapping = CsvColumnMapping(
        case_id_column=args.case_col or defaults.case_id_column,
        activity_column=args.activity_col or defaults.activity_column,
        start_time_column=args.start_col or defaults.start_time_column,
        complete_time_column=args.complete_col or defaults.complete_time_column,
        timestamp_format=args.timestamp_format or defaults.timestamp_format,
    )
    return read_csv(args.input, mapping=mapping, schema_overrides=overrides)


def _cmd_stats(args) -> int:
    log = _load_log(args)
    simple = to_simple_log(log)
    activities = {ev.activity for ev in log.events.values()}
    lengths = [len(case.event_ids) for case in log.cases.values()]
    lines = [
        f"cases = {log.case_count}",
        f"events = {len(log.events)}",
        f"activities = {len(activities)}",
        f"variants = {len(simple.unique_variants)}",
        f"min_case_length = {min(lengths)}",
        f"max_case_length = {max(lengths)}",
        f"mean_case_length = {sum(lengths) / len(lengths):.3f}",
        f"top_variants (of {len(simple.unique_variants)}):",
    ]
    ranked = sorted(simple.variant_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    for variant, count in ranked[:args.top]:
        lines.append(f"  {count} x {','.join(variant)}")
    print("\n".join(lines))
    return 0


def _cmd_split(args) -> int:
    log = _load_log(args)
    assignment = assign_folds(log, args.folds, args.seed)
    write_fold_csv(assignment, args.output)
    sizes = assignment.fold_sizes()
    print(f"wrote {args.output}: {args.folds} folds, sizes {sizes}")
    return 0


def _build_plan(args) -> SamplingPlan:
    try:
        sort = pipeline.parse_sort(args.sort, args.seed)
        select = pipeline.parse_selection(args.select, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return SamplingPlan(sort=sort, select=select,
                        attributes=pipeline.sort_attributes(sort))


def _cmd_sample(args) -> int:
    log = _load_log(args)
    plan = _build_plan(args)
    index = build_index(log, frozenset(plan.attributes))
    sampled = sample(log, index, plan)
    write_log_csv(sampled, args.output)
    r_s = size_reduction(log, sampled)
    print(f"plan = {plan.label()}")
    print(f"cases = {log.case_count} -> {sampled.case_count}")
    print(f"r_s = {r_s!r}")
    return 0


def _cmd_featurize(args) -> int:
    log = _load_log(args)
    if args.schema_in:
        schema = read_schema_json(args.schema_in)
    else:
        try:
            outcome = pipeline.parse_outcome(args.outcome) if args.outcome else None
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        categorical = (tuple(p for p in args.categorical.split(",") if p)
                       if args.categorical is not None else None)
        numeric = tuple(p for p in (args.numeric or "").split(",") if p)
        config = FeatureConfig(
            window=args.window,
            max_prefix_length=args.max_prefix,
            categorical_attributes=categorical,
            numeric_attributes=numeric,
            outcome=outcome,
        )
        schema = build_schema(log, args.task, config)
    table = extract(log, schema)
    write_feature_csv(table, args.output)
    schema_out = args.schema_out or str(Path(args.output).with_suffix("")) + ".schema.json"
    write_schema_json(schema, schema_out)
    print(f"wrote {args.output}: {len(table)} rows x {schema.vector_width} features")
    print(f"wrote {schema_out}")
    return 0


def _cmd_train_baseline(args) -> int:
    schema = read_schema_json(args.schema)
    table = read_feature_csv(args.features, schema)
    if schema.task == NEXT_ACTIVITY:
        model = train_next_activity(table, args.order)
    elif schema.task == OUTCOME:
        model = train_outcome(table, args.order)
    else:
        model = train_remaining_time(table, args.bucket_cap)
    write_model(model, args.model_out)
    print(f"trained {schema.task} baseline on {len(table)} rows")
    print(f"wrote {args.model_out}")
    return 0


def _cmd_evaluate(args) -> int:
    schema = read_schema_json(args.schema)
    table = read_feature_csv(args.features, schema)
    model = read_model(args.model, schema)
    lines: list[str] = [f"task = {schema.task}", f"rows = {len(table)}"]
    if schema.task == REMAINING_TIME:
        errors = [float(predict(model, row)) - float(row.target)
                  for row in table.rows]
        mae, rmse = regression_metrics(errors)
        lines += [f"mae_seconds = {mae!r}", f"rmse_seconds = {rmse!r}"]
    else:
        pairs = [(str(predict(model, row)), str(row.target))
                 for row in table.rows]
        accuracy, f1 = classification_metrics(pairs, args.average)
        lines += [f"accuracy = {accuracy!r}", f"f1_{args.average} = {f1!r}"]
    text = "\n".join(lines)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _cmd_run(args) -> int:
    values = pipeline.parse_config_text(
        Path(args.config).read_text(encoding="utf-8"))
    for override in args.set or []:
        if "=" not in override:
            raise UsageError(f"--set needs key=value, got {override!r}")
        key, _, value = override.partition("=")
        values[key.strip()] = value.strip()
    try:
        config = pipeline.config_from_mapping(values)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = pipeline.run_pipeline(config, out_dir=args.out_dir)
    aggregate = [row for row in rows if row.fold == pipeline.AGGREGATE]
    print(f"wrote {Path(args.out_dir) / 'report.csv'}")
    print((Path(args.out_dir) / "report.txt").read_text(encoding="utf-8"),
          end="")
    counts = Counter(row.plan for row in rows if row.fold != pipeline.AGGREGATE)
    folds = next(iter(counts.values()), 0)
    print(f"{len(aggregate)} plans x {folds} folds")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="logsample",
                     description="Variant-aware training-set reduction for "
                                 "predictive process monitoring")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[], help="describe an event log")
    _add_input_options(p)
    p.add_argument("--top", type=int, default=10, help="variants to list")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("split", help="assign cases to cross-validation folds")
    _add_input_options(p)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--output", required=True, help="fold assignment CSV")
    p.set_defaults(handler=_cmd_split)

    p = sub.add_parser("sample", help="reduce a log with one sampling plan")
    _add_input_options(p)
    p.add_argument("--select", required=True,
                   help="selection: unique, logK, dK, or randN")
    p.add_argument("--sort", default="arrival",
                   help="sort: arrival[:newest_first], numeric:ATTR[:median], "
                        "mode:A+B, random[:SEED]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="sampled log CSV")
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("featurize", help="extract prefix feature vectors")
    _add_input_options(p)
    p.add_argument("--task", choices=TASKS, default=NEXT_ACTIVITY)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--max-prefix", type=int, default=None,
                   help="prefix cap; 0 disables, default is per task")
    p.add_argument("--categorical", default=None,
                   help="comma-separated categorical attributes")
    p.add_argument("--numeric", default=None,
                   help="comma-separated numeric case attributes")
    p.add_argument("--outcome", default=None,
                   help="outcome predicate attribute:comparator:constant")
    p.add_argument("--schema-in", default=None,
                   help="reuse an existing schema sidecar (test folds)")
    p.add_argument("--schema-out", default=None,
                   help="schema sidecar path (default: <output>.schema.json)")
    p.add_argument("--output", required=True, help="feature CSV")
    p.set_defaults(handler=_cmd_featurize)

    p = sub.add_parser("train-baseline", help="fit a baseline on features")
    p.add_argument("--features", required=True)
    p.add_argument("--schema", required=True, help="schema sidecar JSON")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--bucket-cap", type=int, default=DEFAULT_BUCKET_CAP)
    p.add_argument("--model-out", required=True)
    p.set_defaults(handler=_cmd_train_baseline)

    p = sub.add_parser("evaluate", help="score a trained baseline")
    p.add_argument("--features", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--average", choices=(MACRO, WEIGHTED), default=MACRO)
    p.add_argument("--output", default=None, help="also write metrics here")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("run", help="full cross-validated experiment")
    p.add_argument("--config", required=True, help="flat key=value file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a config entry")
    p.set_defaults(handler=_cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, LogSampleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI boundary
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

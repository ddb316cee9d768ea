"""Cross-validated whole-vs-sampled experiment orchestration.

For every fold, a baseline is fit on the complete training portion and on
each plan's sample of it; both sides are scored on the untouched test fold
and combined into relative metrics. Feature extraction and training are
wall-clock timed (single thread) so the report carries speedup ratios
alongside the quality ratios. Test folds never pass through the sampler.
"""

from __future__ import annotations

import csv
import hashlib
import re
import sys
import time
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Callable, Mapping, Sequence, TextIO

from .baselines import (
    DEFAULT_BUCKET_CAP,
    DEFAULT_ORDER,
    predict,
    train_next_activity,
    train_outcome,
    train_remaining_time,
)
from .errors import UnknownAttribute
from .features import (
    NEXT_ACTIVITY,
    OUTCOME,
    REMAINING_TIME,
    TASKS,
    FeatureConfig,
    FeatureSchema,
    FeatureTable,
    OutcomePredicate,
    build_schema,
    extract,
)
from .folds import FoldAssignment, assign_folds, materialize_fold
from .log_io import CsvColumnMapping, read_csv, read_xes
from .metrics import (
    MACRO,
    WEIGHTED,
    REPORT_COLUMNS,
    AbsoluteMetrics,
    ReportRow,
    classification_metrics,
    format_report_table,
    mean_metrics,
    regression_metrics,
    relative_report,
    report_row_values,
)
from .model import EventLog
from .sampling import (
    ARRIVAL_TIME,
    DIVISION,
    LOGARITHMIC,
    MODE_AFFINITY,
    NUMERIC_CENTROID,
    RANDOM_ORDER,
    RANDOM_TOTAL,
    UNIQUE,
    SamplingPlan,
    SelectionStrategy,
    SortStrategy,
    sample,
    size_reduction,
)
from .variants import build_index

AGGREGATE = "mean"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one `run` needs; built from a flat key=value file."""

    input_path: str | None = None
    input_format: str = "csv"
    mapping: CsvColumnMapping | None = None
    task: str = NEXT_ACTIVITY
    fold_count: int = 5
    fold_seed: int = 13
    repetitions: int = 5
    plans: tuple[SamplingPlan, ...] = ()
    feature: FeatureConfig = field(default_factory=FeatureConfig)
    order: int = DEFAULT_ORDER
    bucket_cap: int = DEFAULT_BUCKET_CAP
    average: str = MACRO
    timing: bool = True


def parse_selection(label: str, seed: int = 0) -> SelectionStrategy:
    """Selection strategy from its compact label: unique, logK, dK, randN."""
    label = label.strip()
    if label == UNIQUE:
        return SelectionStrategy(kind=UNIQUE)
    match = re.fullmatch(r"log(\d+)", label)
    if match:
        return SelectionStrategy(kind=LOGARITHMIC, k=int(match.group(1)))
    match = re.fullmatch(r"d(\d+)", label)
    if match:
        return SelectionStrategy(kind=DIVISION, k=int(match.group(1)))
    match = re.fullmatch(r"rand(\d+)", label)
    if match:
        return SelectionStrategy(kind=RANDOM_TOTAL, n=int(match.group(1)), seed=seed)
    raise ValueError(f"cannot parse selection {label!r} "
                     "(expected unique, logK, dK, or randN)")


def parse_sort(text: str, seed: int = 0) -> SortStrategy:
    """Sort strategy from a compact spec.

    Accepted forms: "arrival", "arrival:newest_first", "numeric:ATTR",
    "numeric:ATTR:median", "mode:ATTR1+ATTR2", "random".
    """
    parts = [p.strip() for p in text.strip().split(":")]
    kind = parts[0]
    if kind == "arrival":
        order = parts[1] if len(parts) > 1 else "oldest_first"
        return SortStrategy(kind=ARRIVAL_TIME, order=order)
    if kind == "numeric":
        if len(parts) < 2 or not parts[1]:
            raise ValueError("numeric sort needs an attribute: numeric:ATTR")
        statistic = parts[2] if len(parts) > 2 else "mean"
        return SortStrategy(kind=NUMERIC_CENTROID, attribute=parts[1],
                            statistic=statistic)
    if kind == "mode":
        if len(parts) < 2 or not parts[1]:
            raise ValueError("mode sort needs attributes: mode:A+B")
        return SortStrategy(kind=MODE_AFFINITY,
                            attributes=tuple(parts[1].split("+")))
    if kind == "random":
        rng_seed = int(parts[1]) if len(parts) > 1 else seed
        return SortStrategy(kind=RANDOM_ORDER, seed=rng_seed)
    raise ValueError(f"cannot parse sort {text!r}")


def parse_outcome(text: str) -> OutcomePredicate:
    """Predicate from "attribute:comparator:constant"."""
    parts = text.split(":", 2)
    if len(parts) != 3:
        raise ValueError("outcome needs attribute:comparator:constant")
    attribute, comparator, raw = parts
    try:
        constant: str | float = float(raw)
    except ValueError:
        constant = raw
    return OutcomePredicate(attribute=attribute, comparator=comparator,
                            constant=constant)


def parse_config_text(text: str) -> dict[str, str]:
    """Flat key = value lines; blank lines and # comments ignored; later
    occurrences of a key override earlier ones."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


_CONFIG_KEYS = {
    "input", "format", "task", "folds", "fold_seed", "repetitions", "plans",
    "sort", "seed", "window", "max_prefix", "categorical", "numeric",
    "outcome", "order", "bucket_cap", "average", "timing",
    "case_col", "activity_col", "start_col", "complete_col",
    "timestamp_format",
}

_FLAGS_ON = ("on", "true", "yes", "1")
_FLAGS_OFF = ("off", "false", "no", "0")


def config_from_mapping(values: Mapping[str, str]) -> ExperimentConfig:
    unknown = sorted(set(values) - _CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")

    def split_list(key: str) -> tuple[str, ...]:
        raw = values.get(key, "")
        return tuple(p.strip() for p in raw.split(",") if p.strip())

    seed = int(values.get("seed", "0"))
    sort = parse_sort(values.get("sort", "arrival"), seed)
    plan_labels = split_list("plans") or ("unique",)
    plans = tuple(
        SamplingPlan(sort=sort, select=parse_selection(label, seed),
                     attributes=sort_attributes(sort))
        for label in plan_labels
    )

    task = values.get("task", NEXT_ACTIVITY)
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")

    outcome = parse_outcome(values["outcome"]) if "outcome" in values else None
    categorical = split_list("categorical") or None
    feature = FeatureConfig(
        window=int(values.get("window", "5")),
        max_prefix_length=(int(values["max_prefix"])
                           if "max_prefix" in values else None),
        categorical_attributes=categorical,
        numeric_attributes=split_list("numeric"),
        outcome=outcome,
    )

    timing_raw = values.get("timing", "on").lower()
    if timing_raw not in _FLAGS_ON + _FLAGS_OFF:
        raise ValueError(f"timing must be on or off, got {timing_raw!r}")

    average = values.get("average", MACRO)
    if average not in (MACRO, WEIGHTED):
        raise ValueError(f"average must be macro or weighted, got {average!r}")

    mapping = None
    if any(k in values for k in ("case_col", "activity_col", "start_col",
                                 "complete_col", "timestamp_format")):
        defaults = CsvColumnMapping()
        mapping = CsvColumnMapping(
            case_id_column=values.get("case_col", defaults.case_id_column),
            activity_column=values.get("activity_col", defaults.activity_column),
            start_time_column=values.get("start_col", defaults.start_time_column),
            complete_time_column=values.get("complete_col",
                                            defaults.complete_time_column),
            timestamp_format=values.get("timestamp_format",
                                        defaults.timestamp_format),
        )

    return ExperimentConfig(
        input_path=values.get("input"),
        input_format=values.get("format", "csv"),
        mapping=mapping,
        task=task,
        fold_count=int(values.get("folds", "5")),
        fold_seed=int(values.get("fold_seed", "13")),
        repetitions=int(values.get("repetitions", "5")),
        plans=plans,
        feature=feature,
        order=int(values.get("order", str(DEFAULT_ORDER))),
        bucket_cap=int(values.get("bucket_cap", str(DEFAULT_BUCKET_CAP))),
        average=average,
        timing=timing_raw in _FLAGS_ON,
    )


def sort_attributes(sort: SortStrategy) -> tuple[str, ...]:
    if sort.kind == NUMERIC_CENTROID and sort.attribute:
        return (sort.attribute,)
    if sort.kind == MODE_AFFINITY:
        return sort.attributes
    return ()


def load_log(config: ExperimentConfig) -> EventLog:
    if not config.input_path:
        raise ValueError("config has no input path")
    if config.input_format == "xes":
        return read_xes(config.input_path)
    if config.input_format == "csv":
        return read_csv(config.input_path, mapping=config.mapping)
    raise ValueError(f"unknown input format {config.input_format!r}")


def _train_for(task: str, order: int, bucket_cap: int) -> Callable[[FeatureTable], object]:
    if task == NEXT_ACTIVITY:
        return lambda table: train_next_activity(table, order)
    if task == OUTCOME:
        return lambda table: train_outcome(table, order)
    return lambda table: train_remaining_time(table, bucket_cap)


def _fit_side(train_log: EventLog, schema: FeatureSchema, trainer,
              repetitions: int, timing: bool):
    """Extract + train, timing both; repeats average out clock noise.

    Training is deterministic, so only the final repetition's model is
    kept. Without timing a single repetition suffices and the recorded
    seconds stay zero so downstream ratios read "not applicable".
    """
    reps = repetitions if timing else 1
    fe_total = 0.0
    train_total = 0.0
    model = None
    for _ in range(reps):
        t0 = time.perf_counter()
        table = extract(train_log, schema)
        t1 = time.perf_counter()
        model = trainer(table)
        t2 = time.perf_counter()
        fe_total += t1 - t0
        train_total += t2 - t1
    if not timing:
        return model, 0.0, 0.0
    return model, fe_total / reps, train_total / reps


def _quality(model, test_table: FeatureTable, task: str,
             average: str) -> tuple[float, float, float, float]:
    if task == REMAINING_TIME:
        errors = [float(predict(model, row)) - float(row.target)  # type: ignore[arg-type]
                  for row in test_table.rows]
        mae, rmse = regression_metrics(errors)
        return 0.0, 0.0, mae, rmse
    pairs = [(str(predict(model, row)), str(row.target))
             for row in test_table.rows]
    accuracy, f1 = classification_metrics(pairs, average)
    return accuracy, f1, 0.0, 0.0


def _validate(config: ExperimentConfig, log: EventLog) -> None:
    if not config.plans:
        raise ValueError("config needs at least one sampling plan")
    if config.repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    for plan in config.plans:
        for name in sort_attributes(plan.sort):
            if name not in log.attribute_schema:
                raise UnknownAttribute(name)


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _tool_version() -> str:
    try:
        return metadata.version("logsample")
    except metadata.PackageNotFoundError:
        return "unversioned"


def write_manifest(config: ExperimentConfig, log: EventLog,
                   assignment: FoldAssignment, path: Path) -> None:
    """Inputs, seeds, and versions of one run, as flat key = value lines.

    Deliberately timestamp-free so reruns with identical inputs produce
    identical manifests.
    """
    lines = [
        f"tool = logsample {_tool_version()}",
        f"python = {sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}",
        f"input = {config.input_path or '<in-memory log>'}",
        f"format = {config.input_format}",
    ]
    if config.input_path:
        lines.append(f"input_sha256 = {_sha256(config.input_path)}")
    lines += [
        f"cases = {log.case_count}",
        f"events = {len(log.events)}",
        f"task = {config.task}",
        f"folds = {config.fold_count}",
        f"fold_seed = {config.fold_seed}",
        f"repetitions = {config.repetitions}",
        f"timing = {'on' if config.timing else 'off'}",
        f"plans = {', '.join(plan.label() for plan in config.plans)}",
        f"order = {config.order}",
        f"bucket_cap = {config.bucket_cap}",
        f"average = {config.average}",
        f"window = {config.feature.window}",
    ]
    # Recorded so reports are auditable: test folds bypass the sampler, and
    # these sizes let a reader confirm test sizes equal fold sizes.
    for fold, size in enumerate(assignment.fold_sizes()):
        lines.append(f"fold_{fold}_test_cases = {size}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class _RowSink:
    """Streams report rows to disk as they are produced, so a failing run
    leaves the completed rows behind."""

    def __init__(self, path: Path | None):
        self._handle: TextIO | None = None
        self._writer = None
        if path is not None:
            self._handle = path.open("w", newline="", encoding="utf-8")
            self._writer = csv.writer(self._handle, lineterminator="\n")
            self._writer.writerow(REPORT_COLUMNS)
            self._handle.flush()

    def emit(self, row: ReportRow) -> None:
        if self._handle is None or self._writer is None:
            return
        self._writer.writerow(report_row_values(row))
        self._handle.flush()

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


def run_pipeline(config: ExperimentConfig, log: EventLog | None = None,
                 out_dir: str | Path | None = None) -> list[ReportRow]:
    """Execute the full protocol; returns per-fold rows plus one aggregate
    row per plan (fold column = "mean", metrics averaged over folds, ratios
    recomputed from the averaged absolutes)."""
    if log is None:
        log = load_log(config)
    _validate(config, log)

    assignment = assign_folds(log, config.fold_count, config.fold_seed)
    out = Path(out_dir) if out_dir is not None else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
        write_manifest(config, log, assignment, out / "manifest.txt")
    sink = _RowSink(out / "report.csv" if out else None)

    trainer = _train_for(config.task, config.order, config.bucket_cap)
    sampler_attrs = frozenset(
        name for plan in config.plans for name in sort_attributes(plan.sort))
    reps_label = str(config.repetitions if config.timing else 1)

    rows: list[ReportRow] = []
    whole_by_fold: list[AbsoluteMetrics] = []
    sampled_by_plan: dict[str, list[AbsoluteMetrics]] = {
        plan.label(): [] for plan in config.plans}
    r_s_by_plan: dict[str, list[float]] = {plan.label(): [] for plan in config.plans}
    sampled_cases_by_plan: dict[str, list[int]] = {
        plan.label(): [] for plan in config.plans}
    train_cases_by_fold: list[int] = []

    try:
        for fold in range(config.fold_count):
            train_log, test_log = materialize_fold(log, assignment, fold)
            # The sampler only ever sees train_log below; the report's
            # manifest records fold sizes so this stays auditable.
            if test_log.case_count != assignment.fold_sizes()[fold]:
                raise AssertionError("test fold does not match assignment")
            train_cases_by_fold.append(train_log.case_count)

            schema = build_schema(train_log, config.task, config.feature)
            test_table = extract(test_log, schema)

            whole_model, whole_fe, whole_train = _fit_side(
                train_log, schema, trainer, config.repetitions, config.timing)
            accuracy, f1, mae, rmse = _quality(
                whole_model, test_table, config.task, config.average)
            whole_abs = AbsoluteMetrics(
                accuracy=accuracy, f1_macro=f1, mae_seconds=mae,
                rmse_seconds=rmse, feature_extraction_seconds=whole_fe,
                training_seconds=whole_train)
            whole_by_fold.append(whole_abs)

            index = build_index(train_log, sampler_attrs)
            for plan in config.plans:
                sampled_log = sample(train_log, index, plan)
                r_s = size_reduction(train_log, sampled_log)
                model, fe, train_seconds = _fit_side(
                    sampled_log, schema, trainer, config.repetitions,
                    config.timing)
                accuracy, f1, mae, rmse = _quality(
                    model, test_table, config.task, config.average)
                sampled_abs = AbsoluteMetrics(
                    accuracy=accuracy, f1_macro=f1, mae_seconds=mae,
                    rmse_seconds=rmse, feature_extraction_seconds=fe,
                    training_seconds=train_seconds)

                label = plan.label()
                sampled_by_plan[label].append(sampled_abs)
                r_s_by_plan[label].append(r_s)
                sampled_cases_by_plan[label].append(sampled_log.case_count)
                row = ReportRow(
                    plan=label, task=config.task, fold=str(fold),
                    repetition=reps_label,
                    train_cases=train_log.case_count,
                    sampled_cases=sampled_log.case_count,
                    report=relative_report(whole_abs, sampled_abs, r_s))
                rows.append(row)
                sink.emit(row)

        whole_mean = mean_metrics(whole_by_fold)
        folds = len(whole_by_fold)
        for plan in config.plans:
            label = plan.label()
            sampled_mean = mean_metrics(sampled_by_plan[label])
            mean_r_s = sum(r_s_by_plan[label]) / folds
            row = ReportRow(
                plan=label, task=config.task, fold=AGGREGATE,
                repetition=reps_label,
                train_cases=sum(train_cases_by_fold) / folds,
                sampled_cases=sum(sampled_cases_by_plan[label]) / folds,
                report=relative_report(whole_mean, sampled_mean, mean_r_s))
            rows.append(row)
            sink.emit(row)
    finally:
        sink.close()

    if out:
        aggregate = [row for row in rows if row.fold == AGGREGATE]
        (out / "report.txt").write_text(
            format_report_table(aggregate, config.task), encoding="utf-8")
    return rows

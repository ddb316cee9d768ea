"""Absolute and relative evaluation metrics plus report emitters.

Relative metrics compare a model trained on the whole training portion
against one trained on a sampled version of it. Orientation is deliberate:
accuracy and F1 put the sampled value in the numerator, error and time
metrics put the whole-log value in the numerator, so a ratio above 1 always
reads "sampling is as good or better, or faster".
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyInput, IoError, ZeroDenominator

MACRO = "macro"
WEIGHTED = "weighted"


@dataclass(frozen=True)
class AbsoluteMetrics:
    """Metrics of one trained model on one test fold.

    Classification runs leave the error fields at 0 and vice versa; the
    timing fields are wall-clock seconds around feature extraction and
    training, measured single-threaded.
    """

    accuracy: float = 0.0
    f1_macro: float = 0.0
    mae_seconds: float = 0.0
    rmse_seconds: float = 0.0
    feature_extraction_seconds: float = 0.0
    training_seconds: float = 0.0


@dataclass(frozen=True)
class MetricsReport:
    """One whole-vs-sampled comparison.

    Ratios are None when both sides are zero, meaning the quantity does not
    apply to the task at hand (no error metrics in a classification run).
    """

    baseline: AbsoluteMetrics
    sampled: AbsoluteMetrics
    r_s: float
    r_acc: float | None
    r_f1: float | None
    r_mae: float | None
    r_rmse: float | None
    r_fe: float | None
    r_t: float | None


def classification_metrics(predictions: Sequence[tuple[str, str]],
                           average: str = MACRO) -> tuple[float, float]:
    """Accuracy and F1 over (predicted label, true label) pairs.

    F1 averages per-class scores over the union of observed classes; a
    class with zero precision+recall denominator contributes 0. The
    averaging mode is macro by default, weighted by true-class support
    on request.
    """
    if not predictions:
        raise EmptyInput("no predictions")
    if average not in (MACRO, WEIGHTED):
        raise ValueError(f"unknown F1 average {average!r}")

    correct = sum(1 for pred, true in predictions if pred == true)
    accuracy = correct / len(predictions)

    classes = sorted({label for pair in predictions for label in pair})
    f1_scores: list[float] = []
    weights: list[int] = []
    for cls in classes:
        tp = sum(1 for pred, true in predictions if pred == cls and true == cls)
        fp = sum(1 for pred, true in predictions if pred == cls and true != cls)
        fn = sum(1 for pred, true in predictions if pred != cls and true == cls)
        denom = 2 * tp + fp + fn
        f1_scores.append(2 * tp / denom if denom else 0.0)
        weights.append(tp + fn)

    if average == MACRO:
        f1 = sum(f1_scores) / len(f1_scores)
    else:
        total = sum(weights)
        f1 = sum(s * w for s, w in zip(f1_scores, weights)) / total if total else 0.0
    return accuracy, f1


def regression_metrics(errors: Sequence[float]) -> tuple[float, float]:
    """MAE and RMSE of signed prediction errors, in seconds."""
    if not errors:
        raise EmptyInput("no errors")
    n = len(errors)
    mae = sum(abs(e) for e in errors) / n
    rmse = math.sqrt(sum(e * e for e in errors) / n)
    return mae, rmse


def _ratio(numerator: float, denominator: float, field: str) -> float | None:
    if denominator > 0:
        return numerator / denominator
    if numerator == 0:
        return None  # quantity absent on both sides: not applicable
    raise ZeroDenominator(field)


def relative_report(baseline: AbsoluteMetrics, sampled: AbsoluteMetrics,
                    r_s: float) -> MetricsReport:
    """Combine whole-log and sampled-log metrics into relative form.

    Pure and recomputable: every ratio is the stated quotient of its two
    inputs. r_s comes from the sampler (case-count reduction) and is
    carried through unchanged.
    """
    return MetricsReport(
        baseline=baseline,
        sampled=sampled,
        r_s=r_s,
        r_acc=_ratio(sampled.accuracy, baseline.accuracy, "accuracy"),
        r_f1=_ratio(sampled.f1_macro, baseline.f1_macro, "f1_macro"),
        r_mae=_ratio(baseline.mae_seconds, sampled.mae_seconds, "mae_seconds"),
        r_rmse=_ratio(baseline.rmse_seconds, sampled.rmse_seconds, "rmse_seconds"),
        r_fe=_ratio(baseline.feature_extraction_seconds,
                    sampled.feature_extraction_seconds,
                    "feature_extraction_seconds"),
        r_t=_ratio(baseline.training_seconds, sampled.training_seconds,
                   "training_seconds"),
    )


# Report rows are keyed by sampling plan label; the fold/repetition columns
# let one file hold both per-fold rows and their aggregate (fold = "mean").
REPORT_COLUMNS = (
    "plan", "task", "fold", "repetition",
    "train_cases", "sampled_cases", "r_s",
    "accuracy_whole", "accuracy_sampled", "r_acc",
    "f1_whole", "f1_sampled", "r_f1",
    "mae_whole", "mae_sampled", "r_mae",
    "rmse_whole", "rmse_sampled", "r_rmse",
    "fe_seconds_whole", "fe_seconds_sampled", "r_fe",
    "train_seconds_whole", "train_seconds_sampled", "r_t",
)


@dataclass(frozen=True)
class ReportRow:
    """One emitted line: a MetricsReport plus its experimental coordinates.

    Case counts are floats because aggregate rows carry fold means.
    """

    plan: str
    task: str
    fold: str
    repetition: str
    train_cases: float
    sampled_cases: float
    report: MetricsReport


def _cell(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _count_cell(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def report_row_values(row: ReportRow) -> list[str]:
    r = row.report
    return [
        row.plan, row.task, row.fold, row.repetition,
        _count_cell(row.train_cases), _count_cell(row.sampled_cases), _cell(r.r_s),
        _cell(r.baseline.accuracy), _cell(r.sampled.accuracy), _cell(r.r_acc),
        _cell(r.baseline.f1_macro), _cell(r.sampled.f1_macro), _cell(r.r_f1),
        _cell(r.baseline.mae_seconds), _cell(r.sampled.mae_seconds), _cell(r.r_mae),
        _cell(r.baseline.rmse_seconds), _cell(r.sampled.rmse_seconds),
        _cell(r.r_rmse),
        _cell(r.baseline.feature_extraction_seconds),
        _cell(r.sampled.feature_extraction_seconds), _cell(r.r_fe),
        _cell(r.baseline.training_seconds), _cell(r.sampled.training_seconds),
        _cell(r.r_t),
    ]


def write_report_csv(rows: Iterable[ReportRow], path: str | Path) -> None:
    path = Path(path)
    try:
        handle = path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    with handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow(report_row_values(row))


def read_report_csv(path: str | Path) -> list[Mapping[str, str]]:
    """Rows as dicts keyed by REPORT_COLUMNS; numeric cells stay strings."""
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    with handle:
        reader = csv.DictReader(handle)
        return [dict(line) for line in reader]


_TABLE_COLUMNS = {
    "next_activity": ("plan", "r_s", "accuracy_whole", "accuracy_sampled",
                      "r_acc", "f1_whole", "f1_sampled", "r_f1", "r_fe", "r_t"),
    "outcome": ("plan", "r_s", "accuracy_whole", "accuracy_sampled",
                "r_acc", "f1_whole", "f1_sampled", "r_f1", "r_fe", "r_t"),
    "remaining_time": ("plan", "r_s", "mae_whole", "mae_sampled", "r_mae",
                       "rmse_whole", "rmse_sampled", "r_rmse", "r_fe", "r_t"),
}


def format_report_table(rows: Sequence[ReportRow], task: str) -> str:
    """Aligned plain-text table of the task's relevant columns, rows in
    the order given (one per sampling configuration)."""
    columns = _TABLE_COLUMNS.get(task)
    if columns is None:
        raise ValueError(f"unknown task {task!r}")
    index = {name: i for i, name in enumerate(REPORT_COLUMNS)}

    def fmt(name: str, raw: str) -> str:
        if name == "plan" or raw == "":
            return raw or "-"
        value = float(raw)
        return f"{value:.4f}" if abs(value) < 10000 else f"{value:.1f}"

    grid = [list(columns)]
    for row in rows:
        values = report_row_values(row)
        grid.append([fmt(name, values[index[name]]) for name in columns])
    widths = [max(len(line[i]) for line in grid) for i in range(len(columns))]
    lines = []
    for line in grid:
        lines.append("  ".join(cell.rjust(w) if i else cell.ljust(w)
                               for i, (cell, w) in enumerate(zip(line, widths))))
    return "\n".join(lines) + "\n"


def mean_metrics(items: Sequence[AbsoluteMetrics]) -> AbsoluteMetrics:
    """Field-wise mean, used to average repetitions and folds."""
    if not items:
        raise EmptyInput("no metrics to average")
    n = len(items)
    return AbsoluteMetrics(
        accuracy=sum(m.accuracy for m in items) / n,
        f1_macro=sum(m.f1_macro for m in items) / n,
        mae_seconds=sum(m.mae_seconds for m in items) / n,
        rmse_seconds=sum(m.rmse_seconds for m in items) / n,
        feature_extraction_seconds=sum(m.feature_extraction_seconds
                                       for m in items) / n,
        training_seconds=sum(m.training_seconds for m in items) / n,
    )

"""Dependency-free baseline predictors.

These stand in for heavyweight sequence models so accuracy preservation can
be verified end to end at desk scale. The n-gram model is deliberately
sensitive to variant-frequency distortion: strategies that flatten the
frequency distribution of variants shift its majority votes, which is the
effect the relative-accuracy metrics are meant to surface.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import EmptyInput, IoError, ParseError, SchemaMismatch, TaskMismatch
from .features import (
    NEXT_ACTIVITY,
    OUTCOME,
    REMAINING_TIME,
    FeatureRow,
    FeatureSchema,
    FeatureTable,
    decode_window,
    require_task,
)

DEFAULT_ORDER = 3
DEFAULT_BUCKET_CAP = 10


@dataclass(frozen=True)
class NgramModel:
    """Backoff n-gram classifier over decoded activity windows.

    counts maps a context (the last k activities, k < order) to label
    frequencies; the empty context doubles as the global majority
    fallback. Ties break toward the lexicographically smaller label.
    """

    schema: FeatureSchema
    order: int = DEFAULT_ORDER
    counts: Mapping[tuple[str, ...], Mapping[str, int]] = field(default_factory=dict)


@dataclass(frozen=True)
class PrefixStatModel:
    """Mean remaining seconds per (last activity, prefix-length bucket).

    Buckets are the prefix length clamped at bucket_cap; unseen buckets
    fall back to the global mean.
    """

    schema: FeatureSchema
    bucket_cap: int = DEFAULT_BUCKET_CAP
    sums: Mapping[tuple[str, int], float] = field(default_factory=dict)
    counts: Mapping[tuple[str, int], int] = field(default_factory=dict)
    global_sum: float = 0.0
    global_count: int = 0

    def bucket_mean(self, key: tuple[str, int]) -> float | None:
        count = self.counts.get(key, 0)
        return self.sums[key] / count if count else None

    @property
    def global_mean(self) -> float:
        return self.global_sum / self.global_count if self.global_count else 0.0


def _train_ngram(table: FeatureTable, order: int) -> NgramModel:
    if not table.rows:
        raise EmptyInput("cannot train on an empty feature table")
    if order < 1:
        raise ValueError("order must be at least 1")
    counts: dict[tuple[str, ...], Counter] = defaultdict(Counter)
    for row in table.rows:
        window = decode_window(table.schema, row.vector)
        label = str(row.target)
        for k in range(min(order - 1, len(window)) + 1):
            context = window[len(window) - k:]
            counts[context][label] += 1
    frozen = {ctx: dict(c) for ctx, c in counts.items()}
    return NgramModel(schema=table.schema, order=order, counts=frozen)


def train_next_activity(table: FeatureTable, order: int = DEFAULT_ORDER) -> NgramModel:
    require_task(table, NEXT_ACTIVITY)
    return _train_ngram(table, order)


def train_outcome(table: FeatureTable, order: int = DEFAULT_ORDER) -> NgramModel:
    """Same machinery over the binary label; predictions are "0"/"1"."""
    require_task(table, OUTCOME)
    return _train_ngram(table, order)


def train_remaining_time(table: FeatureTable,
                         bucket_cap: int = DEFAULT_BUCKET_CAP) -> PrefixStatModel:
    require_task(table, REMAINING_TIME)
    if not table.rows:
        raise EmptyInput("cannot train on an empty feature table")
    if bucket_cap < 1:
        raise ValueError("bucket_cap must be at least 1")
    sums: dict[tuple[str, int], float] = defaultdict(float)
    counts: dict[tuple[str, int], int] = defaultdict(int)
    total, n = 0.0, 0
    for row in table.rows:
        window = decode_window(table.schema, row.vector)
        key = (window[-1], min(row.prefix_length, bucket_cap))
        target = float(row.target)  # type: ignore[arg-type]
        sums[key] += target
        counts[key] += 1
        total += target
        n += 1
    return PrefixStatModel(schema=table.schema, bucket_cap=bucket_cap,
                           sums=dict(sums), counts=dict(counts),
                           global_sum=total, global_count=n)


def _majority(frequencies: Mapping[str, int]) -> str:
    top = max(frequencies.values())
    return min(label for label, count in frequencies.items() if count == top)


def predict(model: NgramModel | PrefixStatModel, row: FeatureRow):
    """Label for n-gram models, seconds for prefix-stat models."""
    if isinstance(model, NgramModel):
        window = decode_window(model.schema, row.vector)
        for k in range(min(model.order - 1, len(window)), -1, -1):
            context = window[len(window) - k:]
            frequencies = model.counts.get(context)
            if frequencies:
                return _majority(frequencies)
        raise EmptyInput("model has no counts")
    if len(row.vector) != model.schema.vector_width:
        raise SchemaMismatch(
            f"row has {len(row.vector)} slots, schema expects "
            f"{model.schema.vector_width}")
    window = decode_window(model.schema, row.vector)
    key = (window[-1], min(row.prefix_length, model.bucket_cap))
    mean = model.bucket_mean(key)
    return mean if mean is not None else model.global_mean


# Flat text serialization for inspection and the train/evaluate hand-off.
# Activities containing tab, pipe, or newline characters are unsupported
# by this format.

def write_model(model: NgramModel | PrefixStatModel, path: str | Path) -> None:
    path = Path(path)
    lines: list[str] = []
    if isinstance(model, NgramModel):
        lines.append("kind=ngram")
        lines.append(f"order={model.order}")
        for context in sorted(model.counts):
            for label in sorted(model.counts[context]):
                lines.append("\t".join(["|".join(context), label,
                                        str(model.counts[context][label])]))
    else:
        lines.append("kind=prefix_stat")
        lines.append(f"bucket_cap={model.bucket_cap}")
        lines.append(f"global\t{model.global_count}\t{model.global_sum!r}")
        for key in sorted(model.sums):
            act, bucket = key
            lines.append("\t".join([act, str(bucket), str(model.counts[key]),
                                    repr(model.sums[key])]))
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_model(path: str | Path,
               schema: FeatureSchema) -> NgramModel | PrefixStatModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or not lines[0].startswith("kind="):
        raise ParseError(str(path), "missing kind header")
    kind = lines[0].split("=", 1)[1]

    if kind == "ngram":
        if len(lines) < 2 or not lines[1].startswith("order="):
            raise ParseError(str(path), "missing order header")
        order = int(lines[1].split("=", 1)[1])
        counts: dict[tuple[str, ...], dict[str, int]] = {}
        for i, line in enumerate(lines[2:], start=3):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(f"{path}:{i}", "expected context<TAB>label<TAB>count")
            context = tuple(parts[0].split("|")) if parts[0] else ()
            counts.setdefault(context, {})[parts[1]] = int(parts[2])
        return NgramModel(schema=schema, order=order, counts=counts)

    if kind == "prefix_stat":
        if len(lines) < 3 or not lines[1].startswith("bucket_cap="):
            raise ParseError(str(path), "missing bucket_cap header")
        bucket_cap = int(lines[1].split("=", 1)[1])
        global_parts = lines[2].split("\t")
        if len(global_parts) != 3 or global_parts[0] != "global":
            raise ParseError(f"{path}:3", "expected global<TAB>count<TAB>sum")
        sums: dict[tuple[str, int], float] = {}
        bucket_counts: dict[tuple[str, int], int] = {}
        for i, line in enumerate(lines[3:], start=4):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ParseError(f"{path}:{i}",
                                 "expected activity<TAB>bucket<TAB>count<TAB>sum")
            key = (parts[0], int(parts[1]))
            bucket_counts[key] = int(parts[2])
            sums[key] = float(parts[3])
        return PrefixStatModel(schema=schema, bucket_cap=bucket_cap,
                               sums=sums, counts=bucket_counts,
                               global_sum=float(global_parts[2]),
                               global_count=int(global_parts[1]))

    raise ParseError(str(path), f"unknown model kind {kind!r}")

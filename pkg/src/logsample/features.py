"""Prefix feature extraction for next-activity, remaining-time, and outcome
prediction.

Every case of length m expands into m prefix rows (lengths 1..m, optionally
capped). A row encodes: one-hots of the last ``window`` activities (left
padded), activity frequency counts over the whole prefix, temporal measures
(sojourn of the last event, elapsed seconds since case start, hour of day),
optional numeric case attributes, and one-hot encoded categorical
attributes. Vocabularies always come from the training log; values unseen
there map to a reserved unknown slot.
"""

from __future__ import annotations

import json
import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping

from .errors import (
    IoError,
    MissingOutcomeLabel,
    ParseError,
    SchemaMismatch,
    TaskMismatch,
    UnknownAttribute,
    WrongAttributeKind,
)
from .model import CASE_SCOPE, MISSING, Event, EventLog

NEXT_ACTIVITY = "next_activity"
REMAINING_TIME = "remaining_time"
OUTCOME = "outcome"
TASKS = (NEXT_ACTIVITY, REMAINING_TIME, OUTCOME)

END = "__END__"  # target of a complete prefix in next-activity mode
UNK = "__UNK__"  # slot for values unseen in the training log
PAD = "__PAD__"  # left-padding slot of the activity window

TEMPORAL_FEATURES = ("sojourn_last_seconds", "elapsed_seconds", "hour_of_day")

#: Prefix row cap applied when the config does not set one.
DEFAULT_REMAINING_TIME_CAP = 40

_COMPARATORS = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
}


@dataclass(frozen=True)
class OutcomePredicate:
    """Case-level labeling rule: attribute comparator constant -> {0, 1}."""

    attribute: str
    comparator: str
    constant: str | float

    def __post_init__(self):
        if self.comparator not in _COMPARATORS:
            raise ValueError(f"unknown comparator {self.comparator!r}")

    def evaluate(self, case_attributes: Mapping[str, object]) -> int:
        value = case_attributes.get(self.attribute, MISSING)
        if value is MISSING:
            raise MissingOutcomeLabel(self.attribute)
        if isinstance(self.constant, float):
            value = float(value)  # type: ignore[arg-type]
        else:
            value = str(value)
        return 1 if _COMPARATORS[self.comparator](value, self.constant) else 0


@dataclass(frozen=True)
class FeatureConfig:
    """Extraction knobs. ``max_prefix_length`` None means the task default
    (uncapped for classification, 40 for remaining time); 0 means explicitly
    uncapped. ``categorical_attributes`` None means all case-level
    categorical attributes of the training log."""

    window: int = 5
    max_prefix_length: int | None = None
    categorical_attributes: tuple[str, ...] | None = None
    numeric_attributes: tuple[str, ...] = ()
    outcome: OutcomePredicate | None = None


@dataclass(frozen=True)
class FeatureSchema:
    """Frozen encoding contract shared by train and test extraction."""

    task: str
    activity_vocabulary: tuple[str, ...]
    categorical_vocabularies: Mapping[str, tuple[str, ...]]
    categorical_scopes: Mapping[str, str]
    numeric_features: tuple[str, ...]
    window: int = 5
    max_prefix_length: int | None = None
    outcome: OutcomePredicate | None = None

    @property
    def vector_width(self) -> int:
        acts = len(self.activity_vocabulary)
        width = self.window * (acts + 2) + acts + len(self.numeric_features)
        for vocab in self.categorical_vocabularies.values():
            width += len(vocab) + 1
        return width

    def feature_names(self) -> list[str]:
        names: list[str] = []
        slots = list(self.activity_vocabulary) + [UNK, PAD]
        for i in range(1, self.window + 1):
            names += [f"win{i}={s}" for s in slots]
        names += [f"freq={a}" for a in self.activity_vocabulary]
        names += list(self.numeric_features)
        for attr in self.categorical_vocabularies:
            names += [f"{attr}={v}" for v in self.categorical_vocabularies[attr]]
            names.append(f"{attr}={UNK}")
        return names

    def header(self) -> list[str]:
        return ["case_id", "prefix_length"] + self.feature_names() + ["target"]


@dataclass(frozen=True)
class FeatureRow:
    case_id: str
    prefix_length: int
    vector: tuple[float, ...]
    target: object  # label str, seconds float, or 0/1 int per task


@dataclass(frozen=True)
class FeatureTable:
    schema: FeatureSchema
    rows: tuple[FeatureRow, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.rows)


def build_schema(train_log: EventLog, task: str,
                 config: FeatureConfig | None = None) -> FeatureSchema:
    """Derive the encoding contract from a training log.

    Vocabularies are sorted so the schema is deterministic; test-side
    extraction must reuse the schema instead of rebuilding it.
    """
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    config = config or FeatureConfig()
    if task == OUTCOME and config.outcome is None:
        raise ValueError("outcome task needs an outcome predicate")

    activities = sorted({ev.activity for ev in train_log.events.values()})

    if config.categorical_attributes is None:
        cat_names = sorted(
            name for name, spec in train_log.attribute_schema.items()
            if spec.kind == "categorical" and spec.scope == CASE_SCOPE)
    else:
        cat_names = list(config.categorical_attributes)
        for name in cat_names:
            spec = train_log.attribute_schema.get(name)
            if spec is None:
                raise UnknownAttribute(name)
            if spec.kind != "categorical":
                raise WrongAttributeKind(f"{name} is {spec.kind}, expected categorical")

    vocabularies: dict[str, tuple[str, ...]] = {}
    scopes: dict[str, str] = {}
    for name in cat_names:
        spec = train_log.attribute_schema[name]
        scopes[name] = spec.scope
        values: set[str] = set()
        if spec.scope == CASE_SCOPE:
            for case in train_log.cases.values():
                v = case.attributes.get(name, MISSING)
                if v is not MISSING:
                    values.add(str(v))
        else:
            for ev in train_log.events.values():
                v = ev.attributes.get(name, MISSING)
                if v is not MISSING:
                    values.add(str(v))
        vocabularies[name] = tuple(sorted(values))

    for name in config.numeric_attributes:
        spec = train_log.attribute_schema.get(name)
        if spec is None:
            raise UnknownAttribute(name)
        if spec.kind != "numeric":
            raise WrongAttributeKind(f"{name} is {spec.kind}, expected numeric")

    cap = config.max_prefix_length
    if cap is None:
        cap = DEFAULT_REMAINING_TIME_CAP if task == REMAINING_TIME else 0
    max_prefix = None if cap == 0 else cap

    return FeatureSchema(
        task=task,
        activity_vocabulary=tuple(activities),
        categorical_vocabularies=vocabularies,
        categorical_scopes=scopes,
        numeric_features=TEMPORAL_FEATURES + tuple(config.numeric_attributes),
        window=config.window,
        max_prefix_length=max_prefix,
        outcome=config.outcome,
    )


def _effective_complete(event: Event):
    return event.complete_time if event.complete_time is not None else event.start_time


def _encode_prefix(schema: FeatureSchema, log: EventLog, case_id: str,
                   events: list[Event], length: int) -> list[float]:
    acts = schema.activity_vocabulary
    act_index = {a: i for i, a in enumerate(acts)}
    slots = len(acts) + 2
    unk_slot, pad_slot = len(acts), len(acts) + 1

    vector = [0.0] * schema.vector_width
    prefix = events[:length]

    # Window one-hots, oldest of the window first, left padded.
    window_acts = [ev.activity for ev in prefix[-schema.window:]]
    padding = schema.window - len(window_acts)
    for pos in range(schema.window):
        base = pos * slots
        if pos < padding:
            vector[base + pad_slot] = 1.0
        else:
            act = window_acts[pos - padding]
            vector[base + act_index.get(act, unk_slot)] = 1.0

    # Whole-prefix frequency counts over the vocabulary.
    freq_base = schema.window * slots
    for ev in prefix:
        idx = act_index.get(ev.activity)
        if idx is not None:
            vector[freq_base + idx] += 1.0

    # Temporal measures plus configured numeric case attributes.
    num_base = freq_base + len(acts)
    last = prefix[-1]
    vector[num_base + 0] = last.sojourn_seconds()
    vector[num_base + 1] = (last.start_time - prefix[0].start_time).total_seconds()
    vector[num_base + 2] = float(last.start_time.hour)
    case_attrs = log.cases[case_id].attributes
    for offset, name in enumerate(schema.numeric_features[len(TEMPORAL_FEATURES):],
                                  start=len(TEMPORAL_FEATURES)):
        value = case_attrs.get(name, MISSING)
        vector[num_base + offset] = 0.0 if value is MISSING else float(value)  # type: ignore[arg-type]

    # Categorical one-hots; unseen or missing values hit the unknown slot.
    base = num_base + len(schema.numeric_features)
    for attr, vocab in schema.categorical_vocabularies.items():
        if schema.categorical_scopes.get(attr, CASE_SCOPE) == CASE_SCOPE:
            value = case_attrs.get(attr, MISSING)
        else:
            value = last.attributes.get(attr, MISSING)
        text = None if value is MISSING else str(value)
        idx = vocab.index(text) if text in vocab else len(vocab)
        vector[base + idx] = 1.0
        base += len(vocab) + 1

    return vector


def _case_rows(schema: FeatureSchema, log: EventLog, case_id: str) -> Iterator[FeatureRow]:
    events = log.case_events(case_id)
    m = len(events)
    limit = m if schema.max_prefix_length is None else min(m, schema.max_prefix_length)

    outcome_target: int | None = None
    if schema.task == OUTCOME:
        assert schema.outcome is not None
        outcome_target = schema.outcome.evaluate(log.cases[case_id].attributes)
    case_end = _effective_complete(events[-1])

    for length in range(1, limit + 1):
        vector = tuple(_encode_prefix(schema, log, case_id, events, length))
        if schema.task == NEXT_ACTIVITY:
            target: object = events[length].activity if length < m else END
        elif schema.task == REMAINING_TIME:
            remaining = (case_end - _effective_complete(events[length - 1])).total_seconds()
            target = max(0.0, remaining)
        else:
            target = outcome_target
        yield FeatureRow(case_id=case_id, prefix_length=length,
                         vector=vector, target=target)


def extract(log: EventLog, schema: FeatureSchema) -> FeatureTable:
    """One row per prefix per case, ordered by (case id, prefix length)."""
    rows: list[FeatureRow] = []
    for case_id in sorted(log.cases):
        rows.extend(_case_rows(schema, log, case_id))
    return FeatureTable(schema=schema, rows=tuple(rows))


def _format_number(x: float) -> str:
    return repr(int(x)) if float(x).is_integer() and abs(x) < 1e15 else repr(x)


def write_feature_csv(table: FeatureTable, path: str | Path) -> None:
    """Deterministic CSV: header names every feature slot, rows keep the
    table's (case id, prefix length) order."""
    path = Path(path)
    try:
        handle = path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    with handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(table.schema.header())
        for row in table.rows:
            target = row.target
            text = _format_number(target) if isinstance(target, float) else str(target)
            writer.writerow([row.case_id, row.prefix_length]
                            + [_format_number(v) for v in row.vector] + [text])


def read_feature_csv(path: str | Path, schema: FeatureSchema) -> FeatureTable:
    """Read rows written by :func:`write_feature_csv` against a schema."""
    path = Path(path)
    expected = schema.header()
    rows: list[FeatureRow] = []
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != expected:
            raise SchemaMismatch(f"{path} header does not match the schema")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                target: object = row[-1]
                if schema.task == REMAINING_TIME:
                    target = float(target)  # type: ignore[arg-type]
                elif schema.task == OUTCOME:
                    target = int(target)  # type: ignore[arg-type]
                rows.append(FeatureRow(
                    case_id=row[0],
                    prefix_length=int(row[1]),
                    vector=tuple(float(v) for v in row[2:-1]),
                    target=target,
                ))
            except ValueError as exc:
                raise ParseError(f"{path} line {lineno}", str(exc)) from exc
    return FeatureTable(schema=schema, rows=tuple(rows))


def decode_window(schema: FeatureSchema, vector: tuple[float, ...]) -> tuple[str, ...]:
    """Recover the last-window activities from a row's one-hot block,
    oldest first, padding dropped, unseen activities as the UNK token."""
    if len(vector) != schema.vector_width:
        raise SchemaMismatch(
            f"vector has {len(vector)} slots, schema expects {schema.vector_width}")
    acts = schema.activity_vocabulary
    slots = len(acts) + 2
    decoded: list[str] = []
    for pos in range(schema.window):
        base = pos * slots
        block = vector[base:base + slots]
        idx = max(range(slots), key=lambda i: block[i])
        if idx == len(acts) + 1:
            continue  # padding
        decoded.append(UNK if idx == len(acts) else acts[idx])
    return tuple(decoded)


def require_task(table: FeatureTable, task: str) -> None:
    if table.schema.task != task:
        raise TaskMismatch(f"table is for {table.schema.task}, expected {task}")


def schema_to_json(schema: FeatureSchema) -> str:
    payload = {
        "task": schema.task,
        "activity_vocabulary": list(schema.activity_vocabulary),
        "categorical_vocabularies": {k: list(v) for k, v in
                                     schema.categorical_vocabularies.items()},
        "categorical_scopes": dict(schema.categorical_scopes),
        "numeric_features": list(schema.numeric_features),
        "window": schema.window,
        "max_prefix_length": schema.max_prefix_length,
        "outcome": None if schema.outcome is None else {
            "attribute": schema.outcome.attribute,
            "comparator": schema.outcome.comparator,
            "constant": schema.outcome.constant,
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def schema_from_json(text: str) -> FeatureSchema:
    payload = json.loads(text)
    outcome = None
    if payload.get("outcome"):
        raw = payload["outcome"]
        constant = raw["constant"]
        if isinstance(constant, (int, float)) and not isinstance(constant, bool):
            constant = float(constant)
        outcome = OutcomePredicate(attribute=raw["attribute"],
                                   comparator=raw["comparator"],
                                   constant=constant)
    return FeatureSchema(
        task=payload["task"],
        activity_vocabulary=tuple(payload["activity_vocabulary"]),
        categorical_vocabularies={k: tuple(v) for k, v in
                                  payload["categorical_vocabularies"].items()},
        categorical_scopes=dict(payload["categorical_scopes"]),
        numeric_features=tuple(payload["numeric_features"]),
        window=payload["window"],
        max_prefix_length=payload["max_prefix_length"],
        outcome=outcome,
    )


def write_schema_json(schema: FeatureSchema, path: str | Path) -> None:
    Path(path).write_text(schema_to_json(schema) + "\n", encoding="utf-8")


def read_schema_json(path: str | Path) -> FeatureSchema:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return schema_from_json(text)

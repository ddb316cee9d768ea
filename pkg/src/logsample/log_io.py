"""Event log parsing and serialization: CSV, a pragmatic XES subset, and
sidecar files (fold assignments, schema overrides).

CSV convention: one row per event, header required, UTF-8, RFC-4180
quoting. Case-level attribute columns carry a ``case:`` prefix; all other
non-mandatory columns are event-level attributes. Empty cells are read as
the MISSING marker, and the literal cells ``true``/``false`` are read as
booleans so that writing and re-reading a log is lossless.

XES support covers the concept and time extensions; any other flat
attribute passes through untouched. Nested list/container values are
skipped with a warning.
"""

from __future__ import annotations

import csv
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Mapping

from .errors import EmptyLog, IoError, MappingError, ParseError
from .folds import FoldAssignment
from .model import (
    CASE_SCOPE,
    EVENT_SCOPE,
    MISSING,
    AttributeSpec,
    EventLog,
    build_event_log,
)

DEFAULT_TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M"
_WRITE_TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"
_CASE_PREFIX = "case:"


@dataclass(frozen=True)
class CsvColumnMapping:
    """Names of the mandatory CSV columns plus attribute column scopes.

    ``attribute_columns`` maps column name to scope ("case" or "event");
    columns not mentioned default to event scope, unless they carry the
    ``case:`` prefix. ``ignore_columns`` are dropped on read (useful for
    external event-id columns, which are re-synthesized on ingest).
    """

    case_id_column: str = "case_id"
    activity_column: str = "activity"
    start_time_column: str = "start_time"
    complete_time_column: str | None = "complete_time"
    timestamp_format: str = DEFAULT_TIMESTAMP_FORMAT
    attribute_columns: Mapping[str, str] = field(default_factory=dict)
    ignore_columns: tuple[str, ...] = ()

    def mandatory(self) -> list[str]:
        # complete_time is data, not structure: used when the column
        # exists, tolerated when it does not.
        return [self.case_id_column, self.activity_column,
                self.start_time_column]


def _parse_timestamp(text: str, fmt: str, position: str) -> datetime:
    """Parse with the configured format, then ISO-8601, then common fallbacks."""
    for candidate in (fmt, _WRITE_TIMESTAMP_FORMAT, DEFAULT_TIMESTAMP_FORMAT):
        try:
            return datetime.strptime(text, candidate)
        except ValueError:
            pass
    try:
        return datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        raise ParseError(position, f"unparseable timestamp {text!r}") from None


def _parse_cell(text: str) -> object:
    if text == "":
        return MISSING
    if text == "true":
        return True
    if text == "false":
        return False
    return text


def read_csv(
    path: str | Path,
    mapping: CsvColumnMapping | None = None,
    schema_overrides: Mapping[str, AttributeSpec] | None = None,
) -> EventLog:
    """Parse a CSV event log into an EventLog.

    The result is independent of row order: rows are sorted by content
    before synthetic event ids are assigned, so shuffled copies of the same
    file produce identical logs.
    """
    mapping = mapping or CsvColumnMapping()
    schema_overrides = schema_overrides or {}
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyLog(f"{path} has no header row") from None

        mandatory = mapping.mandatory()
        if len(set(mandatory)) != len(mandatory):
            raise MappingError(f"mandatory column names are not distinct: {mandatory}")
        missing_cols = [c for c in mandatory if c not in header]
        if missing_cols:
            raise MappingError(f"columns missing from header: {missing_cols}")

        index = {name: header.index(name) for name in header}
        has_complete = (mapping.complete_time_column is not None
                        and mapping.complete_time_column in index)
        attr_cols: list[tuple[str, str, str]] = []  # (column, attr name, scope)
        for col in header:
            if col in mandatory or col in mapping.ignore_columns:
                continue
            if has_complete and col == mapping.complete_time_column:
                continue
            if col in mapping.attribute_columns:
                scope = mapping.attribute_columns[col]
                name = col[len(_CASE_PREFIX):] if col.startswith(_CASE_PREFIX) else col
            elif col.startswith(_CASE_PREFIX):
                scope, name = CASE_SCOPE, col[len(_CASE_PREFIX):]
            else:
                scope, name = EVENT_SCOPE, col
            attr_cols.append((col, name, scope))

        records: list[dict[str, object]] = []
        case_attrs: dict[str, dict[str, object]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"line {lineno}",
                                 f"expected {len(header)} fields, got {len(row)}")
            position = f"line {lineno}"
            case_id = row[index[mapping.case_id_column]]
            activity = row[index[mapping.activity_column]]
            start_text = row[index[mapping.start_time_column]]
            if start_text == "":
                raise ParseError(position, "empty start time")
            start = _parse_timestamp(start_text, mapping.timestamp_format, position)
            complete = None
            if has_complete:
                complete_text = row[index[mapping.complete_time_column]]
                if complete_text:
                    complete = _parse_timestamp(complete_text,
                                                mapping.timestamp_format, position)
            ev_attrs: dict[str, object] = {}
            for col, name, scope in attr_cols:
                value = _parse_cell(row[index[col]])
                if isinstance(value, str) and name in schema_overrides \
                        and schema_overrides[name].kind == "timestamp":
                    value = _parse_timestamp(value, mapping.timestamp_format, position)
                if scope == CASE_SCOPE:
                    slot = case_attrs.setdefault(case_id, {})
                    # First non-missing value of the case wins.
                    if slot.get(name, MISSING) is MISSING:
                        slot[name] = value
                else:
                    ev_attrs[name] = value
            records.append({
                "case_id": case_id,
                "activity": activity,
                "start_time": start,
                "complete_time": complete,
                "attributes": ev_attrs,
            })

    if not records:
        raise EmptyLog(f"{path} has a header but no data rows")

    records.sort(key=_record_sort_key)
    return build_event_log(records, case_attrs, schema_overrides)


def _record_sort_key(rec: Mapping[str, object]):
    complete = rec["complete_time"]
    attrs = rec["attributes"]
    return (
        rec["case_id"],
        rec["start_time"],
        rec["activity"],
        complete.isoformat() if complete is not None else "",
        sorted((k, str(v)) for k, v in attrs.items()),
    )


def _format_cell(value: object) -> str:
    if value is MISSING:
        return ""
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, datetime):
        return value.strftime(_WRITE_TIMESTAMP_FORMAT)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_log_csv(log: EventLog, path: str | Path) -> None:
    """Serialize a log deterministically: cases sorted by case id, events in
    case order, attribute columns sorted by name (case-level ones prefixed
    with ``case:``). Reading the output back yields an isomorphic log, up to
    event id renaming."""
    case_attr_names = sorted(n for n, s in log.attribute_schema.items()
                             if s.scope == CASE_SCOPE)
    event_attr_names = sorted(n for n, s in log.attribute_schema.items()
                              if s.scope == EVENT_SCOPE)
    header = (["case_id", "activity", "start_time", "complete_time"]
              + [_CASE_PREFIX + n for n in case_attr_names]
              + event_attr_names)
    path = Path(path)
    try:
        handle = path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    with handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for case_id in sorted(log.cases):
            case = log.cases[case_id]
            case_cells = [_format_cell(case.attributes.get(n, MISSING))
                          for n in case_attr_names]
            for event in log.case_events(case_id):
                row = [
                    case_id,
                    event.activity,
                    _format_cell(event.start_time),
                    _format_cell(event.complete_time) if event.complete_time else "",
                ]
                row += case_cells
                row += [_format_cell(event.attributes.get(n, MISSING))
                        for n in event_attr_names]
                writer.writerow(row)


def _strip_ns(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


_XES_SCALAR_TAGS = {"string", "date", "int", "float", "boolean", "id"}


def _xes_attr(el: ET.Element, position: str) -> tuple[str, object] | None:
    tag = _strip_ns(el.tag)
    key = el.get("key")
    value = el.get("value")
    if key is None:
        return None
    if tag not in _XES_SCALAR_TAGS:
        warnings.warn(f"{position}: skipping unsupported XES value element "
                      f"<{tag}> for key {key!r}")
        return None
    if tag == "date":
        if value is None:
            raise ParseError(position, f"date attribute {key!r} has no value")
        return key, _parse_timestamp(value, "", position)
    if tag in ("int", "float"):
        try:
            return key, float(value)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise ParseError(position, f"bad numeric value {value!r} for {key!r}") from None
    if tag == "boolean":
        return key, (value == "true")
    return key, value if value is not None else ""


def read_xes(path: str | Path) -> EventLog:
    """Parse an XES file (concept and time extensions) into an EventLog.

    Trace-level attributes become case attributes, event-level ones become
    event attributes; unknown extensions pass through as plain attributes.
    Traces without events are skipped with a warning, since every case must
    have a non-empty variant.
    """
    path = Path(path)
    try:
        tree = ET.parse(path)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except ET.ParseError as exc:
        raise ParseError(f"{path} {exc.position}", str(exc)) from exc

    root = tree.getroot()
    records: list[dict[str, object]] = []
    case_attrs: dict[str, dict[str, object]] = {}
    trace_no = 0
    for trace in root:
        if _strip_ns(trace.tag) != "trace":
            continue
        trace_no += 1
        position = f"trace {trace_no}"
        attrs: dict[str, object] = {}
        events: list[ET.Element] = []
        for child in trace:
            if _strip_ns(child.tag) == "event":
                events.append(child)
            else:
                parsed = _xes_attr(child, position)
                if parsed:
                    attrs[parsed[0]] = parsed[1]
        case_id = str(attrs.pop("concept:name", f"trace_{trace_no}"))
        if not events:
            warnings.warn(f"{position} ({case_id!r}): no events, skipped")
            continue
        case_attrs[case_id] = attrs
        for ev_no, event_el in enumerate(events, start=1):
            ev_position = f"{position} event {ev_no}"
            ev_attrs: dict[str, object] = {}
            for child in event_el:
                parsed = _xes_attr(child, ev_position)
                if parsed:
                    ev_attrs[parsed[0]] = parsed[1]
            activity = ev_attrs.pop("concept:name", None)
            start = ev_attrs.pop("time:timestamp", None)
            if activity is None:
                raise ParseError(ev_position, "event lacks concept:name")
            if not isinstance(start, datetime):
                raise ParseError(ev_position, "event lacks time:timestamp")
            records.append({
                "case_id": case_id,
                "activity": str(activity),
                "start_time": start,
                "complete_time": None,
                "attributes": ev_attrs,
            })

    if not records:
        raise EmptyLog(f"{path} contains no traces with events")
    return build_event_log(records, case_attrs)


def read_schema_file(path: str | Path) -> dict[str, AttributeSpec]:
    """Read a flat ``name=kind,scope`` override file; # starts a comment."""
    overrides: dict[str, AttributeSpec] = {}
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}", f"expected name=kind,scope: {line!r}")
        name, spec = line.split("=", 1)
        parts = [p.strip() for p in spec.split(",")]
        if len(parts) != 2 or parts[0] not in ("categorical", "numeric", "timestamp") \
                or parts[1] not in (CASE_SCOPE, EVENT_SCOPE):
            raise ParseError(f"line {lineno}", f"bad kind,scope: {spec!r}")
        overrides[name.strip()] = AttributeSpec(kind=parts[0], scope=parts[1])
    return overrides


def write_schema_file(schema: Mapping[str, AttributeSpec], path: str | Path) -> None:
    lines = [f"{name}={spec.kind},{spec.scope}"
             for name, spec in sorted(schema.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_fold_csv(assignment: FoldAssignment, path: str | Path) -> None:
    """Persist a fold assignment as (case_id, fold) rows."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["case_id", "fold"])
        for case_id in sorted(assignment.assignment):
            writer.writerow([case_id, assignment.assignment[case_id]])


def read_fold_csv(path: str | Path, seed: int = -1) -> FoldAssignment:
    """Read a fold assignment written by :func:`write_fold_csv`.

    The seed is not stored in the file; pass it when known, else -1.
    """
    path = Path(path)
    assignment: dict[str, int] = {}
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["case_id", "fold"]:
            raise ParseError("line 1", f"unexpected fold file header: {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                assignment[row[0]] = int(row[1])
            except (IndexError, ValueError):
                raise ParseError(f"line {lineno}", f"bad fold row: {row}") from None
    fold_count = max(assignment.values()) + 1 if assignment else 0
    return FoldAssignment(fold_count=fold_count, assignment=assignment, seed=seed)

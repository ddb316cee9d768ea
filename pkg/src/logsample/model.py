"""Core immutable event log model: events, cases, logs, and simple logs.

An event log couples a set of cases with their events. Every event belongs
to a case, every case has a non-empty variant (its ordered activity
sequence), and the variant is always derived from the events, never stored
independently. Logs are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping

from .errors import EmptyLog, MissingMandatoryField


class _Missing:
    """Sentinel for an absent attribute value (distinct from empty string)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MISSING"

    def __bool__(self):
        return False


#: Marker stored for attribute cells that carry no value. Summary and
#: distance computations skip it.
MISSING = _Missing()

#: Attribute values are restricted to flat scalars; nested containers are
#: not supported.
AttrValue = str | float | bool | datetime | _Missing

CATEGORICAL = "categorical"
NUMERIC = "numeric"
TIMESTAMP = "timestamp"

CASE_SCOPE = "case"
EVENT_SCOPE = "event"


@dataclass(frozen=True)
class AttributeSpec:
    """Declared kind and scope of one attribute."""

    kind: str  # categorical | numeric | timestamp
    scope: str  # case | event


@dataclass(frozen=True)
class Event:
    """One recorded activity execution.

    ``start_time`` (and ``complete_time`` when present) are UTC-aware
    datetimes truncated to second precision. ``complete_time`` is None for
    atomic events; duration-based features treat that as zero duration.
    """

    event_id: str
    case_id: str
    activity: str
    start_time: datetime
    complete_time: datetime | None = None
    attributes: Mapping[str, object] = field(default_factory=dict)

    def sojourn_seconds(self) -> float:
        """Completion minus start in seconds; 0.0 for atomic events."""
        if self.complete_time is None:
            return 0.0
        return (self.complete_time - self.start_time).total_seconds()


@dataclass(frozen=True)
class Case:
    """All events of one process instance, in execution order."""

    case_id: str
    event_ids: tuple[str, ...]
    attributes: Mapping[str, object] = field(default_factory=dict)
    variant: tuple[str, ...] = ()


@dataclass(frozen=True)
class EventLog:
    """A set of cases and their events plus the declared attribute schema.

    ``cases`` preserves a deterministic case order; ``events`` is keyed by
    event id. The schema maps attribute name to (kind, scope); it covers
    every non-mandatory attribute seen anywhere in the log.
    """

    cases: Mapping[str, Case]
    events: Mapping[str, Event]
    attribute_schema: Mapping[str, AttributeSpec] = field(default_factory=dict)

    @property
    def case_count(self) -> int:
        return len(self.cases)

    def case_events(self, case_id: str) -> list[Event]:
        """Events of one case in execution order."""
        return [self.events[eid] for eid in self.cases[case_id].event_ids]

    def restrict(self, case_ids: Iterable[str]) -> EventLog:
        """Sub-log containing exactly the given cases, in the given order.

        Events and attribute maps are restricted accordingly; the schema is
        carried over unchanged.
        """
        kept_cases: dict[str, Case] = {}
        kept_events: dict[str, Event] = {}
        for cid in case_ids:
            case = self.cases[cid]
            kept_cases[cid] = case
            for eid in case.event_ids:
                kept_events[eid] = self.events[eid]
        return EventLog(cases=kept_cases, events=kept_events,
                        attribute_schema=self.attribute_schema)


@dataclass(frozen=True)
class SimpleLog:
    """Multiset of variants of a log; its size equals the case count."""

    variant_counts: Mapping[tuple[str, ...], int]

    def __len__(self) -> int:
        return sum(self.variant_counts.values())

    @property
    def unique_variants(self) -> frozenset[tuple[str, ...]]:
        return frozenset(self.variant_counts)


def to_utc_seconds(ts: datetime) -> datetime:
    """Normalize a datetime to UTC with second precision.

    Naive datetimes are taken to already be UTC.
    """
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    else:
        ts = ts.astimezone(timezone.utc)
    return ts.replace(microsecond=0)


def _looks_numeric(value: object) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, (int, float)):
        return True
    if isinstance(value, str):
        try:
            float(value)
        except ValueError:
            return False
        return True
    return False


def _infer_kind(values: list[object]) -> str:
    if values and all(isinstance(v, datetime) for v in values):
        return TIMESTAMP
    if values and all(_looks_numeric(v) for v in values):
        return NUMERIC
    return CATEGORICAL


def _coerce(value: object, kind: str) -> object:
    if value is MISSING:
        return MISSING
    if kind == NUMERIC:
        return float(value)  # type: ignore[arg-type]
    if kind == TIMESTAMP and isinstance(value, datetime):
        return to_utc_seconds(value)
    if isinstance(value, (bool, datetime)):
        return value
    return str(value)


def build_event_log(
    raw_events: Iterable[Mapping[str, object]],
    raw_case_attrs: Mapping[str, Mapping[str, object]] | None = None,
    schema_overrides: Mapping[str, AttributeSpec] | None = None,
) -> EventLog:
    """Assemble a validated EventLog from parsed event records.

    Each record needs ``case_id``, ``activity`` and ``start_time`` (a
    datetime); ``complete_time``, ``event_id`` and ``attributes`` are
    optional. Records without an event id get sequential synthetic ids in
    input order. Within a case, events are ordered by start time with ties
    broken by event id; the case variant is derived from that order.

    Attribute kinds are inferred per attribute (timestamp if every value is
    a datetime, numeric if every value parses as a number, categorical
    otherwise) unless ``schema_overrides`` pins them. Values are coerced to
    their declared kind; ``MISSING`` cells are kept as-is and excluded from
    inference.
    """
    records = list(raw_events)
    if not records:
        raise EmptyLog("no events")

    events: dict[str, Event] = {}
    case_event_ids: dict[str, list[str]] = {}
    seq = 0
    for rec in records:
        case_id = rec.get("case_id")
        activity = rec.get("activity")
        start = rec.get("start_time")
        if case_id in (None, "") or activity in (None, "") or start is None:
            raise MissingMandatoryField(
                f"record {rec!r} lacks case_id, activity, or start_time")
        if not isinstance(start, datetime):
            raise MissingMandatoryField(
                f"start_time of record {rec!r} is not a datetime")
        complete = rec.get("complete_time")
        if complete is not None:
            complete = to_utc_seconds(complete)
        start = to_utc_seconds(start)
        if complete is not None and complete < start:
            raise ValueError(
                f"complete_time precedes start_time in record {rec!r}")
        event_id = rec.get("event_id")
        if event_id in (None, ""):
            seq += 1
            event_id = f"e{seq:06d}"
        event_id = str(event_id)
        events[event_id] = Event(
            event_id=event_id,
            case_id=str(case_id),
            activity=str(activity),
            start_time=start,
            complete_time=complete,
            attributes=dict(rec.get("attributes") or {}),
        )
        case_event_ids.setdefault(str(case_id), []).append(event_id)

    raw_case_attrs = raw_case_attrs or {}
    schema = _infer_schema(events.values(), case_event_ids, raw_case_attrs,
                           schema_overrides or {})

    coerced_events = {
        eid: Event(
            event_id=ev.event_id,
            case_id=ev.case_id,
            activity=ev.activity,
            start_time=ev.start_time,
            complete_time=ev.complete_time,
            attributes={
                name: _coerce(value, schema[name].kind) if name in schema else value
                for name, value in ev.attributes.items()
            },
        )
        for eid, ev in events.items()
    }

    cases: dict[str, Case] = {}
    for case_id in sorted(case_event_ids):
        ordered = sorted(case_event_ids[case_id],
                         key=lambda eid: (coerced_events[eid].start_time, eid))
        variant = tuple(coerced_events[eid].activity for eid in ordered)
        attrs = {
            name: _coerce(value, schema[name].kind) if name in schema else value
            for name, value in (raw_case_attrs.get(case_id) or {}).items()
        }
        cases[case_id] = Case(case_id=case_id, event_ids=tuple(ordered),
                              attributes=attrs, variant=variant)

    return EventLog(cases=cases, events=coerced_events, attribute_schema=schema)


def _infer_schema(
    events: Iterable[Event],
    case_event_ids: Mapping[str, list[str]],
    raw_case_attrs: Mapping[str, Mapping[str, object]],
    overrides: Mapping[str, AttributeSpec],
) -> dict[str, AttributeSpec]:
    case_values: dict[str, list[object]] = {}
    for attrs in raw_case_attrs.values():
        for name, value in attrs.items():
            if value is not MISSING:
                case_values.setdefault(name, []).append(value)
            else:
                case_values.setdefault(name, [])
    event_values: dict[str, list[object]] = {}
    for ev in events:
        for name, value in ev.attributes.items():
            if value is not MISSING:
                event_values.setdefault(name, []).append(value)
            else:
                event_values.setdefault(name, [])

    schema: dict[str, AttributeSpec] = {}
    # Case scope wins when the same name occurs at both levels.
    for name in sorted(case_values):
        schema[name] = overrides.get(name, AttributeSpec(
            kind=_infer_kind(case_values[name]), scope=CASE_SCOPE))
    for name in sorted(event_values):
        if name not in schema:
            schema[name] = overrides.get(name, AttributeSpec(
                kind=_infer_kind(event_values[name]), scope=EVENT_SCOPE))
    for name, spec in overrides.items():
        schema.setdefault(name, spec)
    return schema


def to_simple_log(log: EventLog) -> SimpleLog:
    """Multiset of variants: variant -> number of cases carrying it."""
    counts: dict[tuple[str, ...], int] = {}
    for case in log.cases.values():
        counts[case.variant] = counts.get(case.variant, 0) + 1
    return SimpleLog(variant_counts=counts)

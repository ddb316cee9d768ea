from datetime import datetime, timedelta, timezone

import pytest

from logsample import (
    CASE_SCOPE,
    EVENT_SCOPE,
    MISSING,
    AttributeSpec,
    EmptyLog,
    MissingMandatoryField,
    build_event_log,
    to_simple_log,
)
from logsample.model import to_utc_seconds

T0 = datetime(2024, 1, 1, 12, 0, tzinfo=timezone.utc)


def _ev(case_id, activity, minute, **attrs):
    rec = {"case_id": case_id, "activity": activity,
           "start_time": T0 + timedelta(minutes=minute)}
    if attrs:
        rec["attributes"] = attrs
    return rec


def test_events_ordered_by_start_time_within_case():
    log = build_event_log([_ev("c", "b", 5), _ev("c", "a", 0), _ev("c", "c", 9)])
    assert log.cases["c"].variant == ("a", "b", "c")
    events = log.case_events("c")
    assert [e.activity for e in events] == ["a", "b", "c"]


def test_start_time_ties_break_by_event_id_ingest_order():
    log = build_event_log([_ev("c", "x", 0), _ev("c", "y", 0)])
    assert log.cases["c"].variant == ("x", "y")


def test_missing_mandatory_fields_rejected():
    with pytest.raises(MissingMandatoryField):
        build_event_log([{"case_id": "c", "activity": "a"}])
    with pytest.raises(MissingMandatoryField):
        build_event_log([{"case_id": "", "activity": "a", "start_time": T0}])
    with pytest.raises(MissingMandatoryField):
        build_event_log([{"case_id": "c", "activity": None, "start_time": T0}])


def test_empty_log_rejected():
    with pytest.raises(EmptyLog):
        build_event_log([])


def test_schema_inference_kinds():
    log = build_event_log(
        [_ev("c", "a", 0, cost="12.5", grade="B"),
         _ev("c", "b", 1, cost="3", grade="A")],
        {"c": {"region": "north", "budget": 1000}},
    )
    schema = log.attribute_schema
    assert schema["cost"] == AttributeSpec("numeric", EVENT_SCOPE)
    assert schema["grade"] == AttributeSpec("categorical", EVENT_SCOPE)
    assert schema["region"] == AttributeSpec("categorical", CASE_SCOPE)
    assert schema["budget"] == AttributeSpec("numeric", CASE_SCOPE)
    assert log.events[log.cases["c"].event_ids[0]].attributes["cost"] == 12.5


def test_missing_values_survive_and_skip_inference():
    log = build_event_log(
        [_ev("c", "a", 0, cost=MISSING), _ev("c", "b", 1, cost="7")])
    assert log.attribute_schema["cost"].kind == "numeric"
    first = log.events[log.cases["c"].event_ids[0]]
    assert first.attributes["cost"] is MISSING


def test_sojourn_seconds():
    rec = _ev("c", "a", 0)
    rec["complete_time"] = rec["start_time"] + timedelta(seconds=90)
    log = build_event_log([rec])
    event = log.events[log.cases["c"].event_ids[0]]
    assert event.sojourn_seconds() == 90.0
    bare = build_event_log([_ev("d", "a", 0)])
    only = bare.events[bare.cases["d"].event_ids[0]]
    assert only.sojourn_seconds() == 0.0


def test_restrict_keeps_whole_cases():
    log = build_event_log([_ev("c1", "a", 0), _ev("c1", "b", 1),
                           _ev("c2", "a", 2)])
    sub = log.restrict(["c2"])
    assert sub.case_count == 1
    assert set(sub.cases) == {"c2"}
    assert len(sub.events) == 1
    # schema carried over unchanged
    assert sub.attribute_schema == log.attribute_schema


def test_simple_log_is_variant_multiset(claims_log):
    simple = to_simple_log(claims_log)
    assert len(simple) == 10
    assert simple.variant_counts[("a", "b", "c", "d")] == 5
    assert simple.variant_counts[("a", "c", "b", "d")] == 3
    assert simple.variant_counts[("a", "c", "c", "d")] == 1
    assert simple.variant_counts[("a", "c", "d")] == 1
    assert len(simple.unique_variants) == 4


def test_to_utc_seconds_normalizes():
    naive = datetime(2024, 6, 1, 10, 30, 15, 123456)
    normalized = to_utc_seconds(naive)
    assert normalized.tzinfo == timezone.utc
    assert normalized.microsecond == 0
    offset = datetime(2024, 6, 1, 12, 0, tzinfo=timezone(timedelta(hours=2)))
    assert to_utc_seconds(offset).hour == 10

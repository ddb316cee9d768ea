from datetime import datetime, timedelta, timezone

import pytest

from logsample import UnknownAttribute, build_event_log, build_index
from logsample.variants import case_numeric_value

T0 = datetime(2024, 1, 1, tzinfo=timezone.utc)


def test_groups_match_variant_partition(claims_log):
    index = build_index(claims_log, frozenset({"amount"}))
    by_variant = {g.variant: g for g in index.groups}
    assert set(by_variant) == {("a", "b", "c", "d"), ("a", "c", "b", "d"),
                               ("a", "c", "c", "d"), ("a", "c", "d")}
    assert set(by_variant[("a", "b", "c", "d")].case_ids) == {"c1", "c3", "c4",
                                                              "c9", "c10"}
    assert set(by_variant[("a", "c", "b", "d")].case_ids) == {"c2", "c5", "c8"}
    assert by_variant[("a", "c", "c", "d")].case_ids == ("c6",)
    assert by_variant[("a", "c", "d")].case_ids == ("c7",)
    assert index.source_case_count == 10


def test_groups_ordered_by_frequency_then_variant(claims_log):
    index = build_index(claims_log)
    assert [g.frequency for g in index.groups] == [5, 3, 1, 1]
    # equal frequencies order lexicographically by variant
    assert index.groups[2].variant < index.groups[3].variant


def test_numeric_summaries(claims_log):
    index = build_index(claims_log, frozenset({"amount"}))
    by_variant = {g.variant: g for g in index.groups}
    s1 = by_variant[("a", "b", "c", "d")].numeric_summaries["amount"]
    s2 = by_variant[("a", "c", "b", "d")].numeric_summaries["amount"]
    assert s1.mean == 500.0
    assert s2.mean == 460.0
    assert s1.median == 400.0  # 100,260,400,800,940
    assert s2.median == 600.0  # 60,600,720
    assert s1.count == 5


def _attr_log():
    events = []
    channels = {"x1": "web", "x2": "web", "x3": "phone"}
    for cid in channels:
        for i, act in enumerate("ab"):
            events.append({"case_id": cid, "activity": act,
                           "start_time": T0 + timedelta(minutes=i)})
    return build_event_log(events, {cid: {"channel": ch}
                                    for cid, ch in channels.items()})


def test_categorical_mode_counts_case_scope():
    log = _attr_log()
    index = build_index(log, frozenset({"channel"}))
    group = index.groups[0]
    assert group.frequency == 3
    assert group.modal_value("channel") == "web"  # 2 web vs 1 phone


def test_modal_value_tie_breaks_lexicographically():
    events = [
        {"case_id": "a", "activity": "x", "start_time": T0},
        {"case_id": "b", "activity": "x", "start_time": T0},
    ]
    log = build_event_log(events, {"a": {"kind": "zeta"}, "b": {"kind": "alpha"}})
    index = build_index(log, frozenset({"kind"}))
    assert index.groups[0].modal_value("kind") == "alpha"


def test_event_scope_numeric_uses_per_case_mean():
    events = [
        {"case_id": "c", "activity": "x", "start_time": T0,
         "attributes": {"load": "10"}},
        {"case_id": "c", "activity": "y",
         "start_time": T0 + timedelta(minutes=1), "attributes": {"load": "30"}},
    ]
    log = build_event_log(events)
    assert case_numeric_value(log, "c", "load") == 20.0
    index = build_index(log, frozenset({"load"}))
    assert index.groups[0].numeric_summaries["load"].mean == 20.0


def test_unknown_attribute_raises(claims_log):
    with pytest.raises(UnknownAttribute):
        case_numeric_value(claims_log, "c1", "no_such")

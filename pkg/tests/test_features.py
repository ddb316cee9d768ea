from datetime import datetime, timedelta, timezone

import pytest

from logsample import (
    END,
    MissingOutcomeLabel,
    FeatureConfig,
    OutcomePredicate,
    SamplingPlan,
    SchemaMismatch,
    SelectionStrategy,
    build_event_log,
    build_index,
    build_schema,
    decode_window,
    extract,
    read_feature_csv,
    read_schema_json,
    sample,
    write_feature_csv,
    write_schema_json,
)

T0 = datetime(2024, 1, 1, 6, 0, tzinfo=timezone.utc)


def _simple_log(traces, case_attrs=None):
    events = []
    for cid, acts in traces.items():
        for i, act in enumerate(acts):
            events.append({"case_id": cid, "activity": act,
                           "start_time": T0 + timedelta(minutes=i)})
    return build_event_log(events, case_attrs)


def test_activity_vocabulary_from_training_log(claims_log):
    schema = build_schema(claims_log, "next_activity")
    assert schema.activity_vocabulary == ("a", "b", "c", "d")
    assert schema.window == 5
    assert schema.max_prefix_length is None


def test_remaining_time_default_cap_is_40(claims_log):
    schema = build_schema(claims_log, "remaining_time")
    assert schema.max_prefix_length == 40
    uncapped = build_schema(claims_log, "remaining_time",
                            FeatureConfig(max_prefix_length=0))
    assert uncapped.max_prefix_length is None
    capped = build_schema(claims_log, "next_activity",
                          FeatureConfig(max_prefix_length=3))
    assert capped.max_prefix_length == 3


def test_row_count_law(claims_log):
    table = extract(claims_log, build_schema(claims_log, "next_activity"))
    expected = sum(len(c.event_ids) for c in claims_log.cases.values())
    assert len(table) == expected == 39
    capped = extract(claims_log, build_schema(
        claims_log, "next_activity", FeatureConfig(max_prefix_length=2)))
    assert len(capped) == sum(min(len(c.event_ids), 2)
                              for c in claims_log.cases.values()) == 20


def test_rows_ordered_by_case_then_prefix_length(claims_log):
    table = extract(claims_log, build_schema(claims_log, "next_activity"))
    keys = [(r.case_id, r.prefix_length) for r in table.rows]
    assert keys == sorted(keys)


def test_next_activity_targets_end_with_end_marker(claims_log):
    table = extract(claims_log, build_schema(claims_log, "next_activity"))
    c1 = [r for r in table.rows if r.case_id == "c1"]
    assert [r.target for r in c1] == ["b", "c", "d", END]


def test_window_one_hot_layout(claims_log):
    schema = build_schema(claims_log, "next_activity")
    assert schema.vector_width == 5 * 6 + 4 + 3
    table = extract(claims_log, schema)
    row = next(r for r in table.rows
               if r.case_id == "c1" and r.prefix_length == 2)
    v = row.vector
    # window slots per position: a, b, c, d, UNK, PAD; three PAD positions
    assert v[5] == v[11] == v[17] == 1.0
    assert v[18] == 1.0  # position 4 holds "a"
    assert v[24 + 1] == 1.0  # position 5 holds "b"
    assert sum(v[:30]) == 5.0  # exactly one hot slot per window position
    # whole-prefix frequency block
    assert v[30:34] == (1.0, 1.0, 0.0, 0.0)


def test_temporal_features(claims_log):
    schema = build_schema(claims_log, "next_activity")
    table = extract(claims_log, schema)
    base = 5 * 6 + 4
    for r in (row for row in table.rows if row.case_id == "c1"):
        assert r.vector[base] == 300.0  # five-minute sojourn
        assert r.vector[base + 1] == (r.prefix_length - 1) * 600.0
        assert r.vector[base + 2] == 9.0


def test_remaining_time_targets(claims_log):
    schema = build_schema(claims_log, "remaining_time")
    table = extract(claims_log, schema)
    c1 = [r.target for r in table.rows if r.case_id == "c1"]
    assert c1 == [1800.0, 1200.0, 600.0, 0.0]
    assert all(r.target >= 0 for r in table.rows)


def test_single_event_case_remaining_time_is_zero():
    log = _simple_log({"solo": "a"})
    table = extract(log, build_schema(log, "remaining_time"))
    assert len(table) == 1
    assert table.rows[0].target == 0.0


def test_unseen_activity_encodes_to_unknown_slot():
    train = _simple_log({"t1": "abc"})
    schema = build_schema(train, "next_activity")
    test = _simple_log({"x1": "azc"})
    table = extract(test, schema)
    row = next(r for r in table.rows if r.prefix_length == 2)
    slots = len(schema.activity_vocabulary) + 2
    unk = len(schema.activity_vocabulary)
    assert row.vector[4 * slots + unk] == 1.0  # newest window position
    freq_base = 5 * slots
    assert sum(row.vector[freq_base:freq_base + 3]) == 1.0  # z not counted


def test_outcome_predicate_labels(claims_log):
    predicate = OutcomePredicate("amount", ">", 500.0)
    schema = build_schema(claims_log, "outcome",
                          FeatureConfig(outcome=predicate))
    table = extract(claims_log, schema)
    by_case = {}
    for row in table.rows:
        by_case.setdefault(row.case_id, set()).add(row.target)
    assert by_case["c1"] == {0}  # amount 100
    assert by_case["c2"] == {1}  # amount 720
    assert by_case["c8"] == {0}  # amount 60


def test_outcome_missing_label_raises():
    log = _simple_log({"n1": "ab"}, {"n1": {}})
    predicate = OutcomePredicate("verdict", "==", "won")
    schema = build_schema(log, "outcome", FeatureConfig(outcome=predicate))
    with pytest.raises(MissingOutcomeLabel):
        extract(log, schema)


def test_categorical_one_hot_with_unknown_slot():
    train = _simple_log({"k1": "ab", "k2": "ab"},
                        {"k1": {"channel": "web"}, "k2": {"channel": "phone"}})
    schema = build_schema(train, "next_activity")
    assert schema.categorical_vocabularies == {"channel": ("phone", "web")}
    test = _simple_log({"k3": "ab"}, {"k3": {"channel": "fax"}})
    table = extract(test, schema)
    row = table.rows[0]
    cat_base = schema.vector_width - 3
    assert row.vector[cat_base:] == (0.0, 0.0, 1.0)  # fax -> unknown slot
    own = extract(train, schema)
    first = next(r for r in own.rows if r.case_id == "k1")
    assert first.vector[cat_base:] == (0.0, 1.0, 0.0)


def test_column_count_law():
    train = _simple_log({"k1": "ab", "k2": "ba"},
                        {"k1": {"channel": "web"}, "k2": {"channel": "phone"}})
    schema = build_schema(train, "next_activity")
    acts = len(schema.activity_vocabulary)
    expected_features = (schema.window * (acts + 2) + acts
                         + len(schema.numeric_features)
                         + sum(len(v) + 1
                               for v in schema.categorical_vocabularies.values()))
    assert schema.vector_width == expected_features
    assert len(schema.header()) == expected_features + 2 + 1
    assert len(schema.feature_names()) == expected_features


def test_feature_csv_round_trip(tmp_path, claims_log):
    schema = build_schema(claims_log, "remaining_time")
    table = extract(claims_log, schema)
    path = tmp_path / "features.csv"
    write_feature_csv(table, path)
    back = read_feature_csv(path, schema)
    assert back.rows == table.rows
    write_feature_csv(table, tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()


def test_feature_csv_header_mismatch(tmp_path, claims_log):
    schema = build_schema(claims_log, "next_activity")
    table = extract(claims_log, schema)
    path = tmp_path / "features.csv"
    write_feature_csv(table, path)
    other = build_schema(claims_log, "next_activity", FeatureConfig(window=3))
    with pytest.raises(SchemaMismatch):
        read_feature_csv(path, other)


def test_schema_sidecar_round_trip(tmp_path, claims_log):
    predicate = OutcomePredicate("amount", ">=", 500.0)
    schema = build_schema(claims_log, "outcome",
                          FeatureConfig(outcome=predicate, window=4))
    path = tmp_path / "schema.json"
    write_schema_json(schema, path)
    assert read_schema_json(path) == schema


def test_decode_window(claims_log):
    schema = build_schema(claims_log, "next_activity")
    table = extract(claims_log, schema)
    row = next(r for r in table.rows
               if r.case_id == "c1" and r.prefix_length == 2)
    assert decode_window(schema, row.vector) == ("a", "b")
    full = next(r for r in table.rows
                if r.case_id == "c1" and r.prefix_length == 4)
    assert decode_window(schema, full.vector) == ("a", "b", "c", "d")


def test_decode_window_truncates_to_window():
    log = _simple_log({"long": "abcdabc"})
    schema = build_schema(log, "next_activity")
    table = extract(log, schema)
    last = max(table.rows, key=lambda r: r.prefix_length)
    assert last.prefix_length == 7
    assert decode_window(schema, last.vector) == ("c", "d", "a", "b", "c")


def test_sampled_table_rows_are_subset_of_full(claims_log):
    schema = build_schema(claims_log, "next_activity")
    full = {(r.case_id, r.prefix_length): (r.vector, r.target)
            for r in extract(claims_log, schema).rows}
    index = build_index(claims_log)
    sampled_log = sample(claims_log, index, SamplingPlan(
        select=SelectionStrategy(kind="division", k=2)))
    for row in extract(sampled_log, schema).rows:
        assert full[(row.case_id, row.prefix_length)] == (row.vector, row.target)

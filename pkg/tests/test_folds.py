import pytest

from logsample import TooFewCases, assign_folds, materialize_fold


def test_assignment_partitions_all_cases(claims_log):
    assignment = assign_folds(claims_log, 3, seed=42)
    assert set(assignment.assignment) == set(claims_log.cases)
    assert set(assignment.assignment.values()) <= {0, 1, 2}


def test_fold_sizes_balanced(claims_log):
    assignment = assign_folds(claims_log, 3, seed=42)
    sizes = assignment.fold_sizes()
    assert sum(sizes) == 10
    assert max(sizes) - min(sizes) <= 1


def test_assignment_deterministic_per_seed(claims_log):
    a = assign_folds(claims_log, 5, seed=7)
    b = assign_folds(claims_log, 5, seed=7)
    c = assign_folds(claims_log, 5, seed=8)
    assert a.assignment == b.assignment
    assert a.assignment != c.assignment


def test_materialize_fold_disjoint_and_covering(claims_log):
    assignment = assign_folds(claims_log, 5, seed=1)
    seen_test_cases = set()
    for fold in range(5):
        train, test = materialize_fold(claims_log, assignment, fold)
        assert set(train.cases).isdisjoint(test.cases)
        assert set(train.cases) | set(test.cases) == set(claims_log.cases)
        assert test.case_count == assignment.fold_sizes()[fold]
        seen_test_cases |= set(test.cases)
    assert seen_test_cases == set(claims_log.cases)


def test_cases_keep_their_events(claims_log):
    assignment = assign_folds(claims_log, 2, seed=3)
    train, test = materialize_fold(claims_log, assignment, 0)
    for part in (train, test):
        for cid, case in part.cases.items():
            assert case.event_ids == claims_log.cases[cid].event_ids


def test_too_few_cases(claims_log):
    with pytest.raises(TooFewCases):
        assign_folds(claims_log, 11, seed=0)


def test_fold_count_validation(claims_log):
    with pytest.raises(ValueError):
        assign_folds(claims_log, 1, seed=0)
    assignment = assign_folds(claims_log, 2, seed=0)
    with pytest.raises(ValueError):
        materialize_fold(claims_log, assignment, 2)

"""Case-level k-fold cross-validation with fixed, reusable fold groups.

Folding happens at case granularity so that prefixes of one case never
straddle the train/test boundary, and one assignment is shared across every
sampling configuration of an experiment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from .errors import TooFewCases
from .model import EventLog


@dataclass(frozen=True)
class FoldAssignment:
    """Maps every case of a log to one fold index in [0, fold_count)."""

    fold_count: int
    assignment: Mapping[str, int]
    seed: int

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.fold_count
        for fold in self.assignment.values():
            sizes[fold] += 1
        return sizes


def assign_folds(log: EventLog, fold_count: int, seed: int) -> FoldAssignment:
    """Seeded uniform shuffle of the case ids, then round-robin assignment.

    Deterministic for fixed (log, fold_count, seed); fold sizes differ by
    at most one.
    """
    if fold_count < 2:
        raise ValueError(f"fold_count must be >= 2, got {fold_count}")
    case_ids = sorted(log.cases)
    if len(case_ids) < fold_count:
        raise TooFewCases(
            f"{len(case_ids)} cases cannot fill {fold_count} folds")
    rng = random.Random(seed)
    rng.shuffle(case_ids)
    assignment = {cid: i % fold_count for i, cid in enumerate(case_ids)}
    return FoldAssignment(fold_count=fold_count, assignment=assignment, seed=seed)


def materialize_fold(
    log: EventLog, assignment: FoldAssignment, test_fold: int
) -> tuple[EventLog, EventLog]:
    """Split the log into (train, test) sub-logs for one held-out fold.

    The two parts are disjoint and together cover every case. Sampling, when
    used, is applied downstream to the train part only.
    """
    if not 0 <= test_fold < assignment.fold_count:
        raise ValueError(
            f"test_fold {test_fold} out of range [0, {assignment.fold_count})")
    train_ids = [cid for cid in log.cases
                 if assignment.assignment[cid] != test_fold]
    test_ids = [cid for cid in log.cases
                if assignment.assignment[cid] == test_fold]
    return log.restrict(train_ids), log.restrict(test_ids)

"""Trace prioritization and per-variant selection strategies.

A sampling plan combines a sort strategy (which cases represent a variant
best) with a selection strategy (how many cases each variant keeps). The
result is always a sub-log of the input; unique and division selection are
variant-preserving, logarithmic selection drops variants of frequency one,
and whole-log random selection preserves nothing by design.
"""

from __future__ import annotations

import hashlib
import random
import statistics
from dataclasses import dataclass, field

from .errors import EmptySample, UnknownAttribute, WrongAttributeKind
from .model import CASE_SCOPE, MISSING, EventLog
from .variants import VariantGroup, VariantIndex, case_numeric_value

UNIQUE = "unique"
LOGARITHMIC = "logarithmic"
DIVISION = "division"
RANDOM_TOTAL = "random_total"

NUMERIC_CENTROID = "numeric_centroid"
MODE_AFFINITY = "categorical_mode_affinity"
ARRIVAL_TIME = "arrival_time"
RANDOM_ORDER = "random"


@dataclass(frozen=True)
class SortStrategy:
    """How to order the cases of one variant group, best representative first.

    kinds:
      numeric_centroid          -- ascending distance of the case's value of
                                   ``attribute`` from the group mean/median
      categorical_mode_affinity -- descending count of attribute values that
                                   equal their group-modal value
      arrival_time              -- by first event timestamp
      random                    -- seeded shuffle
    All ties break by case id.
    """

    kind: str = ARRIVAL_TIME
    attribute: str | None = None
    statistic: str = "mean"  # mean | median, for numeric_centroid
    attributes: tuple[str, ...] = ()  # for categorical_mode_affinity
    order: str = "oldest_first"  # oldest_first | newest_first
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (NUMERIC_CENTROID, MODE_AFFINITY, ARRIVAL_TIME, RANDOM_ORDER):
            raise ValueError(f"unknown sort kind {self.kind!r}")
        if self.kind == NUMERIC_CENTROID and not self.attribute:
            raise ValueError("numeric_centroid needs an attribute")
        if self.kind == MODE_AFFINITY and not self.attributes:
            raise ValueError("categorical_mode_affinity needs attributes")
        if self.statistic not in ("mean", "median"):
            raise ValueError(f"statistic must be mean or median, got {self.statistic!r}")
        if self.order not in ("oldest_first", "newest_first"):
            raise ValueError(f"order must be oldest_first or newest_first, got {self.order!r}")


@dataclass(frozen=True)
class SelectionStrategy:
    """How many cases each variant keeps.

    unique       -- exactly one case per variant
    logarithmic  -- ceil(log_k(frequency)); frequency-1 variants vanish
    division     -- ceil(frequency / k); every variant keeps at least one
    random_total -- n cases drawn from the whole log, ignoring variants
    """

    kind: str = UNIQUE
    k: int = 2
    n: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (UNIQUE, LOGARITHMIC, DIVISION, RANDOM_TOTAL):
            raise ValueError(f"unknown selection kind {self.kind!r}")
        if self.kind in (LOGARITHMIC, DIVISION) and self.k < 2:
            raise ValueError(f"{self.kind} needs integer k >= 2, got {self.k}")
        if self.kind == RANDOM_TOTAL and self.n < 1:
            raise ValueError(f"random_total needs n >= 1, got {self.n}")


@dataclass(frozen=True)
class SamplingPlan:
    """A complete sampling configuration: sort + selection + the attributes
    whose distributions drive the sort."""

    sort: SortStrategy = field(default_factory=SortStrategy)
    select: SelectionStrategy = field(default_factory=SelectionStrategy)
    attributes: tuple[str, ...] = ()

    def label(self) -> str:
        sel = self.select
        if sel.kind == UNIQUE:
            return "unique"
        if sel.kind == LOGARITHMIC:
            return f"log{sel.k}"
        if sel.kind == DIVISION:
            return f"d{sel.k}"
        return f"rand{sel.n}"


def _group_seed(base_seed: int, variant: tuple[str, ...]) -> int:
    # Stable across runs and platforms; built-in hash() is salted.
    digest = hashlib.blake2b(
        ("\x1f".join(variant) + f"#{base_seed}").encode("utf-8"),
        digest_size=8,
    ).digest()
    return int.from_bytes(digest, "big")


def _centroid(group: VariantGroup, log: EventLog, attribute: str,
              statistic: str, values: dict[str, float | None]) -> float | None:
    summary = group.numeric_summaries.get(attribute)
    if summary is not None:
        return summary.value(statistic)
    present = [v for v in values.values() if v is not None]
    if not present:
        return None
    if statistic == "median":
        return float(statistics.median(present))
    return sum(present) / len(present)


def _modal_values(group: VariantGroup, log: EventLog,
                  attributes: tuple[str, ...]) -> dict[str, str | None]:
    modal: dict[str, str | None] = {}
    for name in attributes:
        value = group.modal_value(name)
        if value is None:
            counts: dict[str, int] = {}
            spec = log.attribute_schema[name]
            for cid in group.case_ids:
                for v in _case_categorical(log, cid, name, spec.scope):
                    counts[v] = counts.get(v, 0) + 1
            value = min(counts, key=lambda v: (-counts[v], v)) if counts else None
        modal[name] = value
    return modal


def _case_categorical(log: EventLog, case_id: str, name: str, scope: str):
    if scope == CASE_SCOPE:
        value = log.cases[case_id].attributes.get(name, MISSING)
        if value is not MISSING:
            yield str(value)
        return
    for event in log.case_events(case_id):
        value = event.attributes.get(name, MISSING)
        if value is not MISSING:
            yield str(value)


def prioritize(group: VariantGroup, log: EventLog, sort: SortStrategy) -> list[str]:
    """Total order over the group's cases, best representative first."""
    case_ids = sorted(group.case_ids)

    if sort.kind == NUMERIC_CENTROID:
        attribute = sort.attribute or ""
        spec = log.attribute_schema.get(attribute)
        if spec is None:
            raise UnknownAttribute(attribute)
        if spec.kind != "numeric":
            raise WrongAttributeKind(f"{attribute} is {spec.kind}, expected numeric")
        values = {cid: case_numeric_value(log, cid, attribute) for cid in case_ids}
        centroid = _centroid(group, log, attribute, sort.statistic, values)
        if centroid is None:
            return case_ids  # every value missing: equal priority
        inf = float("inf")
        return sorted(case_ids, key=lambda cid: (
            abs(values[cid] - centroid) if values[cid] is not None else inf, cid))

    if sort.kind == MODE_AFFINITY:
        for name in sort.attributes:
            spec = log.attribute_schema.get(name)
            if spec is None:
                raise UnknownAttribute(name)
            if spec.kind != "categorical":
                raise WrongAttributeKind(f"{name} is {spec.kind}, expected categorical")
        modal = _modal_values(group, log, sort.attributes)

        def affinity(cid: str) -> int:
            score = 0
            for name in sort.attributes:
                if modal[name] is None:
                    continue
                scope = log.attribute_schema[name].scope
                score += sum(1 for v in _case_categorical(log, cid, name, scope)
                             if v == modal[name])
            return score

        return sorted(case_ids, key=lambda cid: (-affinity(cid), cid))

    if sort.kind == ARRIVAL_TIME:
        def first_start(cid: str):
            return log.case_events(cid)[0].start_time

        if sort.order == "newest_first":
            starts = {cid: first_start(cid) for cid in case_ids}
            latest = max(starts.values())
            return sorted(case_ids, key=lambda cid: (latest - starts[cid], cid))
        return sorted(case_ids, key=lambda cid: (first_start(cid), cid))

    rng = random.Random(_group_seed(sort.seed, group.variant))
    shuffled = list(case_ids)
    rng.shuffle(shuffled)
    return shuffled


def quota(frequency: int, select: SelectionStrategy) -> int:
    """How many cases a variant of the given frequency keeps.

    Exact integer arithmetic: the logarithmic quota is the smallest m with
    k**m >= frequency, which equals ceil(log_k(frequency)) without float
    rounding hazards (and is 0 for frequency 1).
    """
    if frequency < 1:
        raise ValueError(f"frequency must be >= 1, got {frequency}")
    if select.kind == UNIQUE:
        return 1
    if select.kind == DIVISION:
        return -(-frequency // select.k)
    if select.kind == LOGARITHMIC:
        m, power = 0, 1
        while power < frequency:
            power *= select.k
            m += 1
        return min(m, frequency)
    raise ValueError("random_total selection has no per-variant quota")


def sample(log: EventLog, index: VariantIndex, plan: SamplingPlan) -> EventLog:
    """Apply a sampling plan: keep the top-quota cases of each variant.

    The result is a sub-log of ``log``. Raises EmptySample when every quota
    is zero (possible under logarithmic selection when all variants have
    frequency one).
    """
    if plan.select.kind == RANDOM_TOTAL:
        rng = random.Random(plan.select.seed)
        population = sorted(log.cases)
        n = min(plan.select.n, len(population))
        chosen = sorted(rng.sample(population, n))
        return log.restrict(chosen)

    selected: list[str] = []
    for group in index.groups:
        q = min(quota(group.frequency, plan.select), group.frequency)
        if q == 0:
            continue
        selected.extend(prioritize(group, log, plan.sort)[:q])
    if not selected:
        raise EmptySample(
            f"plan {plan.label()} selected no cases from {index.source_case_count}")
    return log.restrict(selected)


def size_reduction(original: EventLog, sampled: EventLog) -> float:
    """Case count of the original log over that of the sampled log (>= 1 for
    any plan of this module)."""
    if sampled.case_count == 0:
        raise EmptySample("sampled log has no cases")
    return original.case_count / sampled.case_count

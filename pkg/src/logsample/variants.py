"""Variant indexing: partition cases by activity sequence and summarize
attribute distributions per variant.

The groups of a VariantIndex always partition the case set of the source
log: pairwise disjoint, union equal to all cases. Group order is descending
frequency with ties broken by lexicographic variant, so index output is
stable regardless of input case order.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Mapping

from .errors import UnknownAttribute
from .model import CASE_SCOPE, MISSING, EventLog


@dataclass(frozen=True)
class NumericSummary:
    """Mean and median of an attribute over one variant's cases."""

    mean: float
    median: float
    count: int  # non-missing contributing cases

    def value(self, statistic: str) -> float:
        if statistic == "median":
            return self.median
        return self.mean


@dataclass(frozen=True)
class VariantGroup:
    """All cases sharing one activity sequence, plus attribute summaries."""

    variant: tuple[str, ...]
    case_ids: tuple[str, ...]
    numeric_summaries: Mapping[str, NumericSummary] = field(default_factory=dict)
    categorical_summaries: Mapping[str, Mapping[str, int]] = field(default_factory=dict)

    @property
    def frequency(self) -> int:
        return len(self.case_ids)

    def modal_value(self, attribute: str) -> str | None:
        """Most frequent categorical value; ties go to the smaller value."""
        counts = self.categorical_summaries.get(attribute)
        if not counts:
            return None
        return min(counts, key=lambda v: (-counts[v], v))


@dataclass(frozen=True)
class VariantIndex:
    """Partition of a log's cases into variant groups."""

    groups: tuple[VariantGroup, ...]
    source_case_count: int

    def group_for(self, variant: tuple[str, ...]) -> VariantGroup:
        for group in self.groups:
            if group.variant == variant:
                return group
        raise KeyError(variant)


def case_numeric_value(log: EventLog, case_id: str, attribute: str) -> float | None:
    """Per-case value of a numeric attribute.

    Case-level attributes contribute their value directly; event-level ones
    are reduced to the mean over the case's events. Returns None when every
    relevant cell is missing.
    """
    spec = log.attribute_schema.get(attribute)
    if spec is None:
        raise UnknownAttribute(attribute)
    if spec.scope == CASE_SCOPE:
        value = log.cases[case_id].attributes.get(attribute, MISSING)
        return None if value is MISSING else float(value)  # type: ignore[arg-type]
    values = [ev.attributes.get(attribute, MISSING)
              for ev in log.case_events(case_id)]
    present = [float(v) for v in values if v is not MISSING]  # type: ignore[arg-type]
    if not present:
        return None
    return sum(present) / len(present)


def build_index(log: EventLog, attributes: set[str] | frozenset[str] = frozenset()) -> VariantIndex:
    """Group the log's cases by variant and summarize the named attributes.

    Numeric attributes get per-group mean and median over per-case values;
    categorical attributes get value-frequency maps (case-level: one value
    per case; event-level: one per event). Missing values are excluded, and
    a group where every value is missing carries no summary for that
    attribute.
    """
    for name in attributes:
        if name not in log.attribute_schema:
            raise UnknownAttribute(name)

    members: dict[tuple[str, ...], list[str]] = {}
    for case_id, case in log.cases.items():
        members.setdefault(case.variant, []).append(case_id)

    groups = []
    for variant in sorted(members, key=lambda v: (-len(members[v]), v)):
        case_ids = tuple(sorted(members[variant]))
        numeric: dict[str, NumericSummary] = {}
        categorical: dict[str, dict[str, int]] = {}
        for name in sorted(attributes):
            spec = log.attribute_schema[name]
            if spec.kind == "numeric":
                values = [case_numeric_value(log, cid, name) for cid in case_ids]
                present = [v for v in values if v is not None]
                if present:
                    numeric[name] = NumericSummary(
                        mean=sum(present) / len(present),
                        median=float(statistics.median(present)),
                        count=len(present),
                    )
            else:
                counts: dict[str, int] = {}
                for cid in case_ids:
                    for value in _categorical_values(log, cid, name, spec.scope):
                        counts[value] = counts.get(value, 0) + 1
                if counts:
                    categorical[name] = counts
        groups.append(VariantGroup(
            variant=variant,
            case_ids=case_ids,
            numeric_summaries=numeric,
            categorical_summaries=categorical,
        ))

    return VariantIndex(groups=tuple(groups), source_case_count=log.case_count)


def _categorical_values(log: EventLog, case_id: str, name: str, scope: str):
    if scope == CASE_SCOPE:
        value = log.cases[case_id].attributes.get(name, MISSING)
        if value is not MISSING:
            yield str(value)
        return
    for event in log.case_events(case_id):
        value = event.attributes.get(name, MISSING)
        if value is not MISSING:
            yield str(value)

"""Walk a ten-case claims log through every stage of variant-guided sampling.

Run from the repository root after installing the package:

    python3 demos/worked_example.py

The log has four variants over activities a..d and one numeric attribute
(claim amount). We build the variant index, look at the group statistics,
prioritize the cases inside each group by closeness to the group mean,
and then draw three differently sized samples.
"""

from datetime import datetime, timedelta, timezone

from logsample import (
    SamplingPlan,
    SelectionStrategy,
    SortStrategy,
    build_event_log,
    build_index,
    prioritize,
    quota,
    sample,
    size_reduction,
)

CASES = {
    "c1": (("a", "b", "c", "d"), 100.0),
    "c2": (("a", "c", "b", "d"), 720.0),
    "c3": (("a", "b", "c", "d"), 400.0),
    "c4": (("a", "b", "c", "d"), 800.0),
    "c5": (("a", "c", "b", "d"), 600.0),
    "c6": (("a", "c", "c", "d"), 750.0),
    "c7": (("a", "c", "d"), 170.0),
    "c8": (("a", "c", "b", "d"), 60.0),
    "c9": (("a", "b", "c", "d"), 260.0),
    "c10": (("a", "b", "c", "d"), 940.0),
}

base = datetime(2024, 3, 5, 9, 0, tzinfo=timezone.utc)
records = []
attrs = {}
for i, (cid, (variant, amount)) in enumerate(CASES.items()):
    for j, activity in enumerate(variant):
        start = base + timedelta(hours=i, minutes=10 * j)
        records.append({"case_id": cid, "activity": activity,
                        "start_time": start,
                        "complete_time": start + timedelta(minutes=5)})
    attrs[cid] = {"amount": amount}

log = build_event_log(records, attrs)
print(f"log: {log.case_count} cases, {len(log.events)} events")

index = build_index(log, frozenset({"amount"}))
print(f"\n{len(index.groups)} variant groups, largest first:")
for group in index.groups:
    summary = group.numeric_summaries["amount"]
    print(f"  {'>'.join(group.variant):10s} freq={group.frequency}  "
          f"cases={sorted(group.case_ids)}  mean amount={summary.mean:g}")

sort = SortStrategy(kind="numeric_centroid", attribute="amount")
print("\npriority inside each group (closest to the group mean first):")
for group in index.groups:
    print(f"  {'>'.join(group.variant):10s} {prioritize(group, log, sort)}")

print("\nper-variant quotas and the resulting samples:")
for label, select in [
    ("unique", SelectionStrategy(kind="unique")),
    ("log3", SelectionStrategy(kind="logarithmic", k=3)),
    ("d4", SelectionStrategy(kind="division", k=4)),
]:
    quotas = {"->".join(g.variant): quota(g.frequency, select)
              for g in index.groups}
    plan = SamplingPlan(sort=sort, select=select, attributes=("amount",))
    sampled = sample(log, index, plan)
    print(f"  {label:6s} quotas={quotas}")
    print(f"         kept {sorted(sampled.cases, key=lambda c: int(c[1:]))} "
          f"(size reduction {size_reduction(log, sampled):.2f}x)")

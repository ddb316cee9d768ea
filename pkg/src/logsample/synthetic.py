"""Seeded generator for skewed synthetic logs.

Real public benchmark logs are dominated by a handful of variants with long
tails of rare ones; that skew is exactly what separates the sampling
strategies. The generator reproduces the shape at desk scale: one dominant
variant holding a configurable share of the cases, plus a long tail of
distinct variants of equal (low) frequency.

The dominant variant runs a->b->c->d->e. Every tail variant shares the
(a, b) prefix and then diverges through f, so a frequency-flattening sample
flips the majority continuation after (a, b) away from c while a
proportional sample preserves it.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from .model import EventLog, build_event_log

DOMINANT_VARIANT = ("a", "b", "c", "d", "e")
TAIL_SUFFIX_ALPHABET = ("g", "h", "i", "j", "k", "l", "m", "n", "o", "p")


def _tail_variants(count: int) -> list[tuple[str, ...]]:
    """Deterministic distinct tail variants ⟨a, b, f, x, y[, z]⟩."""
    variants: list[tuple[str, ...]] = []
    letters = TAIL_SUFFIX_ALPHABET
    for x in letters:
        for y in letters:
            variants.append(("a", "b", "f", x, y))
            if len(variants) == count:
                return variants
    for x in letters:
        for y in letters:
            for z in letters:
                variants.append(("a", "b", "f", x, y, z))
                if len(variants) == count:
                    return variants
    raise ValueError(f"cannot build {count} distinct tail variants")


def generate_skewed_log(case_count: int = 5000,
                        dominant_share: float = 0.6,
                        tail_variant_count: int = 400,
                        seed: int = 7) -> EventLog:
    """Event log with one dominant variant and an equal-frequency tail.

    Case ids are zero-padded so lexicographic and numeric order agree.
    Arrival times step one minute per case; within a case events are five
    minutes apart with a seeded sojourn of up to four minutes. Each case
    carries a numeric "amount" and a categorical "channel" attribute so
    attribute-guided sorting and outcome labeling have something to bite.
    """
    if not 0.0 < dominant_share < 1.0:
        raise ValueError("dominant_share must be strictly between 0 and 1")
    dominant_count = int(case_count * dominant_share)
    tail_count = case_count - dominant_count
    if tail_variant_count > tail_count:
        raise ValueError("more tail variants than tail cases")

    rng = random.Random(seed)
    tails = _tail_variants(tail_variant_count)

    # Round-robin over tail variants keeps their frequencies equal
    # (within 1), which pins the sampling quotas the tests rely on.
    assignments: list[tuple[str, ...]] = [DOMINANT_VARIANT] * dominant_count
    assignments += [tails[i % len(tails)] for i in range(tail_count)]
    rng.shuffle(assignments)

    base = datetime(2024, 1, 1, 8, 0, tzinfo=timezone.utc)
    width = len(str(case_count))
    raw_events: list[dict[str, object]] = []
    case_attrs: dict[str, dict[str, object]] = {}
    channels = ("web", "phone", "branch")

    for index, variant in enumerate(assignments):
        case_id = f"c{index:0{width}d}"
        arrival = base + timedelta(minutes=index)
        for position, activity in enumerate(variant):
            start = arrival + timedelta(minutes=5 * position)
            sojourn = timedelta(seconds=rng.randrange(0, 240))
            raw_events.append({
                "case_id": case_id,
                "activity": activity,
                "start_time": start,
                "complete_time": start + sojourn,
            })
        case_attrs[case_id] = {
            "amount": float(rng.randrange(10, 1001)),
            "channel": channels[rng.randrange(len(channels))],
        }

    return build_event_log(raw_events, case_attrs)

"""Shared fixtures.

`claims_log` is the ten-case running example used throughout the oracle
tests: four variants over activities a..d, one numeric case attribute.
Expected group means, priority orders, and sampled case sets for it were
hand-computed once from the definitions and are frozen in the tests.
"""

from datetime import datetime, timedelta, timezone

import pytest

from logsample import build_event_log

# case id -> (variant, amount)
CLAIMS_CASES = {
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

BASE_TIME = datetime(2024, 3, 5, 9, 0, tzinfo=timezone.utc)
EVENT_STEP = timedelta(minutes=10)
SOJOURN = timedelta(minutes=5)


def make_claims_log():
    raw_events = []
    case_attrs = {}
    for index, (case_id, (variant, amount)) in enumerate(CLAIMS_CASES.items()):
        arrival = BASE_TIME + timedelta(hours=index)  # c1 arrives first
        for position, activity in enumerate(variant):
            start = arrival + position * EVENT_STEP
            raw_events.append({
                "case_id": case_id,
                "activity": activity,
                "start_time": start,
                "complete_time": start + SOJOURN,
            })
        case_attrs[case_id] = {"amount": amount}
    return build_event_log(raw_events, case_attrs)


@pytest.fixture
def claims_log():
    return make_claims_log()

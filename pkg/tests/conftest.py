import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from builders import make_dataset  # noqa: E402
from cblock.core import TrainingSet  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def six_records():
    """Two three-record groups on a, all-distinct b, one pair per group."""
    ds = make_dataset([
        ("r1", {"a": "x", "b": "1"}),
        ("r2", {"a": "x", "b": "2"}),
        ("r3", {"a": "x", "b": "3"}),
        ("r4", {"a": "y", "b": "4"}),
        ("r5", {"a": "y", "b": "5"}),
        ("r6", {"a": "y", "b": "6"}),
    ])
    return ds, TrainingSet((("r1", "r2"), ("r4", "r5")))


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

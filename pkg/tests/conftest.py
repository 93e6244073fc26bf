import csv
from pathlib import Path

import pytest

from chbsim.modulation import ModulationSpec
from chbsim.topology import build_conventional, build_modified

GOLDEN = Path(__file__).parent / "golden"

BUILDERS = {"conventional": build_conventional, "modified": build_modified}
PAPER_TABLES = [("conventional", 5), ("conventional", 7), ("modified", 5), ("modified", 7)]


def read_golden(kind, levels):
    """Rows of a paper switching table as {level: gate tuple}, transcribed by hand."""
    with open(GOLDEN / f"{kind}_{levels}.csv", newline="") as fh:
        return {int(r[0]): tuple(int(c) for c in r[1:]) for i, r in enumerate(csv.reader(fh)) if i}


@pytest.fixture
def staircase():
    return ModulationSpec()


@pytest.fixture(params=PAPER_TABLES, ids=lambda p: f"{p[0]}-{p[1]}")
def paper_topology(request):
    kind, levels = request.param
    return BUILDERS[kind](levels)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("] C")[1].split()[0])):
        terminalreporter.write_line(line)

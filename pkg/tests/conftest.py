import json
from pathlib import Path

import pytest

from medcalc.catalog import load_catalog
from medcalc.cli import seed_catalog_text

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_PATH = DATA_DIR / "golden_catalog.json"


@pytest.fixture(scope="session")
def seed_catalog():
    """The packaged seed catalog (~20 tasks)."""
    return load_catalog(seed_catalog_text())


@pytest.fixture(scope="session")
def golden_text():
    return GOLDEN_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_catalog(golden_text):
    """The 5-task catalog behind the paper's worked cases."""
    return load_catalog(golden_text)


@pytest.fixture(scope="session")
def golden_doc(golden_text):
    return json.loads(golden_text)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if getattr(report, "when", "call") != "call" and status == "passed":
                continue
            rows.append((nodeid.split("::")[-1], status))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, status in dict(rows).items():
        mark = "PASS" if status == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark} {name}")

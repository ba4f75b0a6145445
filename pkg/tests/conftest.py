import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from chronolens.ner import load_gazetteer
from chronolens.service import ArchiveState, ingest_batch

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return FIXTURES / "news_50.jsonl"


@pytest.fixture(scope="session")
def gazetteer_path() -> Path:
    return FIXTURES / "gazetteer.txt"


@pytest.fixture(scope="session")
def gold() -> dict:
    return json.loads((FIXTURES / "gold.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def fixture_gazetteer(gazetteer_path):
    return load_gazetteer(gazetteer_path)


@pytest.fixture(scope="session")
def archive(fixture_gazetteer, corpus_path):
    """The fixture corpus ingested once; treat as read-only."""
    state, report = ingest_batch(
        ArchiveState.empty(gazetteer=fixture_gazetteer), corpus_path
    )
    assert not report.errors, [e.to_json() for e in report.errors]
    return state


def pytest_terminal_summary(terminalreporter):
    # Replay the acceptance pass/fail lines that capture swallowed mid-run.
    lines = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

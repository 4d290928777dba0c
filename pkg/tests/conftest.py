from __future__ import annotations

import sys
from pathlib import Path

import pytest

from s2c.catalog import data_path, load_catalog

SAMPLE = data_path("iec62443-4-1-sample.json")
SAMPLE_EXTERNALS = data_path("iec62443-4-1-sample.external.json")
FIXTURE_160 = data_path("fixture-160.json")
SI_BPMN = data_path("si-1-review.bpmn")
DM_BPMN = data_path("dm-issue-handling.bpmn")
DEMO_PIPELINE = data_path("demo-pipeline.yaml")
DEMO_ATTESTATIONS = data_path("demo-attestations.json")
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def sample():
    return load_catalog(SAMPLE)


@pytest.fixture(scope="session")
def fixture160():
    return load_catalog(FIXTURE_160)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET

import pytest

from conftest import DEMO_ATTESTATIONS, DEMO_PIPELINE, GOLDEN
from s2c.catalog import Activity, ActivityCatalog, AutomationLevel, PipelineStage, Practice
from s2c.errors import FormatError
from s2c.pipeline import PipelineModel, Verdict, assess, load_attestations, parse_pipeline
from s2c.reporting import ReportFormat, overview_markers, render_gap_report, render_s2c_overview

S = PipelineStage
SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def demo_result(sample):
    return assess(parse_pipeline(DEMO_PIPELINE), sample, load_attestations(DEMO_ATTESTATIONS))


def test_overview_matches_golden(sample):
    ov = render_s2c_overview(sample)
    assert ov.text == (GOLDEN / "s2c_overview.txt").read_text(encoding="utf-8")
    assert ov.svg == (GOLDEN / "s2c_overview.svg").read_text(encoding="utf-8")


@pytest.mark.parametrize("fmt", list(ReportFormat))
def test_gap_report_matches_golden(sample, demo_result, fmt):
    bundle = render_gap_report(demo_result, sample, fmt)
    assert bundle.text == (GOLDEN / f"demo_gap_report.{fmt.extension}").read_text(encoding="utf-8")


def test_overview_placements(sample):
    marks = overview_markers(sample)
    assert marks["SR"] == {S.PLAN}
    assert {S.CODE, S.BUILD} <= marks["SM"]
    assert {S.BUILD, S.TEST, S.RELEASE} <= marks["SVV"]
    assert marks["SUM"] == {S.OPERATE, S.MONITOR}


def test_overview_text_grid_is_fixed_width(sample):
    lines = [ln for ln in render_s2c_overview(sample).text.splitlines() if ln.count("|") == 9]
    assert len(lines) == 1 + len(sample.practices)
    assert len({len(ln) for ln in lines}) == 1


def test_overview_svg_is_well_formed_and_lists_repositories(sample):
    root = ET.fromstring(render_s2c_overview(sample).svg.encode())
    texts = [t.text for t in root.iter(f"{SVG_NS}text")]
    for repo in ("Backlog", "CodeBase", "TestRepo", "PreProduction", "Production", "Documentation", "Analytics"):
        assert repo in texts
    circles = [c for c in root.iter(f"{SVG_NS}circle") if c.find(f"{SVG_NS}title") is not None]
    assert len(circles) == sum(len(v) for v in overview_markers(sample).values())


def test_singleton_catalog_has_one_marker():
    cat = ActivityCatalog(
        "X", "1", [Practice("SI", "impl")], [], [],
        [Activity("SI-t1", "SI", "SI-1", "code it", AutomationLevel.HUMAN_TASK, {S.CODE})],
    )
    ov = render_s2c_overview(cat)
    assert sum(line.count("X") for line in ov.text.splitlines() if line.startswith("SI ")) == 1
    root = ET.fromstring(ov.svg.encode())
    assert len([c for c in root.iter(f"{SVG_NS}circle") if c.find(f"{SVG_NS}title") is not None]) == 1


def test_all_gap_report_lists_every_activity(sample):
    result = assess(PipelineModel("empty"), sample, [])
    data = json.loads(render_gap_report(result, sample, "json").text)
    assert len(data["gaps"]) == len(sample.activities)


def test_gap_list_follows_roadmap_order(sample, demo_result):
    data = json.loads(render_gap_report(demo_result, sample, ReportFormat.JSON).text)
    gap_ids = [a.id for a in sample.activities if demo_result.per_activity[a.id] is Verdict.GAP]
    # order written out independently of roadmap(): level priority, earliest stage, id
    level_rank = ["Complete", "PartialAutomation", "Transparency", "ToolPossible", "HumanTask"]

    def key(aid):
        a = sample.activity(aid)
        practice, rest = aid.split("-")
        return (level_rank.index(a.automation.value), min(s.index for s in a.stages), practice, rest[0], int(rest[1:]))

    assert [g["activity"] for g in data["gaps"]] == sorted(gap_ids, key=key)


def test_json_report_is_deterministic_and_schema_stable(sample, demo_result):
    a = render_gap_report(demo_result, sample, "json").text
    assert a == render_gap_report(demo_result, sample, "json").text
    data = json.loads(a)
    assert data["schema"] == "s2c-report/1"
    assert list(data) == ["schema", "standard_id", "catalog_version", "fingerprints", "summary", "practices", "gaps", "evidence"]
    assert data["summary"]["coverage_percent"] == demo_result.coverage_percent


def test_every_reported_id_resolves(sample, demo_result):
    for fmt in ReportFormat:
        text = render_gap_report(demo_result, sample, fmt).text
        for aid in set(re.findall(r"\b[A-Z]+-[teg]\d+\b", text)):
            assert sample.has_activity(aid), (fmt, aid)


def test_gap_svg_is_well_formed(sample, demo_result):
    ET.fromstring(render_gap_report(demo_result, sample, "svg").text.encode())


def test_fingerprints_track_inputs(sample, demo_result):
    a = render_gap_report(demo_result, sample, "md")
    b = render_gap_report(assess(PipelineModel("empty"), sample, []), sample, "md")
    assert a.fingerprints["catalog"] == b.fingerprints["catalog"]
    assert a.fingerprints["assessment"] != b.fingerprints["assessment"]
    assert [t for t, _ in a.sections] == ["Executive summary", "Coverage by practice", "Gaps in roadmap order", "Evidence manifest"]


def test_unsupported_format(sample, demo_result):
    with pytest.raises(FormatError):
        render_gap_report(demo_result, sample, "pdf")

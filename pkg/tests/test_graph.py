from __future__ import annotations

import dataclasses
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from s2c.catalog import Activity, ActivityCatalog, Artifact, AutomationLevel, PipelineStage, Practice, RepositoryKind
from s2c.graph import (
    Edge,
    Severity,
    ValidationFinding,
    build_graph,
    check_stage_consistency,
    findings_to_jsonl,
    finding,
)
from s2c.synth import random_catalog, random_chain

S = PipelineStage


def brute_force_edges(catalog):
    """Every (producer, consumer, artifact) triple from the full cross product."""
    out = set()
    for p in catalog.activities:
        for c in catalog.activities:
            if p is c:
                continue
            for art in catalog.artifacts:
                if art.name in p.outputs and art.name in c.inputs:
                    out.add((p.id, c.id, art.name))
    return out


def mini(*specs):
    """Catalog from (id, stage, inputs, outputs) tuples."""
    names = sorted({a for _, _, i, o in specs for a in (*i, *o)})
    acts = [
        Activity(i, "SM", "SM-1", i, AutomationLevel.HUMAN_TASK, {stage}, set(ins), set(outs))
        for i, stage, ins, outs in specs
    ]
    return ActivityCatalog("T", "1", [Practice("SM", "m")], [Artifact(n, RepositoryKind.BACKLOG) for n in names], [], acts)


def test_minimal_chain():
    cat = mini(("SM-t1", S.PLAN, [], ["x"]), ("SM-t2", S.CODE, ["x"], []))
    g = build_graph(cat)
    assert g.edges == (Edge("SM-t1", "SM-t2", "x"),)
    assert g.findings == ()


def test_dangling_input_is_a_warning():
    cat = mini(("SM-t1", S.PLAN, ["threat-model"], []))
    g = build_graph(cat)
    assert [(f.severity, f.code, f.subject) for f in g.findings] == [(Severity.WARNING, "DANGLING_INPUT", "threat-model")]
    assert build_graph(cat, {"threat-model"}).findings == ()


def test_terminal_output_and_unused_external_are_info():
    cat = mini(("SM-t1", S.PLAN, [], ["report"]))
    g = build_graph(cat, {"never-used"})
    assert {(f.severity, f.code) for f in g.findings} == {
        (Severity.INFO, "TERMINAL_OUTPUT"),
        (Severity.INFO, "UNUSED_EXTERNAL"),
    }


def test_cycle_is_info_not_error():
    cat = mini(("SM-t1", S.PLAN, ["b"], ["a"]), ("SM-t2", S.BUILD, ["a"], ["b"]))
    g = build_graph(cat)
    assert [(f.severity, f.code, f.subject) for f in g.findings] == [(Severity.INFO, "CYCLE", "SM-t1")]


def test_sample_catalog_feedback_cycle(sample):
    from conftest import SAMPLE_EXTERNALS

    externals = set(json.loads(SAMPLE_EXTERNALS.read_text()))
    g = build_graph(sample, externals)
    cycles = [f for f in g.findings if f.code == "CYCLE"]
    assert cycles and all(f.severity is Severity.INFO for f in cycles)
    assert "DM-t1" in cycles[0].message and "SR-t1" in cycles[0].message
    assert not [f for f in g.findings if f.severity is not Severity.INFO]
    assert check_stage_consistency(g, sample) == []


def test_stage_forward_flow_is_fine():
    cat = mini(("SM-t1", S.BUILD, [], ["x"]), ("SM-t2", S.TEST, ["x"], []))
    assert check_stage_consistency(build_graph(cat), cat) == []


def test_stage_backward_flow_warns():
    cat = mini(("SM-t1", S.DEPLOY, [], ["x"]), ("SM-t2", S.CODE, ["x"], []))
    got = check_stage_consistency(build_graph(cat), cat)
    assert [(f.severity, f.code, f.subject) for f in got] == [(Severity.WARNING, "STAGE_ORDER", "SM-t2")]


def test_monitor_to_plan_feedback_is_exempt():
    cat = mini(
        ("SM-t1", S.PLAN, ["issues"], ["backlog"]),
        ("SM-t2", S.CODE, ["backlog"], ["build"]),
        ("SM-t3", S.MONITOR, ["build"], ["issues"]),
    )
    g = build_graph(cat)
    assert check_stage_consistency(g, cat) == []


def test_monitor_into_plan_without_cycle_is_exempt():
    cat = mini(("SM-t1", S.MONITOR, [], ["issues"]), ("SM-t2", S.PLAN, ["issues"], []))
    assert check_stage_consistency(build_graph(cat), cat) == []


def test_findings_sorted_by_severity_then_subject():
    cat = mini(("SM-t1", S.PLAN, ["zz", "aa"], ["out"]))
    g = build_graph(cat)
    keys = [(f.severity.rank, f.subject) for f in g.findings]
    assert keys == sorted(keys)


def test_finding_codes_are_bound_to_severity():
    with pytest.raises(ValueError):
        ValidationFinding(Severity.ERROR, "CYCLE", "x", "y")
    assert finding("STAGE_ORDER", "a", "b").severity is Severity.WARNING


def test_jsonl_export_one_object_per_line():
    cat = mini(("SM-t1", S.PLAN, ["a", "b"], []))
    lines = findings_to_jsonl(build_graph(cat).findings).splitlines()
    assert [json.loads(x)["subject"] for x in lines] == ["a", "b"]


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_edges_equal_cross_product_oracle(seed):
    cat = random_catalog(random.Random(seed))
    g = build_graph(cat)
    got = {(e.producer, e.consumer, e.artifact) for e in g.edges}
    assert len(got) == len(g.edges)
    assert got == brute_force_edges(cat)
    assert build_graph(cat) == g


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=50))
def test_linear_chain_has_n_minus_1_edges(seed, n):
    cat, externals = random_chain(random.Random(seed), n)
    g = build_graph(cat, externals)
    assert len(g.edges) == n - 1
    assert not [f for f in g.findings if f.severity is not Severity.INFO]
    assert check_stage_consistency(g, cat) == []


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.data())
def test_removing_output_removes_exactly_that_edge(seed, data):
    cat = random_catalog(random.Random(seed))
    g = build_graph(cat)
    if not g.edges:
        return
    edge = data.draw(st.sampled_from(g.edges))
    acts = [
        dataclasses.replace(a, outputs=a.outputs - {edge.artifact}) if a.id == edge.producer else a
        for a in cat.activities
    ]
    smaller = ActivityCatalog(cat.standard_id, cat.version, cat.practices, cat.artifacts, cat.tools, acts)
    after = set(build_graph(smaller).edges)
    removed = set(g.edges) - after
    assert after <= set(g.edges)
    assert {(e.producer, e.artifact) for e in removed} == {(edge.producer, edge.artifact)}
    assert edge in removed

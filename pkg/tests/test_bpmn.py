from __future__ import annotations

import io
from xml.dom import minidom

import pytest

from conftest import DM_BPMN, SI_BPMN
from s2c.bpmn import BPMN_NS, ElementKind, draft_fragment, extract_activities, parse_bpmn, parse_bpmn_file
from s2c.errors import MappingError, SubsetError, XmlError

FLOW_TAGS = {
    "task", "userTask", "serviceTask", "manualTask", "scriptTask", "businessRuleTask", "sendTask", "receiveTask",
    "startEvent", "endEvent", "intermediateCatchEvent", "intermediateThrowEvent",
    "exclusiveGateway", "parallelGateway",
}

# hand extraction from the fixture files: (id, name, inputs, outputs)
SI_EXPECTED = [
    ("SI-t1", "Run static code analysis", {"source-code"}, {"static-analysis-report"}),
    ("SI-g1", "Findings above threshold?", set(), set()),
    ("SI-t2", "Review adherence to secure coding standards", {"source-code", "static-analysis-report"}, set()),
]
DM_EXPECTED = [
    ("DM-e1", "Security issue reported", set(), set()),
    ("DM-t1", "Track security-related issue", {"vulnerability-report"}, {"security-issue-report"}),
    ("DM-g1", "Split investigation", set(), set()),
    ("DM-t2", "Investigate and validate issue", {"security-issue-report"}, set()),
    ("DM-t3", "Prepare disclosure", {"security-issue-report"}, set()),
    ("DM-g2", "Join investigation", set(), set()),
    ("DM-g3", "Update required?", set(), set()),
    ("DM-e2", "Update requested", set(), {"security-update-request"}),
    ("DM-e3", "Issue closed", set(), set()),
]


def dom_counts(path):
    """Independent count of flow elements and data objects via the DOM API."""
    doc = minidom.parse(str(path))
    flow = sum(len(doc.getElementsByTagNameNS(BPMN_NS, tag)) for tag in FLOW_TAGS)
    data = len(doc.getElementsByTagNameNS(BPMN_NS, "dataObject"))
    return flow, data


@pytest.mark.parametrize("path", [SI_BPMN, DM_BPMN])
def test_element_counts_match_dom_oracle(path):
    model = parse_bpmn_file(path)
    assert (len(model.flow_elements), len(model.data_objects)) == dom_counts(path)


def test_si_fixture_shape():
    model = parse_bpmn_file(SI_BPMN)
    assert model.process_id == "Process_SI1"
    assert len(model.flow_elements) == 3
    assert len(model.data_objects) == 2
    assert [e.kind for e in model.flow_elements] == [ElementKind.TASK, ElementKind.GATEWAY, ElementKind.TASK]
    assert model.flows == (("Task_StaticAnalysis", "Gateway_Findings"), ("Gateway_Findings", "Task_PeerReview"))
    assert model.warnings == ()


@pytest.mark.parametrize("path,practice,expected", [(SI_BPMN, "SI", SI_EXPECTED), (DM_BPMN, "DM", DM_EXPECTED)])
def test_extraction_matches_hand_derived_list(path, practice, expected):
    drafts = extract_activities(parse_bpmn_file(path), practice)
    assert [(d.id, d.name, set(d.inputs), set(d.outputs)) for d in drafts] == expected
    assert all(d.automation is None and not d.stages for d in drafts)


def test_requirement_taken_from_process_name():
    drafts = extract_activities(parse_bpmn_file(SI_BPMN), "SI")
    assert {d.requirement for d in drafts} == {"SI-1"}


@pytest.mark.parametrize("path", [SI_BPMN, DM_BPMN])
def test_extraction_invariants(path):
    model = parse_bpmn_file(path)
    drafts = extract_activities(model, "SM")
    assert len(drafts) == len(model.flow_elements)
    assert len({d.id for d in drafts}) == len(drafts)
    labels = {e.label for e in model.data_objects}
    for d in drafts:
        assert d.inputs | d.outputs <= labels


def test_empty_process():
    model = parse_bpmn(b'<definitions xmlns="%s"><process id="P"/></definitions>' % BPMN_NS.encode())
    assert model.elements == ()
    assert extract_activities(model, "SI") == []


def test_single_task_without_data():
    xml = b'<definitions xmlns="%s"><process id="P"><task id="T" name="Only"/></process></definitions>' % BPMN_NS.encode()
    drafts = extract_activities(parse_bpmn(xml), "SR")
    assert [(d.id, d.inputs, d.outputs) for d in drafts] == [("SR-t1", frozenset(), frozenset())]


def test_dangling_data_association():
    xml = (
        b'<definitions xmlns="%s"><process id="P"><task id="T">'
        b"<dataInputAssociation><sourceRef>missing</sourceRef></dataInputAssociation>"
        b"</task></process></definitions>" % BPMN_NS.encode()
    )
    model = parse_bpmn(xml)
    with pytest.raises(MappingError, match="missing"):
        extract_activities(model, "SI")


def test_truncated_xml_reports_offset():
    data = SI_BPMN.read_bytes()[:400]
    with pytest.raises(XmlError) as exc:
        parse_bpmn(data)
    assert exc.value.offset is not None
    assert 0 < exc.value.offset <= len(data)
    assert "byte offset" in str(exc.value)


def test_no_process_is_subset_error():
    with pytest.raises(SubsetError):
        parse_bpmn(b'<definitions xmlns="%s"><collaboration id="C"/></definitions>' % BPMN_NS.encode())


def test_unsupported_elements_warn_and_are_skipped():
    xml = (
        b'<definitions xmlns="%s"><process id="P">'
        b'<task id="T1"/><subProcess id="S"/><inclusiveGateway id="G"/>'
        b'<sequenceFlow id="f" sourceRef="T1" targetRef="S"/>'
        b"</process></definitions>" % BPMN_NS.encode()
    )
    model = parse_bpmn(xml)
    assert [e.id for e in model.elements] == ["T1"]
    assert model.flows == ()
    assert len(model.warnings) == 3


def test_parse_is_deterministic_and_accepts_streams():
    data = DM_BPMN.read_bytes()
    assert parse_bpmn(data) == parse_bpmn(io.BytesIO(data))


def test_fragment_lists_artifacts_for_completion():
    model = parse_bpmn_file(SI_BPMN)
    frag = draft_fragment(model, extract_activities(model, "SI"))
    assert [a["name"] for a in frag["artifacts"]] == ["source-code", "static-analysis-report"]
    assert {a["automation"] for a in frag["activities"]} == {"unclassified"}

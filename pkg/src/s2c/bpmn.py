"""Extraction of draft activities from BPMN 2.0 process models.

Supported subset: ``process``; every task flavour (collapsed to Task); start,
end and intermediate events (Event); exclusive and parallel gateways
(Gateway); ``dataObject`` and ``dataObjectReference``; ``sequenceFlow``; data
input/output associations on flow nodes. Anything else inside a process is
skipped with a warning.
"""

from __future__ import annotations

import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import BinaryIO

from s2c.catalog import PRACTICE_CODE_RE, Activity, activity_to_dict
from s2c.errors import IoError, MappingError, SubsetError, XmlError

log = logging.getLogger(__name__)

BPMN_NS = "http://www.omg.org/spec/BPMN/20100524/MODEL"
FRAGMENT_SCHEMA_ID = "s2c-catalog-fragment/1"


class ElementKind(Enum):
    TASK = "Task"
    EVENT = "Event"
    GATEWAY = "Gateway"
    DATA_OBJECT = "DataObject"

    @property
    def id_letter(self) -> str:
        return {"Task": "t", "Event": "e", "Gateway": "g"}[self.value]


TASK_TAGS = {
    "task", "userTask", "serviceTask", "manualTask", "scriptTask",
    "businessRuleTask", "sendTask", "receiveTask",
}
EVENT_TAGS = {"startEvent", "endEvent", "intermediateCatchEvent", "intermediateThrowEvent"}
GATEWAY_TAGS = {"exclusiveGateway", "parallelGateway"}
# silently tolerated process children that carry no activity semantics
IGNORED_TAGS = {"documentation", "extensionElements", "laneSet"}

REQUIREMENT_RE = re.compile(r"^[A-Z0-9]+-[0-9]+$")


@dataclass(frozen=True)
class BpmnElement:
    id: str
    kind: ElementKind
    label: str


@dataclass(frozen=True)
class DataAssociation:
    element_id: str
    data_ref: str
    direction: str  # "input" | "output"


@dataclass(frozen=True)
class ProcessModel:
    process_id: str
    name: str
    elements: tuple[BpmnElement, ...]
    flows: tuple[tuple[str, str], ...]
    data_associations: tuple[DataAssociation, ...]
    data_refs: dict[str, str]
    warnings: tuple[str, ...] = ()

    @property
    def flow_elements(self) -> list[BpmnElement]:
        return [e for e in self.elements if e.kind is not ElementKind.DATA_OBJECT]

    @property
    def data_objects(self) -> list[BpmnElement]:
        return [e for e in self.elements if e.kind is ElementKind.DATA_OBJECT]

    def artifact_name(self, data_ref: str) -> str:
        """Resolve a data object (or reference) id to its artifact name."""
        target = self.data_refs.get(data_ref, data_ref)
        for e in self.data_objects:
            if e.id == target:
                return e.label
        raise MappingError(f"data association references missing data object {data_ref!r}")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1] if "}" in tag else tag


def _in_bpmn_ns(tag: str) -> bool:
    return not tag.startswith("{") or tag.startswith("{" + BPMN_NS + "}")


def _parse_xml(data: bytes) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        lines = data.split(b"\n")
        offset = sum(len(x) + 1 for x in lines[: line - 1]) + column
        raise XmlError(str(exc).split(":")[0], min(offset, len(data)), line, column) from None


def parse_bpmn(xml: bytes | BinaryIO) -> ProcessModel:
    data = xml if isinstance(xml, (bytes, bytearray)) else xml.read()
    root = _parse_xml(bytes(data))

    processes = [el for el in root.iter() if _local(el.tag) == "process" and _in_bpmn_ns(el.tag)]
    if not processes:
        raise SubsetError("document contains no BPMN process element")
    warnings: list[str] = []
    if len(processes) > 1:
        warnings.append(f"{len(processes)} processes found; only {processes[0].get('id')!r} is extracted")
    proc = processes[0]

    elements: list[BpmnElement] = []
    flows: list[tuple[str, str]] = []
    assocs: list[DataAssociation] = []
    data_refs: dict[str, str] = {}
    seen: set[str] = set()

    def add(el: ET.Element, kind: ElementKind) -> str:
        el_id = el.get("id")
        if not el_id:
            raise SubsetError(f"<{_local(el.tag)}> element without id")
        if el_id in seen:
            raise SubsetError(f"duplicate element id {el_id!r}")
        seen.add(el_id)
        elements.append(BpmnElement(el_id, kind, (el.get("name") or el_id).strip()))
        return el_id

    for child in proc:
        tag = _local(child.tag)
        if not _in_bpmn_ns(child.tag) or tag in IGNORED_TAGS:
            continue
        if tag in TASK_TAGS or tag in EVENT_TAGS or tag in GATEWAY_TAGS:
            kind = ElementKind.TASK if tag in TASK_TAGS else ElementKind.EVENT if tag in EVENT_TAGS else ElementKind.GATEWAY
            el_id = add(child, kind)
            for sub in child:
                sub_tag = _local(sub.tag)
                if sub_tag == "dataInputAssociation":
                    assocs.extend(
                        DataAssociation(el_id, (r.text or "").strip(), "input")
                        for r in sub if _local(r.tag) == "sourceRef"
                    )
                elif sub_tag == "dataOutputAssociation":
                    assocs.extend(
                        DataAssociation(el_id, (r.text or "").strip(), "output")
                        for r in sub if _local(r.tag) == "targetRef"
                    )
        elif tag == "dataObject":
            add(child, ElementKind.DATA_OBJECT)
        elif tag == "dataObjectReference":
            ref_id, target = child.get("id"), child.get("dataObjectRef")
            if ref_id and target:
                data_refs[ref_id] = target
            else:
                warnings.append(f"dataObjectReference {ref_id!r} without dataObjectRef skipped")
        elif tag == "sequenceFlow":
            flows.append((child.get("sourceRef", ""), child.get("targetRef", "")))
        else:
            warnings.append(f"unsupported element <{tag}> id={child.get('id')!r} skipped")

    valid_flows = []
    for src, dst in flows:
        if src in seen and dst in seen:
            valid_flows.append((src, dst))
        else:
            warnings.append(f"sequence flow {src!r} -> {dst!r} has an endpoint outside the supported subset; skipped")

    for w in warnings:
        log.warning(w)
    return ProcessModel(
        process_id=proc.get("id", ""),
        name=proc.get("name", ""),
        elements=tuple(elements),
        flows=tuple(valid_flows),
        data_associations=tuple(assocs),
        data_refs=data_refs,
        warnings=tuple(warnings),
    )


def parse_bpmn_file(path: str | Path) -> ProcessModel:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_bpmn(data)


def requirement_of(model: ProcessModel) -> str:
    """Requirement id taken from a process name like ``SI-1 Secure implementation review``."""
    head = model.name.split(maxsplit=1)[0] if model.name.strip() else ""
    return head if REQUIREMENT_RE.match(head) else model.process_id


def extract_activities(model: ProcessModel, practice: str) -> list[Activity]:
    """One unclassified, unstaged draft per task, event and gateway.

    Ids are ``<practice>-<t|e|g><n>`` numbered in document order, separately
    for each element kind.
    """
    if not PRACTICE_CODE_RE.match(practice):
        raise ValueError(f"invalid practice code {practice!r}")
    inputs: dict[str, set[str]] = {}
    outputs: dict[str, set[str]] = {}
    for assoc in model.data_associations:
        name = model.artifact_name(assoc.data_ref)
        (inputs if assoc.direction == "input" else outputs).setdefault(assoc.element_id, set()).add(name)

    requirement = requirement_of(model)
    counters: dict[ElementKind, int] = {}
    drafts = []
    for el in model.flow_elements:
        counters[el.kind] = counters.get(el.kind, 0) + 1
        drafts.append(
            Activity(
                id=f"{practice}-{el.kind.id_letter}{counters[el.kind]}",
                practice=practice,
                requirement=requirement,
                name=el.label,
                description=f"Extracted from BPMN element {el.id}",
                automation=None,
                inputs=inputs.get(el.id, ()),
                outputs=outputs.get(el.id, ()),
            )
        )
    return drafts


def draft_fragment(model: ProcessModel, drafts: list[Activity]) -> dict:
    """Catalog fragment for hand completion: repositories, automation and stages are left open."""
    names = sorted({n for d in drafts for n in d.inputs | d.outputs})
    return {
        "schema": FRAGMENT_SCHEMA_ID,
        "process": model.process_id,
        "artifacts": [{"name": n, "repository": None, "description": ""} for n in names],
        "activities": [activity_to_dict(d) for d in drafts],
        "warnings": list(model.warnings),
    }

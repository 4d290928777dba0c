"""Producer/consumer orchestration graph over catalog activities.

An edge ``(p, c, a)`` exists when activity ``p`` lists artifact ``a`` among
its outputs and a different activity ``c`` lists it among its inputs.

Finding table:

=====================  ========  =========  =====================================
code                   severity  subject    raised when
=====================  ========  =========  =====================================
UNRESOLVED_REFERENCE   Error     activity   a catalog name does not resolve
DANGLING_INPUT         Warning   artifact   consumed, never produced, not external
STAGE_ORDER            Warning   activity   consumer stage precedes producer stage
CYCLE                  Info      activity   strongly connected activities (loop)
TERMINAL_OUTPUT        Info      artifact   produced, never consumed
UNUSED_EXTERNAL        Info      artifact   declared external, never consumed
=====================  ========  =========  =====================================
"""

from __future__ import annotations

import json
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

import networkx as nx

from s2c.catalog import ActivityCatalog, PipelineStage, activity_sort_key
from s2c.errors import CatalogReferenceError


class Severity(Enum):
    ERROR = "Error"
    WARNING = "Warning"
    INFO = "Info"

    @property
    def rank(self) -> int:
        return list(Severity).index(self)


FINDING_CODES: dict[str, Severity] = {
    "UNRESOLVED_REFERENCE": Severity.ERROR,
    "DANGLING_INPUT": Severity.WARNING,
    "STAGE_ORDER": Severity.WARNING,
    "CYCLE": Severity.INFO,
    "TERMINAL_OUTPUT": Severity.INFO,
    "UNUSED_EXTERNAL": Severity.INFO,
}


@dataclass(frozen=True)
class ValidationFinding:
    severity: Severity
    code: str
    subject: str
    message: str
    # set when --strict promoted a Warning to Error
    strict: bool = False

    def __post_init__(self):
        expected = FINDING_CODES.get(self.code)
        if self.strict and expected is Severity.WARNING and self.severity is Severity.ERROR:
            return
        if expected is not self.severity:
            raise ValueError(f"finding {self.code} cannot carry severity {self.severity.value}")

    def to_dict(self) -> dict:
        return {"severity": self.severity.value, "code": self.code, "subject": self.subject, "message": self.message}

    def sort_key(self) -> tuple:
        return (self.severity.rank, self.subject, self.code, self.message)


def finding(code: str, subject: str, message: str) -> ValidationFinding:
    return ValidationFinding(FINDING_CODES[code], code, subject, message)


def sort_findings(findings: Iterable[ValidationFinding]) -> list[ValidationFinding]:
    return sorted(findings, key=ValidationFinding.sort_key)


@dataclass(frozen=True)
class Edge:
    producer: str
    consumer: str
    artifact: str


@dataclass(frozen=True)
class OrchestrationGraph:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    external_inputs: frozenset[str]
    findings: tuple[ValidationFinding, ...]

    def components(self) -> list[list[str]]:
        """Strongly connected groups of two or more activities, each sorted, in id order."""
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((e.producer, e.consumer) for e in self.edges)
        comps = [sorted(c, key=activity_sort_key) for c in nx.strongly_connected_components(g) if len(c) > 1]
        return sorted(comps, key=lambda c: activity_sort_key(c[0]))


def build_graph(catalog: ActivityCatalog, declared_external: Iterable[str] = ()) -> OrchestrationGraph:
    declared = frozenset(declared_external)
    producers: dict[str, list[str]] = defaultdict(list)
    consumed: set[str] = set()
    for act in catalog.activities:
        for a in act.outputs:
            producers[a].append(act.id)
        consumed |= act.inputs

    edges = []
    for consumer in catalog.activities:
        for a in consumer.inputs:
            edges.extend(Edge(p, consumer.id, a) for p in producers.get(a, ()) if p != consumer.id)
    edges.sort(key=lambda e: (activity_sort_key(e.producer), activity_sort_key(e.consumer), e.artifact))

    findings = []
    for a in sorted(consumed - producers.keys() - declared):
        users = sorted((x.id for x in catalog.activities if a in x.inputs), key=activity_sort_key)
        findings.append(finding("DANGLING_INPUT", a, f"consumed by {', '.join(users)} but never produced"))
    for a in sorted(producers.keys() - consumed):
        findings.append(finding("TERMINAL_OUTPUT", a, f"produced by {', '.join(producers[a])} but never consumed"))
    for a in sorted(declared - consumed):
        findings.append(finding("UNUSED_EXTERNAL", a, "declared external but no activity consumes it"))

    graph = OrchestrationGraph(
        nodes=tuple(a.id for a in catalog.activities),
        edges=tuple(edges),
        external_inputs=frozenset(declared & consumed),
        findings=(),
    )
    for comp in graph.components():
        findings.append(finding("CYCLE", comp[0], "feedback loop through " + " -> ".join(comp)))
    return OrchestrationGraph(graph.nodes, graph.edges, graph.external_inputs, tuple(sort_findings(findings)))


def check_stage_consistency(graph: OrchestrationGraph, catalog: ActivityCatalog) -> list[ValidationFinding]:
    """Flag edges that flow backwards through the pipeline.

    Stages compare by each activity's earliest stage. Edges that close a
    feedback loop (both ends in the same strongly connected group) or that
    feed back into Plan are the Monitor->Plan wrap-around and are exempt.
    """
    component_of: dict[str, int] = {}
    for i, comp in enumerate(graph.components()):
        for node in comp:
            component_of[node] = i

    out = []
    for e in graph.edges:
        p, c = catalog.activity(e.producer), catalog.activity(e.consumer)
        if c.min_stage_index >= p.min_stage_index:
            continue
        if c.min_stage_index == PipelineStage.PLAN.index:
            continue
        if e.producer in component_of and component_of[e.producer] == component_of.get(e.consumer):
            continue
        p_stage = p.ordered_stages()[0].value
        c_stage = c.ordered_stages()[0].value
        out.append(
            finding(
                "STAGE_ORDER",
                c.id,
                f"consumes {e.artifact!r} from {p.id} ({p_stage}) but is mapped earlier ({c_stage})",
            )
        )
    return sort_findings(out)


def reference_findings(err: CatalogReferenceError) -> list[ValidationFinding]:
    """Turn a load-time reference failure into Error findings, one per offender."""
    out = []
    for offender in err.offenders:
        subject, _, detail = offender.partition(": ")
        out.append(finding("UNRESOLVED_REFERENCE", subject, f"unresolved {detail}"))
    return sort_findings(out)


def findings_to_jsonl(findings: Iterable[ValidationFinding]) -> str:
    return "".join(json.dumps(f.to_dict(), sort_keys=False) + "\n" for f in findings)

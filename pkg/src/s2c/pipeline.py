"""Normalized pipeline definitions and their assessment against a catalog."""

from __future__ import annotations

import datetime as dt
import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import jsonschema
import yaml

from s2c.automation import half_up_percent, require_classified
from s2c.catalog import (
    Activity,
    ActivityCatalog,
    AutomationLevel,
    PipelineStage,
    accepted_stage_names,
    activity_sort_key,
    check_schema,
    format_path,
    load_schema,
    read_json,
)
from s2c.errors import CatalogReferenceError, IoError, SchemaError, StageError

PIPELINE_SCHEMA_ID = "s2c-pipeline/1"
ATTEST_SCHEMA_ID = "s2c-attest/1"
ASSESSMENT_SCHEMA_ID = "s2c-assessment/1"


@dataclass(frozen=True)
class Step:
    name: str
    tool: str | None = None
    produces: tuple[str, ...] = ()
    order: int = 0


@dataclass(frozen=True)
class Job:
    name: str
    steps: tuple[Step, ...] = ()


@dataclass(frozen=True)
class StageBlock:
    stage: PipelineStage
    jobs: tuple[Job, ...] = ()


@dataclass(frozen=True)
class PipelineModel:
    name: str
    stages: tuple[StageBlock, ...] = ()

    def iter_steps(self) -> Iterator[tuple[PipelineStage, Job, Step]]:
        for block in self.stages:
            for job in block.jobs:
                for step in job.steps:
                    yield block.stage, job, step

    def with_step(self, stage: PipelineStage, job_name: str, step_name: str, tool: str | None) -> PipelineModel:
        """Copy of this pipeline with one extra step appended to ``stage``."""
        blocks = list(self.stages)
        idx = next((i for i, b in enumerate(blocks) if b.stage is stage), None)
        if idx is None:
            blocks.append(StageBlock(stage, ()))
            idx = len(blocks) - 1
        block = blocks[idx]
        order = sum(len(j.steps) for j in block.jobs)
        step = Step(step_name, tool, (), order)
        jobs = list(block.jobs)
        j = next((i for i, job in enumerate(jobs) if job.name == job_name), None)
        if j is None:
            jobs.append(Job(job_name, (step,)))
        else:
            jobs[j] = Job(job_name, jobs[j].steps + (step,))
        blocks[idx] = StageBlock(stage, tuple(jobs))
        return PipelineModel(self.name, tuple(blocks))


def _read_document(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise SchemaError(f"not valid UTF-8: {exc.reason}", f"byte {exc.start}") from exc
    if path.suffix.lower() == ".json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else None
        raise SchemaError(str(getattr(exc, "problem", None) or exc), where) from exc


def pipeline_from_dict(data: Any) -> PipelineModel:
    if data is None:
        raise SchemaError("empty pipeline document")
    check_schema(data, "pipeline")
    blocks = []
    for i, raw in enumerate(data["stages"]):
        try:
            stage = PipelineStage.parse(raw["stage"])
        except ValueError:
            raise StageError(
                f"unknown stage {raw['stage']!r}; accepted: {', '.join(accepted_stage_names())}",
                f"stages[{i}].stage",
            ) from None
        jobs, order = [], 0
        for raw_job in raw["jobs"]:
            steps = []
            for raw_step in raw_job["steps"]:
                steps.append(Step(raw_step["name"], raw_step.get("tool"), tuple(raw_step.get("produces", ())), order))
                order += 1
            jobs.append(Job(raw_job["name"], tuple(steps)))
        blocks.append(StageBlock(stage, tuple(jobs)))
    return PipelineModel(data["name"], tuple(blocks))


def parse_pipeline(path: str | Path) -> PipelineModel:
    """Parse a normalized pipeline file (YAML, or JSON by ``.json`` suffix)."""
    return pipeline_from_dict(_read_document(Path(path)))


@dataclass(frozen=True)
class Attestation:
    activity_id: str
    attested_by: str
    date: dt.date
    evidence_ref: str

    def to_dict(self) -> dict:
        return {
            "activity": self.activity_id,
            "attested_by": self.attested_by,
            "date": self.date.isoformat(),
            "evidence_ref": self.evidence_ref,
        }


def attestations_from_data(data: Any) -> list[Attestation]:
    """Accept either a bare JSON list or ``{"schema": "s2c-attest/1", "attestations": [...]}``."""
    if isinstance(data, dict):
        if data.get("schema") != ATTEST_SCHEMA_ID:
            raise SchemaError(f"expected schema {ATTEST_SCHEMA_ID!r}", "schema")
        items, prefix = data.get("attestations"), "attestations"
    else:
        items, prefix = data, ""
    if not isinstance(items, list):
        raise SchemaError("attestations must be a list", prefix or None)
    validator = jsonschema.Draft202012Validator(load_schema("attest")["$defs"]["attestation"])
    out = []
    for i, raw in enumerate(items):
        errors = sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path)))
        if errors:
            sub = list(errors[0].absolute_path)
            raise SchemaError(errors[0].message, f"{prefix}[{i}]" + (f".{format_path(sub)}" if sub else ""))
        try:
            date = dt.date.fromisoformat(raw["date"])
        except ValueError as exc:
            raise SchemaError(str(exc), f"{prefix}[{i}].date") from None
        out.append(Attestation(raw["activity"], raw["attested_by"], date, raw["evidence_ref"]))
    return out


def load_attestations(path: str | Path) -> list[Attestation]:
    return attestations_from_data(read_json(path))


def dumps_attestations(attestations: Iterable[Attestation]) -> str:
    doc = {"schema": ATTEST_SCHEMA_ID, "attestations": [a.to_dict() for a in attestations]}
    return json.dumps(doc, indent=2) + "\n"


class Verdict(Enum):
    SATISFIED_AUTOMATED = "SatisfiedAutomated"
    SATISFIED_ATTESTED = "SatisfiedAttested"
    PARTIALLY_COVERED = "PartiallyCovered"
    GAP = "Gap"

    @property
    def rank(self) -> int:
        """Satisfaction order used for monotonicity: Gap < Partial < Satisfied."""
        return _VERDICT_RANK[self]


_VERDICT_RANK = {
    Verdict.GAP: 0,
    Verdict.PARTIALLY_COVERED: 1,
    Verdict.SATISFIED_ATTESTED: 2,
    Verdict.SATISFIED_AUTOMATED: 2,
}


@dataclass(frozen=True)
class AssessmentResult:
    per_activity: dict[str, Verdict]
    coverage_percent: int
    evidence_manifest: tuple[tuple[str, str], ...] = field(default=())

    def to_dict(self) -> dict:
        ids = sorted(self.per_activity, key=activity_sort_key)
        return {
            "schema": ASSESSMENT_SCHEMA_ID,
            "coverage_percent": self.coverage_percent,
            "verdicts": {i: self.per_activity[i].value for i in ids},
            "evidence": [{"activity": a, "ref": r} for a, r in self.evidence_manifest],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def step_ref(stage: PipelineStage, job: Job, step: Step) -> str:
    return f"pipeline:{stage.value}/{job.name}/{step.name}"


def _matches(activity: Activity, catalog: ActivityCatalog, tool: str | None) -> bool:
    if tool is None or not activity.tools:
        return False
    ref = catalog.tool(tool)
    return ref is not None and ref.name in activity.tools


def verdict_for(activity: Activity, in_stage: bool, off_stage: bool, attested: bool) -> Verdict:
    """Coverage rules for one activity.

    ``in_stage``: a step in one of the activity's stages runs one of its tools.
    ``off_stage``: such a tool runs only in other stages.
    """
    level = activity.automation
    if level is AutomationLevel.COMPLETE:
        if in_stage:
            return Verdict.SATISFIED_AUTOMATED
        if attested:
            return Verdict.SATISFIED_ATTESTED
        if off_stage:
            return Verdict.PARTIALLY_COVERED
        return Verdict.GAP
    if level in (AutomationLevel.PARTIAL_AUTOMATION, AutomationLevel.TRANSPARENCY):
        if in_stage and attested:
            return Verdict.SATISFIED_ATTESTED
        if in_stage or attested:
            return Verdict.PARTIALLY_COVERED
        return Verdict.GAP
    return Verdict.SATISFIED_ATTESTED if attested else Verdict.GAP


def assess(pipeline: PipelineModel, catalog: ActivityCatalog, attestations: Iterable[Attestation] = ()) -> AssessmentResult:
    attestations = list(attestations)
    unknown = [a.activity_id for a in attestations if not catalog.has_activity(a.activity_id)]
    if unknown:
        raise CatalogReferenceError(f"attestation for unknown activity {i!r}" for i in unknown)
    require_classified(catalog.activities)

    attested_refs: dict[str, list[str]] = {}
    for a in attestations:
        attested_refs.setdefault(a.activity_id, []).append(f"attestation:{a.evidence_ref}")
    steps = list(pipeline.iter_steps())

    verdicts: dict[str, Verdict] = {}
    manifest: list[tuple[str, str]] = []
    for act in catalog.activities:
        in_refs, off_refs = [], []
        for stage, job, step in steps:
            if _matches(act, catalog, step.tool):
                (in_refs if stage in act.stages else off_refs).append(step_ref(stage, job, step))
        attested = act.id in attested_refs
        v = verdict_for(act, bool(in_refs), bool(off_refs), attested)
        verdicts[act.id] = v
        if v is not Verdict.GAP:
            refs = in_refs + off_refs + attested_refs.get(act.id, [])
            manifest.extend((act.id, r) for r in sorted(set(refs)))

    covered = sum(v is not Verdict.GAP for v in verdicts.values())
    return AssessmentResult(verdicts, half_up_percent(covered, len(verdicts)), tuple(manifest))


@dataclass(frozen=True)
class CoverageRow:
    scope: str
    counts: dict[Verdict, int]
    total: int
    coverage_percent: int

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "total": self.total,
            "counts": {v.value: self.counts[v] for v in Verdict},
            "coverage_percent": self.coverage_percent,
        }


def _row(scope: str, verdicts: list[Verdict]) -> CoverageRow:
    counts = {v: verdicts.count(v) for v in Verdict}
    return CoverageRow(scope, counts, len(verdicts), half_up_percent(len(verdicts) - counts[Verdict.GAP], len(verdicts)))


def coverage_report(result: AssessmentResult, catalog: ActivityCatalog) -> list[CoverageRow]:
    """One row per practice that has activities, in catalog order, then ``global``."""
    rows = []
    for p in catalog.practices:
        vs = [result.per_activity[a.id] for a in catalog.activities if a.practice == p.code]
        if vs:
            rows.append(_row(p.code, vs))
    rows.append(_row("global", [result.per_activity[a.id] for a in catalog.activities]))
    return rows

"""Activity catalogs: data model, canonical JSON format, loading and querying.

A catalog instances one security standard as a flat list of activities. Each
activity belongs to a practice, declares the artifacts it consumes and
produces, carries an automation level and the pipeline stages it is mapped
onto. Catalogs are immutable once built; collections are normalized on
construction so that structural equality does not depend on input order.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from s2c.errors import CatalogReferenceError, FilterError, IoError, SchemaError

CATALOG_SCHEMA_ID = "s2c-catalog/1"
UNCLASSIFIED = "unclassified"

ACTIVITY_ID_RE = re.compile(r"^(?P<practice>[A-Z0-9]+)-(?P<kind>[teg])(?P<index>[1-9][0-9]*)$")
PRACTICE_CODE_RE = re.compile(r"^[A-Z0-9]+$")


class AutomationLevel(Enum):
    """How far an activity can be automated.

    Declaration order follows the statistics layout; ``priority`` gives the
    roadmap order (lower comes first).
    """

    HUMAN_TASK = "HumanTask"
    TRANSPARENCY = "Transparency"
    PARTIAL_AUTOMATION = "PartialAutomation"
    TOOL_POSSIBLE = "ToolPossible"
    COMPLETE = "Complete"

    @property
    def priority(self) -> int:
        return _LEVEL_PRIORITY[self]

    @property
    def label(self) -> str:
        return _LEVEL_LABEL[self]

    @property
    def allows_tools(self) -> bool:
        return self not in (AutomationLevel.HUMAN_TASK, AutomationLevel.TOOL_POSSIBLE)

    @classmethod
    def parse(cls, value: str | AutomationLevel) -> AutomationLevel:
        if isinstance(value, cls):
            return value
        for level in cls:
            if value == level.value or value == level.name:
                return level
        raise ValueError(f"unknown automation level {value!r}")


_LEVEL_PRIORITY = {
    AutomationLevel.COMPLETE: 0,
    AutomationLevel.PARTIAL_AUTOMATION: 1,
    AutomationLevel.TRANSPARENCY: 2,
    AutomationLevel.TOOL_POSSIBLE: 3,
    AutomationLevel.HUMAN_TASK: 4,
}

_LEVEL_LABEL = {
    AutomationLevel.HUMAN_TASK: "Human Task",
    AutomationLevel.TRANSPARENCY: "Transparency",
    AutomationLevel.PARTIAL_AUTOMATION: "Partial Automation",
    AutomationLevel.TOOL_POSSIBLE: "Tool Possible",
    AutomationLevel.COMPLETE: "Complete Automation",
}

ROADMAP_ORDER: tuple[AutomationLevel, ...] = tuple(sorted(AutomationLevel, key=lambda lv: lv.priority))


class PipelineStage(Enum):
    PLAN = "Plan"
    CODE = "Code"
    BUILD = "Build"
    TEST = "Test"
    RELEASE = "Release"
    DEPLOY = "Deploy"
    OPERATE = "Operate"
    MONITOR = "Monitor"

    @property
    def index(self) -> int:
        return _STAGE_INDEX[self]

    @classmethod
    def parse(cls, name: str | PipelineStage) -> PipelineStage:
        """Resolve a stage name, case-insensitively, including aliases."""
        if isinstance(name, cls):
            return name
        try:
            return STAGE_ALIASES[str(name).strip().lower()]
        except KeyError:
            raise ValueError(f"unknown pipeline stage {name!r}") from None


_STAGE_INDEX = {stage: i for i, stage in enumerate(PipelineStage)}

STAGE_ALIASES: dict[str, PipelineStage] = {stage.value.lower(): stage for stage in PipelineStage}
STAGE_ALIASES["concept"] = PipelineStage.PLAN


def accepted_stage_names() -> list[str]:
    return [s.value for s in PipelineStage] + ["Concept (alias of Plan)"]


class RepositoryKind(Enum):
    BACKLOG = "Backlog"
    CODE_BASE = "CodeBase"
    TEST_REPO = "TestRepo"
    PRE_PRODUCTION = "PreProduction"
    PRODUCTION = "Production"
    DOCUMENTATION = "Documentation"
    ANALYTICS = "Analytics"


@dataclass(frozen=True)
class Practice:
    code: str
    name: str


@dataclass(frozen=True)
class Artifact:
    name: str
    repository: RepositoryKind
    description: str = ""


@dataclass(frozen=True)
class ToolRef:
    name: str
    categories: frozenset[str] = frozenset()
    open_source: bool = False
    ci_integrable: bool = False
    aliases: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "categories", frozenset(self.categories))
        object.__setattr__(self, "aliases", frozenset(self.aliases))

    def matches(self, name: str) -> bool:
        return name == self.name or name in self.aliases


@dataclass(frozen=True)
class Activity:
    """One orchestrable unit of a standard requirement.

    ``automation`` is None for drafts that still await classification.
    """

    id: str
    practice: str
    requirement: str
    name: str
    automation: AutomationLevel | None
    stages: frozenset[PipelineStage] = frozenset()
    inputs: frozenset[str] = frozenset()
    outputs: frozenset[str] = frozenset()
    tools: frozenset[str] = frozenset()
    description: str = ""

    def __post_init__(self):
        for name in ("stages", "inputs", "outputs", "tools"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def kind(self) -> str:
        """BPMN element kind letter encoded in the id: t, e or g."""
        m = ACTIVITY_ID_RE.match(self.id)
        return m.group("kind") if m else "?"

    @property
    def min_stage_index(self) -> int:
        return min((s.index for s in self.stages), default=len(PipelineStage))

    def ordered_stages(self) -> list[PipelineStage]:
        return sorted(self.stages, key=lambda s: s.index)


def activity_sort_key(activity_id: str) -> tuple:
    """Natural ordering so that SI-t10 sorts after SI-t9."""
    m = ACTIVITY_ID_RE.match(activity_id)
    if m is None:
        return (activity_id, "", 0)
    return (m.group("practice"), m.group("kind"), int(m.group("index")))


@dataclass(frozen=True)
class ActivityCatalog:
    standard_id: str
    version: str
    practices: tuple[Practice, ...]
    artifacts: tuple[Artifact, ...]
    tools: tuple[ToolRef, ...]
    activities: tuple[Activity, ...]
    _index: dict[str, Activity] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        # practice order is meaningful (report layout); everything else is canonicalized
        object.__setattr__(self, "practices", tuple(self.practices))
        object.__setattr__(self, "artifacts", tuple(sorted(self.artifacts, key=lambda a: a.name)))
        object.__setattr__(self, "tools", tuple(sorted(self.tools, key=lambda t: t.name)))
        object.__setattr__(self, "activities", tuple(sorted(self.activities, key=lambda a: activity_sort_key(a.id))))
        object.__setattr__(self, "_index", {a.id: a for a in self.activities})

    def activity(self, activity_id: str) -> Activity:
        return self._index[activity_id]

    def has_activity(self, activity_id: str) -> bool:
        return activity_id in self._index

    @property
    def practice_codes(self) -> list[str]:
        return [p.code for p in self.practices]

    def tool(self, name: str) -> ToolRef | None:
        """Registry lookup by exact name or alias."""
        for t in self.tools:
            if t.matches(name):
                return t
        return None

    def artifact(self, name: str) -> Artifact | None:
        for a in self.artifacts:
            if a.name == name:
                return a
        return None


def validate_catalog(catalog: ActivityCatalog) -> None:
    """Check every catalog invariant.

    Raises SchemaError for structural violations and CatalogReferenceError
    listing all names that do not resolve.
    """
    if not catalog.activities:
        raise SchemaError("Activity count > 0 violated", "activities")

    seen: set[str] = set()
    for i, p in enumerate(catalog.practices):
        if not p.code or not PRACTICE_CODE_RE.match(p.code):
            raise SchemaError(f"practice code {p.code!r} must be uppercase alphanumeric", f"practices[{i}].code")
        if p.code in seen:
            raise SchemaError(f"duplicate practice code {p.code!r}", f"practices[{i}].code")
        seen.add(p.code)

    _check_unique((a.name for a in catalog.artifacts), "artifacts", "artifact name")
    tool_names = [t.name for t in catalog.tools]
    _check_unique(tool_names, "tools", "tool name")
    _check_unique((a.id for a in catalog.activities), "activities", "activity id")

    for i, act in enumerate(catalog.activities):
        where = f"activities[{i}]"
        m = ACTIVITY_ID_RE.match(act.id)
        if m is None:
            raise SchemaError(f"id {act.id!r} does not match <PRACTICE>-<t|e|g><n>", f"{where}.id")
        if m.group("practice") != act.practice:
            raise SchemaError(f"id {act.id!r} does not carry practice prefix {act.practice!r}", f"{where}.id")
        if not act.requirement:
            raise SchemaError("requirement must be non-empty", f"{where}.requirement")
        if not act.stages:
            raise SchemaError(f"{act.id}: stages must be non-empty", f"{where}.stages")
        if act.automation is not None and not act.automation.allows_tools and act.tools:
            raise SchemaError(f"{act.id}: automation {act.automation.value} requires an empty tool set", f"{where}.tools")

    practice_codes = set(seen)
    artifact_names = {a.name for a in catalog.artifacts}
    offenders: list[str] = []
    for act in catalog.activities:
        if act.practice not in practice_codes:
            offenders.append(f"{act.id}: practice {act.practice!r}")
        for t in sorted(act.tools):
            if t not in tool_names:
                offenders.append(f"{act.id}: tool {t!r}")
        for a in sorted(act.inputs | act.outputs):
            if a not in artifact_names:
                offenders.append(f"{act.id}: artifact {a!r}")
    if offenders:
        raise CatalogReferenceError(offenders)


def _check_unique(names: Iterable[str], where: str, what: str) -> None:
    seen: set[str] = set()
    for i, name in enumerate(names):
        if name in seen:
            raise SchemaError(f"duplicate {what} {name!r}", f"{where}[{i}]")
        seen.add(name)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("s2c.schemas").joinpath(f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def format_path(path: Iterable[Any]) -> str:
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<document>"


def check_schema(data: Any, schema_name: str) -> None:
    """Validate ``data`` against a shipped JSON schema, reporting the first error by path."""
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, format_path(err.absolute_path))


def read_json(path: str | Path) -> Any:
    """Read a UTF-8 JSON file, mapping failures onto IoError / SchemaError."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SchemaError(f"not valid UTF-8: {exc.reason}", f"byte {exc.start}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc


def catalog_from_dict(data: Mapping[str, Any]) -> ActivityCatalog:
    check_schema(data, "catalog")
    activities = []
    for i, raw in enumerate(data["activities"]):
        stages = []
        for j, s in enumerate(raw["stages"]):
            try:
                stages.append(PipelineStage.parse(s))
            except ValueError as exc:
                raise SchemaError(str(exc), f"activities[{i}].stages[{j}]") from None
        automation = None if raw["automation"] == UNCLASSIFIED else AutomationLevel.parse(raw["automation"])
        activities.append(
            Activity(
                id=raw["id"],
                practice=raw["practice"],
                requirement=raw["requirement"],
                name=raw["name"],
                description=raw.get("description", ""),
                inputs=raw.get("inputs", ()),
                outputs=raw.get("outputs", ()),
                automation=automation,
                tools=raw.get("tools", ()),
                stages=stages,
            )
        )
    catalog = ActivityCatalog(
        standard_id=data["standard_id"],
        version=data["version"],
        practices=[Practice(p["code"], p["name"]) for p in data["practices"]],
        artifacts=[
            Artifact(a["name"], RepositoryKind(a["repository"]), a.get("description", "")) for a in data["artifacts"]
        ],
        tools=[
            ToolRef(
                name=t["name"],
                categories=t.get("categories", ()),
                open_source=t.get("open_source", False),
                ci_integrable=t.get("ci_integrable", False),
                aliases=t.get("aliases", ()),
            )
            for t in data["tools"]
        ],
        activities=activities,
    )
    validate_catalog(catalog)
    return catalog


def activity_to_dict(act: Activity) -> dict[str, Any]:
    return {
        "id": act.id,
        "practice": act.practice,
        "requirement": act.requirement,
        "name": act.name,
        "description": act.description,
        "inputs": sorted(act.inputs),
        "outputs": sorted(act.outputs),
        "automation": act.automation.value if act.automation else UNCLASSIFIED,
        "tools": sorted(act.tools),
        "stages": [s.value for s in act.ordered_stages()],
    }


def catalog_to_dict(catalog: ActivityCatalog) -> dict[str, Any]:
    return {
        "schema": CATALOG_SCHEMA_ID,
        "standard_id": catalog.standard_id,
        "version": catalog.version,
        "practices": [{"code": p.code, "name": p.name} for p in catalog.practices],
        "artifacts": [
            {"name": a.name, "repository": a.repository.value, "description": a.description} for a in catalog.artifacts
        ],
        "tools": [
            {
                "name": t.name,
                "categories": sorted(t.categories),
                "open_source": t.open_source,
                "ci_integrable": t.ci_integrable,
                "aliases": sorted(t.aliases),
            }
            for t in catalog.tools
        ],
        "activities": [activity_to_dict(a) for a in catalog.activities],
    }


def dumps_catalog(catalog: ActivityCatalog) -> str:
    return json.dumps(catalog_to_dict(catalog), indent=2, ensure_ascii=False) + "\n"


def load_catalog(path: str | Path) -> ActivityCatalog:
    """Load and fully validate a catalog file."""
    return catalog_from_dict(read_json(path))


def save_catalog(catalog: ActivityCatalog, path: str | Path) -> None:
    """Write the canonical serialization; equal catalogs produce identical bytes."""
    validate_catalog(catalog)
    try:
        Path(path).write_bytes(dumps_catalog(catalog).encode("utf-8"))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


@dataclass(frozen=True)
class ActivityFilter:
    practice: str | None = None
    stage: str | PipelineStage | None = None
    automation: str | AutomationLevel | None = None
    requirement: str | None = None


def query_activities(catalog: ActivityCatalog, flt: ActivityFilter | None = None) -> list[Activity]:
    """Activities matching every present filter field, in id order."""
    flt = flt or ActivityFilter()
    if flt.practice is not None and flt.practice not in catalog.practice_codes:
        raise FilterError(f"unknown practice {flt.practice!r}; known: {', '.join(catalog.practice_codes)}")
    stage = automation = None
    if flt.stage is not None:
        try:
            stage = PipelineStage.parse(flt.stage)
        except ValueError:
            raise FilterError(f"unknown stage {flt.stage!r}; accepted: {', '.join(accepted_stage_names())}") from None
    if flt.automation is not None:
        try:
            automation = AutomationLevel.parse(flt.automation)
        except ValueError:
            raise FilterError(f"unknown automation level {flt.automation!r}") from None

    return [
        a
        for a in catalog.activities
        if (flt.practice is None or a.practice == flt.practice)
        and (stage is None or stage in a.stages)
        and (automation is None or a.automation is automation)
        and (flt.requirement is None or a.requirement == flt.requirement)
    ]


def data_path(name: str) -> Path:
    """Path of a file shipped in the package data directory."""
    return Path(str(resources.files("s2c.data").joinpath(name)))

"""Automation-capability statistics and improvement roadmaps."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from s2c.catalog import Activity, ActivityCatalog, AutomationLevel, activity_sort_key
from s2c.errors import UnclassifiedError

GLOBAL_SCOPE = "global"

RATIONALE = {
    AutomationLevel.COMPLETE: "Fully automatable with available tools; integrate into the pipeline first.",
    AutomationLevel.PARTIAL_AUTOMATION: "Tools cover part of the activity; automate that part, keep the manual remainder.",
    AutomationLevel.TRANSPARENCY: "Tool output supports a human decision; deploy dashboards and reports.",
    AutomationLevel.TOOL_POSSIBLE: "Automatable in principle but no tool identified; requires tool building.",
    AutomationLevel.HUMAN_TASK: "Not automatable; plan collaboration with security experts and attest completion.",
}


def half_up_percent(part: int, whole: int) -> int:
    """round(100 * part / whole) with halves rounded up, in exact integer arithmetic."""
    if whole <= 0:
        return 0
    return (200 * part + whole) // (2 * whole)


@dataclass(frozen=True)
class AutomationSummary:
    scope: str
    counts: dict[AutomationLevel, int]
    percents: dict[AutomationLevel, int]
    total: int

    @classmethod
    def from_counts(cls, scope: str, counts: dict[AutomationLevel, int]) -> AutomationSummary:
        full = {level: counts.get(level, 0) for level in AutomationLevel}
        total = sum(full.values())
        return cls(scope, full, {lv: half_up_percent(n, total) for lv, n in full.items()}, total)

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "total": self.total,
            "counts": {lv.value: self.counts[lv] for lv in AutomationLevel},
            "percents": {lv.value: self.percents[lv] for lv in AutomationLevel},
        }


def require_classified(activities: Iterable[Activity]) -> None:
    missing = [a.id for a in activities if a.automation is None]
    if missing:
        raise UnclassifiedError(missing)


def summarize(catalog: ActivityCatalog) -> list[AutomationSummary]:
    """Per-practice summaries in catalog order, then the global one.

    Practices without activities are omitted since an empty summary has no
    percentages.
    """
    require_classified(catalog.activities)
    out = []
    overall: dict[AutomationLevel, int] = {}
    for practice in catalog.practices:
        counts: dict[AutomationLevel, int] = {}
        for a in catalog.activities:
            if a.practice == practice.code:
                counts[a.automation] = counts.get(a.automation, 0) + 1
                overall[a.automation] = overall.get(a.automation, 0) + 1
        if counts:
            out.append(AutomationSummary.from_counts(practice.code, counts))
    out.append(AutomationSummary.from_counts(GLOBAL_SCOPE, overall))
    return out


def global_summary(summaries: list[AutomationSummary]) -> AutomationSummary:
    return next(s for s in summaries if s.scope == GLOBAL_SCOPE)


def automation_potential(summary: AutomationSummary) -> int:
    """Percent of activities that are at least partially automatable (not HumanTask)."""
    return half_up_percent(summary.total - summary.counts[AutomationLevel.HUMAN_TASK], summary.total)


@dataclass(frozen=True)
class RoadmapEntry:
    rank: int
    activity_id: str
    automation: AutomationLevel
    rationale: str

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "activity": self.activity_id,
            "automation": self.automation.value,
            "rationale": self.rationale,
        }


def roadmap_key(activity: Activity) -> tuple:
    return (activity.automation.priority, activity.min_stage_index, activity_sort_key(activity.id))


def roadmap(catalog: ActivityCatalog, exclude: Iterable[str] = ()) -> list[RoadmapEntry]:
    excluded = set(exclude)
    remaining = [a for a in catalog.activities if a.id not in excluded]
    require_classified(remaining)
    ordered = sorted(remaining, key=roadmap_key)
    return [RoadmapEntry(i, a.id, a.automation, RATIONALE[a.automation]) for i, a in enumerate(ordered, start=1)]


_BAR_GLYPH = {
    AutomationLevel.HUMAN_TASK: "H",
    AutomationLevel.TRANSPARENCY: "T",
    AutomationLevel.PARTIAL_AUTOMATION: "P",
    AutomationLevel.TOOL_POSSIBLE: "O",
    AutomationLevel.COMPLETE: "C",
}
BAR_WIDTH = 50


def _bar(summary: AutomationSummary) -> str:
    # cumulative rounding keeps the bar exactly BAR_WIDTH wide
    out, cum = "", 0
    for lv in AutomationLevel:
        start = half_up_percent(cum, summary.total) * BAR_WIDTH // 100
        cum += summary.counts[lv]
        end = half_up_percent(cum, summary.total) * BAR_WIDTH // 100
        out += _BAR_GLYPH[lv] * (end - start)
    return out


def format_summary_table(summaries: list[AutomationSummary]) -> str:
    """Plain-text bar table: one row per practice plus the global row."""
    levels = list(AutomationLevel)
    head = f"{'scope':<8}{'total':>6}  " + "".join(f"{lv.value:>18}" for lv in levels) + "  bar"
    lines = [head, "-" * len(head)]
    for s in summaries:
        cells = "".join(f"{s.percents[lv]:>17}%" for lv in levels)
        lines.append(f"{s.scope:<8}{s.total:>6}  {cells}  |{_bar(s)}|")
    g = global_summary(summaries)
    lines.append("")
    lines.append("legend: " + "  ".join(f"{_BAR_GLYPH[lv]}={lv.label}" for lv in levels))
    lines.append(f"automation potential (not Human Task): {automation_potential(g)}%")
    return "\n".join(lines) + "\n"

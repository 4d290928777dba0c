"""Seeded generators of random catalogs, pipelines and attestations for property checks."""

from __future__ import annotations

import datetime as dt
import random

from s2c.catalog import (
    Activity,
    ActivityCatalog,
    Artifact,
    AutomationLevel,
    PipelineStage,
    Practice,
    RepositoryKind,
    ToolRef,
)
from s2c.pipeline import Attestation, PipelineModel

PRACTICE_POOL = ("SM", "SR", "SD", "SI", "SVV", "DM", "SUM", "SG")


def random_catalog(rng: random.Random, max_activities: int = 50, n_activities: int | None = None) -> ActivityCatalog:
    n = n_activities if n_activities is not None else rng.randint(1, max_activities)
    codes = rng.sample(PRACTICE_POOL, rng.randint(1, len(PRACTICE_POOL)))
    practices = [Practice(c, f"Practice {c}") for c in codes]
    artifacts = [Artifact(f"art-{i}", rng.choice(list(RepositoryKind))) for i in range(rng.randint(1, max(2, n)))]
    tools = [
        ToolRef(f"tool-{i}", {"random"}, rng.random() < 0.7, rng.random() < 0.8, {f"tool-{i}-alias"} if rng.random() < 0.3 else ())
        for i in range(rng.randint(1, 6))
    ]
    art_names = [a.name for a in artifacts]
    tool_names = [t.name for t in tools]
    counters: dict[tuple[str, str], int] = {}
    activities = []
    for _ in range(n):
        practice = rng.choice(codes)
        kind = rng.choice("tttteg")
        counters[practice, kind] = counters.get((practice, kind), 0) + 1
        level = rng.choice(list(AutomationLevel))
        activities.append(
            Activity(
                id=f"{practice}-{kind}{counters[practice, kind]}",
                practice=practice,
                requirement=f"{practice}-{rng.randint(1, 5)}",
                name=f"activity {len(activities)}",
                automation=level,
                stages=rng.sample(list(PipelineStage), rng.randint(1, 3)),
                inputs=rng.sample(art_names, rng.randint(0, min(3, len(art_names)))),
                outputs=rng.sample(art_names, rng.randint(0, min(3, len(art_names)))),
                tools=rng.sample(tool_names, rng.randint(0, len(tool_names))) if level.allows_tools else (),
            )
        )
    rng.shuffle(activities)
    return ActivityCatalog("RANDOM-STD", str(rng.randint(1, 9)), practices, artifacts, tools, activities)


def random_chain(rng: random.Random, n: int) -> tuple[ActivityCatalog, set[str]]:
    """Linear chain A1 -> A2 -> ... -> An; returns the catalog and its external head input."""
    artifacts = [Artifact(f"link-{i}", RepositoryKind.DOCUMENTATION) for i in range(n + 1)]
    stages = sorted(rng.choices(list(PipelineStage), k=n), key=lambda s: s.index)
    activities = [
        Activity(
            id=f"SM-t{i + 1}",
            practice="SM",
            requirement="SM-1",
            name=f"step {i + 1}",
            automation=rng.choice(list(AutomationLevel)),
            stages={stages[i]},
            inputs={f"link-{i}"},
            outputs={f"link-{i + 1}"},
        )
        for i in range(n)
    ]
    rng.shuffle(activities)
    catalog = ActivityCatalog("CHAIN", "1", [Practice("SM", "chain")], artifacts, [], activities)
    return catalog, {"link-0"}


def random_step(rng: random.Random, catalog: ActivityCatalog, label: str) -> tuple[PipelineStage, str, str | None]:
    """(stage, step name, tool) with a bias towards tools the catalog knows."""
    names = [t.name for t in catalog.tools] + [a for t in catalog.tools for a in sorted(t.aliases)]
    tool = rng.choice(names + ["unregistered-tool", None]) if names else None
    return rng.choice(list(PipelineStage)), f"step-{label}", tool


def random_pipeline(rng: random.Random, catalog: ActivityCatalog, max_steps: int = 12) -> PipelineModel:
    pipeline = PipelineModel("random")
    for i in range(rng.randint(0, max_steps)):
        stage, name, tool = random_step(rng, catalog, str(i))
        pipeline = pipeline.with_step(stage, f"job-{rng.randint(1, 3)}", name, tool)
    return pipeline


def random_attestation(rng: random.Random, catalog: ActivityCatalog) -> Attestation:
    act = rng.choice(catalog.activities)
    return Attestation(act.id, "auditor", dt.date(2026, 1, 1) + dt.timedelta(days=rng.randint(0, 300)), f"evidence/{act.id}")


def random_attestations(rng: random.Random, catalog: ActivityCatalog, max_count: int = 5) -> list[Attestation]:
    return [random_attestation(rng, catalog) for _ in range(rng.randint(0, max_count))]


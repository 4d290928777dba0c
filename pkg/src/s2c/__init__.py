"""Compliance-as-code engine for security-standard activities in DevOps pipelines."""

from s2c.catalog import (
    Activity,
    ActivityCatalog,
    ActivityFilter,
    Artifact,
    AutomationLevel,
    PipelineStage,
    Practice,
    RepositoryKind,
    ToolRef,
    load_catalog,
    query_activities,
    save_catalog,
)

__version__ = "0.1.0"

__all__ = [
    "Activity",
    "ActivityCatalog",
    "ActivityFilter",
    "Artifact",
    "AutomationLevel",
    "PipelineStage",
    "Practice",
    "RepositoryKind",
    "ToolRef",
    "load_catalog",
    "query_activities",
    "save_catalog",
]

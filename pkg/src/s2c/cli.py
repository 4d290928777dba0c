"""Command-line entry point.

Exit codes: 0 success, 1 validation failure, 2 usage or schema error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from s2c.automation import automation_potential, format_summary_table, global_summary, roadmap, summarize
from s2c.bpmn import draft_fragment, extract_activities, parse_bpmn_file
from s2c.catalog import data_path, load_catalog, read_json
from s2c.errors import CatalogReferenceError, IoError, S2CError, SchemaError
from s2c.graph import (
    Severity,
    ValidationFinding,
    build_graph,
    check_stage_consistency,
    findings_to_jsonl,
    reference_findings,
    sort_findings,
)
from s2c.pipeline import assess, load_attestations, parse_pipeline
from s2c.reporting import ReportFormat, render_gap_report, render_s2c_overview

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def load_external_inputs(path: str | Path | None) -> set[str]:
    """Sidecar of boundary artifacts: a JSON list, or one name per line (``#`` comments)."""
    if path is None:
        return set()
    p = Path(path)
    if p.suffix.lower() == ".json":
        data = read_json(p)
        if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
            raise SchemaError("external inputs must be a JSON list of artifact names", str(p))
        return set(data)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {p}: {exc.strerror or exc}") from exc
    return {ln.split("#", 1)[0].strip() for ln in text.splitlines()} - {""}


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _error(message: str) -> None:
    print(f"s2c: error: {message}", file=sys.stderr)


def cmd_validate(args: argparse.Namespace) -> int:
    externals = load_external_inputs(args.external_inputs)
    try:
        catalog = load_catalog(args.catalog)
    except CatalogReferenceError as err:
        findings = reference_findings(err)
    else:
        graph = build_graph(catalog, externals)
        findings = sort_findings(list(graph.findings) + check_stage_consistency(graph, catalog))

    if args.strict:
        findings = sort_findings(
            ValidationFinding(Severity.ERROR, f.code, f.subject, f.message, strict=True)
            if f.severity is Severity.WARNING else f
            for f in findings
        )
    if args.format == "text":
        _emit("".join(f"{f.severity.value.upper():<8}{f.code:<22}{f.subject}: {f.message}\n" for f in findings))
    else:
        _emit(findings_to_jsonl(findings))
    return EXIT_VALIDATION if any(f.severity is Severity.ERROR for f in findings) else EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    summaries = summarize(catalog)
    if args.format == "json":
        doc = {
            "standard_id": catalog.standard_id,
            "summaries": [s.to_dict() for s in summaries],
            "automation_potential": automation_potential(global_summary(summaries)),
        }
        _emit(json.dumps(doc, indent=2) + "\n")
    else:
        _emit(format_summary_table(summaries))
    return EXIT_OK


def cmd_assess(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    pipeline = parse_pipeline(args.pipeline)
    attestations = load_attestations(args.attestations) if args.attestations else []
    result = assess(pipeline, catalog, attestations)

    if args.out:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for fmt in (ReportFormat.JSON, ReportFormat.MARKDOWN, ReportFormat.SVG):
                bundle = render_gap_report(result, catalog, fmt)
                (out / f"gap-report.{fmt.extension}").write_text(bundle.text, encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write reports to {out}: {exc.strerror or exc}") from exc

    fmt = ReportFormat.JSON if args.format == "json" else ReportFormat.PLAINTEXT
    _emit(render_gap_report(result, catalog, fmt).text)
    if result.coverage_percent < args.min_coverage:
        _error(f"coverage {result.coverage_percent}% is below the required {args.min_coverage}%")
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_ingest_bpmn(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog or data_path("iec62443-4-1-sample.json"))
    if args.practice not in catalog.practice_codes:
        _error(f"unknown practice code {args.practice!r}; valid codes: {', '.join(catalog.practice_codes)}")
        return EXIT_USAGE
    model = parse_bpmn_file(args.bpmn)
    drafts = extract_activities(model, args.practice)
    _emit(json.dumps(draft_fragment(model, drafts), indent=2) + "\n")
    return EXIT_OK


def cmd_roadmap(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    entries = roadmap(catalog, args.exclude)
    if args.format == "json":
        _emit(json.dumps([e.to_dict() for e in entries], indent=2) + "\n")
    else:
        _emit("".join(
            f"{e.rank:>4}  {e.activity_id:<8} {e.automation.value:<17} {e.rationale}\n" for e in entries
        ))
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    overview = render_s2c_overview(catalog)
    text = overview.svg if args.format == "svg" else overview.text
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    else:
        _emit(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="s2c", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check orchestration integrity of a catalog")
    p.add_argument("catalog")
    p.add_argument("--external-inputs", help="sidecar listing artifacts that enter from outside")
    p.add_argument("--strict", action="store_true", help="treat warnings as errors")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="automation statistics per practice")
    p.add_argument("catalog")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("assess", help="assess a pipeline definition against a catalog")
    p.add_argument("catalog")
    p.add_argument("pipeline")
    p.add_argument("attestations", nargs="?")
    p.add_argument("--out", help="directory for JSON, Markdown and SVG reports")
    p.add_argument("--min-coverage", type=int, default=0, metavar="PERCENT")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("ingest-bpmn", help="extract draft activities from a BPMN model")
    p.add_argument("bpmn")
    p.add_argument("practice")
    p.add_argument("--catalog", help="catalog declaring the valid practice codes (default: shipped sample)")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_ingest_bpmn)

    p = sub.add_parser("roadmap", help="order activities for incremental pipeline integration")
    p.add_argument("catalog")
    p.add_argument("--exclude", nargs="*", default=[], metavar="ID")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_roadmap)

    p = sub.add_parser("render", help="render the practice x stage overview diagram")
    p.add_argument("catalog")
    p.add_argument("--format", choices=["svg", "text"], default="text")
    p.add_argument("--out", help="output file (default: standard output)")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="s2c: %(message)s")
    try:
        return args.func(args)
    except S2CError as exc:
        _error(str(exc))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""Human-readable renderings: the practice x stage overview and gap reports.

All renderers are pure functions of their inputs and produce byte-identical
output for equal inputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from xml.sax.saxutils import escape

from s2c.automation import automation_potential, global_summary, roadmap, summarize
from s2c.catalog import ActivityCatalog, PipelineStage, RepositoryKind, dumps_catalog
from s2c.errors import FormatError
from s2c.pipeline import AssessmentResult, Verdict, coverage_report

REPORT_SCHEMA_ID = "s2c-report/1"

STAGE_FILL = "#9bd49b"
PRACTICE_FILL = "#f5dc6e"
REPOSITORY_FILL = "#b5835a"
MARKER_FILL = "#2f5d8a"


class ReportFormat(Enum):
    MARKDOWN = "Markdown"
    JSON = "JSON"
    SVG = "SVG"
    PLAINTEXT = "PlainText"

    @classmethod
    def parse(cls, tag: str | ReportFormat) -> ReportFormat:
        if isinstance(tag, cls):
            return tag
        key = str(tag).strip().lower()
        aliases = {"markdown": cls.MARKDOWN, "md": cls.MARKDOWN, "json": cls.JSON, "svg": cls.SVG,
                   "plaintext": cls.PLAINTEXT, "text": cls.PLAINTEXT, "txt": cls.PLAINTEXT}
        if key not in aliases:
            raise FormatError(f"unsupported report format {tag!r}; use one of {', '.join(f.value for f in cls)}")
        return aliases[key]

    @property
    def extension(self) -> str:
        return {"Markdown": "md", "JSON": "json", "SVG": "svg", "PlainText": "txt"}[self.value]


@dataclass(frozen=True)
class ReportBundle:
    format: ReportFormat
    sections: tuple[tuple[str, str], ...]
    fingerprints: dict[str, str]
    text: str


def fingerprint(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


# -- overview ---------------------------------------------------------------

def overview_markers(catalog: ActivityCatalog) -> dict[str, set[PipelineStage]]:
    """practice code -> stages that at least one of its activities is mapped onto."""
    marks: dict[str, set[PipelineStage]] = {p.code: set() for p in catalog.practices}
    for a in catalog.activities:
        marks.setdefault(a.practice, set()).update(a.stages)
    return marks


@dataclass(frozen=True)
class Overview:
    svg: str
    text: str


CELL = 9


def _overview_text(catalog: ActivityCatalog, marks: dict[str, set[PipelineStage]]) -> str:
    stages = list(PipelineStage)
    label_w = max([len("practice")] + [len(c) for c in marks]) + 1
    lines = [f"S2C DevOps pipeline overview: {catalog.standard_id} ({catalog.version})", ""]
    lines.append("practice".ljust(label_w) + "|" + "|".join(s.value.center(CELL) for s in stages) + "|")
    lines.append("-" * label_w + "+" + "+".join("-" * CELL for _ in stages) + "+")
    for code, got in marks.items():
        lines.append(code.ljust(label_w) + "|" + "|".join(("X" if s in got else "").center(CELL) for s in stages) + "|")
    lines.append("")
    lines.append("repositories:")
    for repo, n in _repository_counts(catalog):
        lines.append(f"  {repo.value:<14} {n:>3} artifact(s)")
    lines.append("")
    lines.append("X = at least one activity of the practice is mapped onto the stage")
    return "\n".join(lines) + "\n"


def _repository_counts(catalog: ActivityCatalog) -> list[tuple[RepositoryKind, int]]:
    return [(r, sum(a.repository is r for a in catalog.artifacts)) for r in RepositoryKind]


def _overview_svg(catalog: ActivityCatalog, marks: dict[str, set[PipelineStage]]) -> str:
    stages = list(PipelineStage)
    col_w, row_h, label_w, top = 90, 32, 70, 50
    width = label_w + col_w * len(stages) + 20
    repo_top = top + row_h * (len(marks) + 1) + 30
    height = repo_top + row_h + 60
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f"<title>S2C DevOps pipeline overview: {escape(catalog.standard_id)}</title>",
        f'<text x="10" y="24" font-size="15">S2C DevOps pipeline: {escape(catalog.standard_id)} '
        f"({escape(catalog.version)})</text>",
    ]
    for j, s in enumerate(stages):
        x = label_w + j * col_w
        out.append(f'<rect x="{x}" y="{top}" width="{col_w - 4}" height="{row_h - 4}" fill="{STAGE_FILL}"/>')
        out.append(f'<text x="{x + (col_w - 4) // 2}" y="{top + 19}" text-anchor="middle">{s.value}</text>')
    for i, (code, got) in enumerate(marks.items(), start=1):
        y = top + i * row_h
        out.append(f'<rect x="10" y="{y}" width="{label_w - 14}" height="{row_h - 4}" fill="{PRACTICE_FILL}"/>')
        out.append(f'<text x="{10 + (label_w - 14) // 2}" y="{y + 19}" text-anchor="middle">{escape(code)}</text>')
        for j, s in enumerate(stages):
            if s in got:
                cx = label_w + j * col_w + (col_w - 4) // 2
                out.append(
                    f'<circle cx="{cx}" cy="{y + (row_h - 4) // 2}" r="8" fill="{MARKER_FILL}">'
                    f"<title>{escape(code)} in {s.value}</title></circle>"
                )
    out.append(f'<text x="10" y="{repo_top - 8}">Repositories</text>')
    repo_w = (width - 20) // len(RepositoryKind)
    for k, (repo, n) in enumerate(_repository_counts(catalog)):
        x = 10 + k * repo_w
        out.append(f'<rect x="{x}" y="{repo_top}" width="{repo_w - 4}" height="{row_h + 8}" fill="{REPOSITORY_FILL}"/>')
        out.append(f'<text x="{x + (repo_w - 4) // 2}" y="{repo_top + 17}" text-anchor="middle" fill="#ffffff">{repo.value}</text>')
        out.append(f'<text x="{x + (repo_w - 4) // 2}" y="{repo_top + 33}" text-anchor="middle" fill="#ffffff">{n}</text>')
    legend_y = repo_top + row_h + 35
    out.append(
        f'<circle cx="18" cy="{legend_y - 4}" r="6" fill="{MARKER_FILL}"/>'
        f'<text x="30" y="{legend_y}">activity of the practice mapped onto the stage</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_s2c_overview(catalog: ActivityCatalog) -> Overview:
    marks = overview_markers(catalog)
    return Overview(svg=_overview_svg(catalog, marks), text=_overview_text(catalog, marks))


# -- gap report -------------------------------------------------------------

def report_data(result: AssessmentResult, catalog: ActivityCatalog) -> dict:
    """Format-independent content of a gap report."""
    rows = coverage_report(result, catalog)
    potential = automation_potential(global_summary(summarize(catalog)))
    gaps = []
    for entry in roadmap(catalog):
        if result.per_activity[entry.activity_id] is Verdict.GAP:
            act = catalog.activity(entry.activity_id)
            gaps.append({
                "rank": entry.rank,
                "activity": act.id,
                "name": act.name,
                "practice": act.practice,
                "automation": act.automation.value,
                "stages": [s.value for s in act.ordered_stages()],
            })
    return {
        "schema": REPORT_SCHEMA_ID,
        "standard_id": catalog.standard_id,
        "catalog_version": catalog.version,
        "fingerprints": {
            "catalog": fingerprint(dumps_catalog(catalog)),
            "assessment": fingerprint(result.dumps()),
        },
        "summary": {
            "activities": len(result.per_activity),
            "coverage_percent": result.coverage_percent,
            "automation_potential_percent": potential,
            "gaps": len(gaps),
        },
        "practices": [r.to_dict() for r in rows],
        "gaps": gaps,
        "evidence": [{"activity": a, "ref": r} for a, r in result.evidence_manifest],
    }


SECTION_TITLES = {
    "summary": "Executive summary",
    "practices": "Coverage by practice",
    "gaps": "Gaps in roadmap order",
    "evidence": "Evidence manifest",
}
VERDICT_COLS = [v for v in Verdict]


def _md_sections(d: dict) -> list[tuple[str, str]]:
    s = d["summary"]
    summary = (
        f"- Standard: {d['standard_id']} ({d['catalog_version']})\n"
        f"- Activities assessed: {s['activities']}\n"
        f"- Coverage: **{s['coverage_percent']}%**\n"
        f"- Automation potential (not Human Task): {s['automation_potential_percent']}%\n"
        f"- Gaps: {s['gaps']}\n"
    )
    head = "| Practice | Total | " + " | ".join(v.value for v in VERDICT_COLS) + " | Coverage |\n"
    head += "|---|---:|" + "---:|" * len(VERDICT_COLS) + "---:|\n"
    body = "".join(
        f"| {r['scope']} | {r['total']} | " + " | ".join(str(r["counts"][v.value]) for v in VERDICT_COLS)
        + f" | {r['coverage_percent']}% |\n"
        for r in d["practices"]
    )
    if d["gaps"]:
        gaps = "| Rank | Activity | Automation | Stages | Name |\n|---:|---|---|---|---|\n" + "".join(
            f"| {g['rank']} | {g['activity']} | {g['automation']} | {', '.join(g['stages'])} | {g['name']} |\n"
            for g in d["gaps"]
        )
    else:
        gaps = "No gaps.\n"
    evidence = "".join(f"- {e['activity']}: `{e['ref']}`\n" for e in d["evidence"]) or "No evidence recorded.\n"
    return [
        (SECTION_TITLES["summary"], summary),
        (SECTION_TITLES["practices"], head + body),
        (SECTION_TITLES["gaps"], gaps),
        (SECTION_TITLES["evidence"], evidence),
    ]


def _text_sections(d: dict) -> list[tuple[str, str]]:
    s = d["summary"]
    summary = (
        f"standard:              {d['standard_id']} ({d['catalog_version']})\n"
        f"activities assessed:   {s['activities']}\n"
        f"coverage:              {s['coverage_percent']}%\n"
        f"automation potential:  {s['automation_potential_percent']}%\n"
        f"gaps:                  {s['gaps']}\n"
    )
    widths = [max(len(v.value), 4) for v in VERDICT_COLS]
    table = f"{'practice':<9}{'total':>6}  " + "  ".join(v.value.rjust(w) for v, w in zip(VERDICT_COLS, widths)) + "  coverage\n"
    for r in d["practices"]:
        table += f"{r['scope']:<9}{r['total']:>6}  " + "  ".join(
            str(r["counts"][v.value]).rjust(w) for v, w in zip(VERDICT_COLS, widths)
        ) + f"  {r['coverage_percent']:>7}%\n"
    gaps = "".join(
        f"{g['rank']:>4}  {g['activity']:<8} {g['automation']:<17} {','.join(g['stages']):<20} {g['name']}\n"
        for g in d["gaps"]
    ) or "no gaps\n"
    evidence = "".join(f"{e['activity']:<8} {e['ref']}\n" for e in d["evidence"]) or "no evidence\n"
    return [
        (SECTION_TITLES["summary"], summary),
        (SECTION_TITLES["practices"], table),
        (SECTION_TITLES["gaps"], gaps),
        (SECTION_TITLES["evidence"], evidence),
    ]


_VERDICT_FILL = {
    Verdict.SATISFIED_AUTOMATED: "#2e7d32",
    Verdict.SATISFIED_ATTESTED: "#81c784",
    Verdict.PARTIALLY_COVERED: "#ffb74d",
    Verdict.GAP: "#e57373",
}


def _svg_sections(d: dict) -> list[tuple[str, str]]:
    s = d["summary"]
    bar_w, row_h, x0 = 400, 24, 90
    summary = (
        f'<text x="10" y="24" font-size="15">Gap report: {escape(d["standard_id"])} '
        f"({escape(d['catalog_version'])})</text>\n"
        f'<text x="10" y="44">coverage {s["coverage_percent"]}% | automation potential '
        f'{s["automation_potential_percent"]}% | gaps {s["gaps"]} of {s["activities"]}</text>\n'
    )
    bars = []
    for i, r in enumerate(d["practices"]):
        y = 64 + i * row_h
        bars.append(f'<text x="10" y="{y + 15}">{escape(r["scope"])}</text>')
        x = 0
        for v in VERDICT_COLS:
            n = r["counts"][v.value]
            w = bar_w * n // r["total"] if r["total"] else 0
            if v is VERDICT_COLS[-1]:
                w = bar_w - x
            if w > 0:
                bars.append(
                    f'<rect x="{x0 + x}" y="{y}" width="{w}" height="{row_h - 6}" fill="{_VERDICT_FILL[v]}">'
                    f"<title>{escape(r['scope'])} {v.value}: {n}</title></rect>"
                )
            x += w
        bars.append(f'<text x="{x0 + bar_w + 8}" y="{y + 15}">{r["coverage_percent"]}%</text>')
    legend_y = 64 + len(d["practices"]) * row_h + 14
    for k, v in enumerate(VERDICT_COLS):
        lx = 10 + k * 130
        bars.append(f'<rect x="{lx}" y="{legend_y - 10}" width="12" height="12" fill="{_VERDICT_FILL[v]}"/>')
        bars.append(f'<text x="{lx + 16}" y="{legend_y}">{v.value}</text>')
    gap_y = legend_y + 28
    gaps = [f'<text x="10" y="{gap_y}" font-size="13">Gaps in roadmap order</text>']
    for k, g in enumerate(d["gaps"]):
        gaps.append(
            f'<text x="10" y="{gap_y + 18 * (k + 1)}">{g["rank"]}. {escape(g["activity"])} '
            f'[{g["automation"]}] {escape(g["name"])}</text>'
        )
    return [
        (SECTION_TITLES["summary"], summary),
        (SECTION_TITLES["practices"], "\n".join(bars) + "\n"),
        (SECTION_TITLES["gaps"], "\n".join(gaps) + "\n"),
    ]


def render_gap_report(result: AssessmentResult, catalog: ActivityCatalog, fmt: str | ReportFormat) -> ReportBundle:
    fmt = ReportFormat.parse(fmt)
    d = report_data(result, catalog)
    prints = d["fingerprints"]

    if fmt is ReportFormat.JSON:
        sections = [(SECTION_TITLES[k], json.dumps(d[k], indent=2)) for k in SECTION_TITLES]
        text = json.dumps(d, indent=2) + "\n"
    elif fmt is ReportFormat.MARKDOWN:
        sections = _md_sections(d)
        text = f"# Compliance gap report: {d['standard_id']}\n\n" + "\n".join(
            f"## {title}\n\n{body}" for title, body in sections
        ) + "\n" + "".join(f"<!-- {k}: {v} -->\n" for k, v in prints.items())
    elif fmt is ReportFormat.PLAINTEXT:
        sections = _text_sections(d)
        text = "\n".join(f"== {title} ==\n{body}" for title, body in sections) + "".join(
            f"\n{k}: {v}" for k, v in prints.items()
        ) + "\n"
    else:
        sections = _svg_sections(d)
        height = 64 + len(d["practices"]) * 24 + 14 + 28 + 18 * (len(d["gaps"]) + 1) + 20
        text = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            + "".join(f"<!-- {k}: {v} -->\n" for k, v in prints.items())
            + f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="620" height="{height}" '
            f'viewBox="0 0 620 {height}" font-family="sans-serif" font-size="12">\n'
            + "<title>Compliance gap report</title>\n"
            + "".join(body for _, body in sections)
            + "</svg>\n"
        )
    return ReportBundle(fmt, tuple(sections), dict(prints), text)

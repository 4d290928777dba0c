"""Rewrite the golden files under tests/golden/ from the shipped sample data.

Run after an intentional rendering change and review the diff:

    python scripts/regen_golden.py && git diff tests/golden
"""

from __future__ import annotations

from pathlib import Path

from s2c.catalog import data_path, load_catalog
from s2c.pipeline import assess, load_attestations, parse_pipeline
from s2c.reporting import ReportFormat, render_gap_report, render_s2c_overview

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    catalog = load_catalog(data_path("iec62443-4-1-sample.json"))
    overview = render_s2c_overview(catalog)
    (GOLDEN / "s2c_overview.txt").write_text(overview.text, encoding="utf-8")
    (GOLDEN / "s2c_overview.svg").write_text(overview.svg, encoding="utf-8")

    result = assess(
        parse_pipeline(data_path("demo-pipeline.yaml")),
        catalog,
        load_attestations(data_path("demo-attestations.json")),
    )
    for fmt in ReportFormat:
        bundle = render_gap_report(result, catalog, fmt)
        (GOLDEN / f"demo_gap_report.{fmt.extension}").write_text(bundle.text, encoding="utf-8")
    print(f"golden files written to {GOLDEN}")


if __name__ == "__main__":
    main()

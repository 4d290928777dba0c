"""Regenerate the 160-activity statistics fixture.

Raw per-level counts are not published, only rounded shares. The per-practice
rows below are a constructed witness: global counts 61/14/22/13/50 round
(half-up) to 38/9/14/8/31 over 160 activities, SG is all Human Task, SR has
only Human Task and Partial Automation, and SM/SVV/SUM are the practices with
the most Complete activities.

    python scripts/make_fixture160.py [output-path]
"""

from __future__ import annotations

import sys
from pathlib import Path

from s2c.catalog import (
    Activity,
    ActivityCatalog,
    AutomationLevel,
    PipelineStage,
    Practice,
    ToolRef,
    data_path,
    save_catalog,
)

H, T, P, O, C = (
    AutomationLevel.HUMAN_TASK,
    AutomationLevel.TRANSPARENCY,
    AutomationLevel.PARTIAL_AUTOMATION,
    AutomationLevel.TOOL_POSSIBLE,
    AutomationLevel.COMPLETE,
)

# practice -> (name, counts H/T/P/O/C, stages)
ROWS = {
    "SM": ("Security management", (4, 1, 2, 2, 11), ("Code", "Build", "Test")),
    "SR": ("Specification of security requirements", (10, 0, 8, 0, 0), ("Plan",)),
    "SD": ("Secure design", (12, 4, 3, 2, 1), ("Plan",)),
    "SI": ("Secure implementation", (6, 2, 3, 2, 8), ("Code", "Build")),
    "SVV": ("Security verification and validation testing", (3, 1, 4, 2, 15), ("Build", "Test", "Release")),
    "DM": ("Management of security-related issues", (10, 6, 1, 4, 3), ("Plan", "Monitor")),
    "SUM": ("Security update management", (4, 0, 1, 1, 12), ("Operate", "Monitor")),
    "SG": ("Security guidelines", (12, 0, 0, 0, 0), ("Release", "Deploy")),
}


def build() -> ActivityCatalog:
    practices, tools, activities = [], [], []
    for code, (name, counts, stages) in ROWS.items():
        practices.append(Practice(code, name))
        tool = f"{code.lower()}-tool"
        tools.append(ToolRef(tool, {"fixture"}, open_source=True, ci_integrable=True))
        n = 0
        for level, count in zip((H, T, P, O, C), counts):
            for _ in range(count):
                n += 1
                activities.append(
                    Activity(
                        id=f"{code}-t{n}",
                        practice=code,
                        requirement=f"{code}-{(n - 1) // 5 + 1}",
                        name=f"{name} activity {n}",
                        automation=level,
                        stages={PipelineStage.parse(s) for s in stages},
                        tools={tool} if level.allows_tools else set(),
                    )
                )
    return ActivityCatalog("IEC-62443-4-1", "fixture-160", practices, [], tools, activities)


def main(argv: list[str]) -> int:
    out = Path(argv[1]) if len(argv) > 1 else data_path("fixture-160.json")
    catalog = build()
    save_catalog(catalog, out)
    print(f"wrote {len(catalog.activities)} activities to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

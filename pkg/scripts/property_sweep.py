"""Timed sweep over random catalogs: graph edges vs. brute force, assessment monotonicity, round-trips.

    python scripts/property_sweep.py --catalogs 1000 --triples 500 --roundtrips 200 --seed 0

Prints one JSON object with counts, failures and wall-clock seconds per experiment.
"""

from __future__ import annotations

import argparse
import json
import random
import tempfile
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from s2c.catalog import load_catalog, save_catalog
from s2c.graph import build_graph
from s2c.pipeline import assess
from s2c.synth import random_attestation, random_attestations, random_catalog, random_pipeline, random_step


@dataclass(frozen=True)
class SweepConfig:
    catalogs: int = 1000
    triples: int = 500
    roundtrips: int = 200
    max_activities: int = 50
    seed: int = 0


def cross_product_edges(cat) -> set[tuple[str, str, str]]:
    return {
        (p.id, c.id, a)
        for p in cat.activities
        for c in cat.activities
        if p.id != c.id
        for a in p.outputs & c.inputs
    }


def sweep_edges(cfg: SweepConfig, rng: random.Random) -> int:
    bad = 0
    for _ in range(cfg.catalogs):
        cat = random_catalog(rng, cfg.max_activities)
        got = {(e.producer, e.consumer, e.artifact) for e in build_graph(cat).edges}
        bad += got != cross_product_edges(cat)
    return bad


def sweep_monotonicity(cfg: SweepConfig, rng: random.Random) -> int:
    bad = 0
    for _ in range(cfg.triples):
        cat = random_catalog(rng, cfg.max_activities)
        pipe, atts = random_pipeline(rng, cat), random_attestations(rng, cat)
        before = assess(pipe, cat, atts).per_activity
        stage, name, tool = random_step(rng, cat, "x")
        for after in (
            assess(pipe.with_step(stage, "job-x", name, tool), cat, atts).per_activity,
            assess(pipe, cat, atts + [random_attestation(rng, cat)]).per_activity,
        ):
            bad += any(after[k].rank < v.rank for k, v in before.items())
    return bad


def sweep_roundtrip(cfg: SweepConfig, rng: random.Random) -> int:
    bad = 0
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp) / "a.json", Path(tmp) / "b.json"
        for _ in range(cfg.roundtrips):
            cat = random_catalog(rng, cfg.max_activities)
            save_catalog(cat, a)
            again = load_catalog(a)
            save_catalog(again, b)
            bad += again != cat or a.read_bytes() != b.read_bytes()
    return bad


def run(cfg: SweepConfig) -> dict:
    out = {"config": asdict(cfg)}
    for name, fn in (("edges", sweep_edges), ("monotonicity", sweep_monotonicity), ("roundtrip", sweep_roundtrip)):
        t0 = time.perf_counter()
        failures = fn(cfg, random.Random(cfg.seed))
        out[name] = {"failures": failures, "seconds": round(time.perf_counter() - t0, 3)}
    return out


def main() -> None:
    defaults = SweepConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for field, value in asdict(defaults).items():
        ap.add_argument(f"--{field.replace('_', '-')}", type=int, default=value)
    cfg = SweepConfig(**vars(ap.parse_args()))
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerate the golden test fixtures from the canonical grid seed.

Run after any intentional change to synthesis, serialization, or rendering,
then review the diff before committing.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from planverify import grids, render, schema

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--rooms", type=int, default=8)
    args = parser.parse_args()

    grid = grids.synthesize_grid(args.seed, args.rooms)
    plan, spec, _ = grids.grid_to_plan(grid)
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "golden_plan.json").write_text(schema.serialize_plan(plan))
    (DATA / "golden_spec.json").write_text(schema.serialize_spec(spec))
    (DATA / "golden.svg").write_text(render.render_svg(plan))
    print(f"wrote fixtures for seed={args.seed} rooms={args.rooms} to {DATA}")


if __name__ == "__main__":
    main()

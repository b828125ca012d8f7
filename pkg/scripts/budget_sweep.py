#!/usr/bin/env python3
"""Best-of-n budget sweep over synthetic noisy candidates.

For each budget n, draw n candidates per seed from the noisy generator,
select with the (overlap area, compatibility, index) rule, and report the
mean selected compatibility and overlap area.  Larger budgets should drive
both toward zero.
"""

from __future__ import annotations

import argparse
import json
import math
import statistics

from planverify import grids, selection
from planverify.candidates import NoiseConfig, noisy_candidates


def run_sweep(budgets: list[int], seeds: int, room_count: int, noise: NoiseConfig) -> list[dict]:
    rows = []
    for n in budgets:
        compat, overlap, invalid_best = [], [], 0
        for seed in range(seeds):
            grid = grids.synthesize_grid(seed, room_count)
            _, spec, _ = grids.grid_to_plan(grid)
            result = selection.best_of(spec, noisy_candidates(grid, n, seed + 500, noise))
            key = result.keys[result.selected_index]
            if key[0] == math.inf:
                invalid_best += 1
                continue
            overlap.append(key[0])
            compat.append(key[1])
        rows.append(
            {
                "budget": n,
                "seeds": seeds,
                "mean_compatibility": statistics.mean(compat),
                "mean_overlap_area": statistics.mean(overlap),
                "all_invalid_runs": invalid_best,
            }
        )
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--budgets", default="1,10,100")
    parser.add_argument("--seeds", type=int, default=50)
    parser.add_argument("--rooms", type=int, default=8)
    parser.add_argument("--door-drop", type=float, default=NoiseConfig.door_drop_prob)
    parser.add_argument("--overlap-prob", type=float, default=NoiseConfig.overlap_prob)
    parser.add_argument("--invalid-prob", type=float, default=NoiseConfig.invalid_prob)
    args = parser.parse_args()

    budgets = sorted({int(tok) for tok in args.budgets.split(",") if tok.strip()})
    noise = NoiseConfig(args.door_drop, args.overlap_prob, args.invalid_prob)
    for row in run_sweep(budgets, args.seeds, args.rooms, noise):
        print(json.dumps(row))


if __name__ == "__main__":
    main()

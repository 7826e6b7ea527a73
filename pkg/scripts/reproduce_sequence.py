"""Optimal TotalMax cost for 1..N mints, with timings.

    python scripts/reproduce_sequence.py --max-mints 6
    python scripts/reproduce_sequence.py --max-mints 7 --time-limit 3600 --checkpoint-dir runs/
"""
import argparse
import json
import os
import time

from apsimon.core import CostKind, bounds, verify_scheme
from apsimon.search import SearchConfig, search_optimal

REFERENCE = [1, 2, 4, 8, 15, 38, 74]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-mints", type=int, default=6)
    p.add_argument("--cost", default="total-max", choices=[k.value for k in CostKind])
    p.add_argument("--time-limit", type=float, default=None, help="seconds per n")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--checkpoint-dir", default=None)
    p.add_argument("--out", default=None, help="write all results as JSON")
    args = p.parse_args()

    results = []
    for n in range(1, args.max_mints + 1):
        ckpt = None
        resume = None
        if args.checkpoint_dir:
            os.makedirs(args.checkpoint_dir, exist_ok=True)
            ckpt = os.path.join(args.checkpoint_dir, f"{args.cost}-n{n}.json")
            resume = ckpt if os.path.exists(ckpt) else None
        t0 = time.monotonic()
        config = SearchConfig(n, CostKind(args.cost), time_limit=args.time_limit, threads=args.threads)
        r = search_optimal(config, checkpoint=ckpt, resume=resume)
        dt = time.monotonic() - t0
        ok = r.best_scheme is not None and verify_scheme(r.best_scheme).feasible
        ref = REFERENCE[n - 1] if args.cost == "total-max" and n <= len(REFERENCE) else None
        lo, hi = bounds(n)
        print(f"n={n}  cost={r.best_cost}  status={r.status.value}  ref={ref}  "
              f"bounds=[{lo},{hi}]  nodes={r.stats.nodes}  {dt:.1f}s  verified={ok}", flush=True)
        if r.best_scheme is not None:
            print("      columns:", " ".join(map(str, r.best_scheme.columns)), flush=True)
        results.append({"n": n, "reference": ref, "elapsed_s": round(dt, 3), **r.to_json()})

    if args.out:
        with open(args.out, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()

"""Largest number of mints testable when every coin count is at most c."""
import argparse

from apsimon.core import bounds
from apsimon.search import capacity_max_mints


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-cap", type=int, default=5)
    p.add_argument("--time-limit", type=float, default=None)
    args = p.parse_args()
    for c in range(1, args.max_cap + 1):
        r = capacity_max_mints(c, time_limit=args.time_limit)
        tag = "proven" if r.proven else "unproven"
        line = f"c={c}  max_mints={r.max_mints} ({tag})  nodes={r.stats.nodes}  {r.stats.elapsed:.1f}s"
        if r.max_mints:
            # dropping mints keeps feasibility, so c*n bounds the TotalMax optimum for n <= max_mints
            line += "  cn-bounds: " + ", ".join(
                f"n={n}:{bounds(n, (c, r.max_mints))[1]}" for n in range(1, r.max_mints + 1))
        print(line, flush=True)
        if r.witness is not None:
            print("      witness:", " ".join(map(str, r.witness.columns)), flush=True)


if __name__ == "__main__":
    main()

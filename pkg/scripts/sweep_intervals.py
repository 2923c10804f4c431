#!/usr/bin/env python3
"""Sweep all core paths up to a given arc count and tabulate how their
pairwise intervals classify: how many are gaps, dense chains, or universal.

Also reports the census of cores by height, which makes the structure of
the bottom of the order visible at a glance.
"""
import argparse
from collections import Counter

from homorder import classify_interval, core, iter_paths
from homorder.order import Classification, strictly_less
from homorder.structures import height


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-arcs", type=int, default=7)
    args = ap.parse_args()

    cores: list = []
    seen: set[str] = set()
    for p in iter_paths(args.max_arcs):
        c = core(p).core_as_path()
        assert c is not None
        key = min(c.directions, c.reverse().directions)
        if key not in seen:
            seen.add(key)
            cores.append(c)

    by_height = Counter(height(c) for c in cores)
    print(f"distinct cores (up to reversal) with <= {args.max_arcs} arcs: {len(cores)}")
    for h in sorted(by_height):
        print(f"  height {h}: {by_height[h]}")

    verdicts: Counter = Counter()
    for a in cores:
        for b in cores:
            if strictly_less(a, b):
                verdicts[classify_interval(a, b).classification] += 1
    total = sum(verdicts.values())
    print(f"strictly ordered pairs: {total}")
    for cls in Classification:
        if verdicts[cls]:
            print(f"  {cls.value}: {verdicts[cls]}")


if __name__ == "__main__":
    main()

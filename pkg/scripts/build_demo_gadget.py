#!/usr/bin/env python3
"""Find a demonstration triple (p1, p, p2), build the indicator gadget,
verify it, and write the bundle JSON.

The triple is chosen so that the undersized negative control (zig-zag
length 2) genuinely fails a condition, which makes the bundle useful for
exercising both the positive and the negative verification paths.
"""
import argparse
import json
import sys
import time
from pathlib import Path

from homorder import gadget


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "manifests" / "demo_gadget.json"),
    )
    ap.add_argument("--q-bound", type=int, default=3)
    args = ap.parse_args()

    t0 = time.time()
    p1, mid, p2 = gadget.find_demo_triple(require_negative_control=True)
    print(f"triple: p1={p1.directions!r} p={mid.directions!r} p2={p2.directions!r} "
          f"({time.time() - t0:.1f}s)")

    t0 = time.time()
    built = gadget.build_indicator(p1, p2, mid, gadget.GadgetConfig(q_arc_bound=args.q_bound))
    report = built.verification
    assert report is not None and report.all_verified()
    print(f"gadget: variant={built.variant.value} z1={built.z1_len} z2={built.z2_len} "
          f"arcs={built.path.n_arcs} verified ({time.time() - t0:.1f}s)")

    t0 = time.time()
    emb = gadget.verify_embedding(built)
    print(f"embedding: pairs={emb.pairs_checked} ok={emb.all_ok} ({time.time() - t0:.1f}s)")
    if not emb.all_ok:
        return 1

    bundle = gadget.gadget_to_json_dict(built)
    Path(args.out).write_text(json.dumps(bundle, sort_keys=True, indent=2) + "\n")
    print(f"bundle written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

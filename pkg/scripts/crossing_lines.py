"""Tangent dimensions on the genus-one fiber cut out by two crossing lines in P^3.

Prints each group of points from the worked example with its tangent
dimensions, then the full JSON report with --json.

    python3 scripts/crossing_lines.py --field q
"""

from __future__ import annotations

import argparse
import sys

from schubtan.exactlinalg import Field
from schubtan.verify import run_example_0202


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", type=Field.parse, default=Field(1009))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="print the full report")
    args = ap.parse_args()

    rep = run_example_0202(args.field, seed=args.seed)
    if args.json:
        print(rep.to_json())
    else:
        groups = {}
        for inst in rep.instances:
            groups.setdefault(inst["class"], []).append(inst)
        for cls, insts in groups.items():
            dims = sorted({i["dim"] for i in insts if "dim" in i})
            print(f"{cls:>14}: {len(insts)} records, tangent dims {dims}")
        print(f"ok={rep.ok} violations={len(rep.violations)} wall={rep.wall_time:.2f}s")
    return 0 if rep.ok else 2


if __name__ == "__main__":
    sys.exit(main())

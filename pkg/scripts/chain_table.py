"""Tabulate refined chain assignments over all ramification data in a range.

For each (g, r) prints how many data are nonempty, whether nonemptiness matched
the sign of rho_hat, and whether the largest total matched rho.

    python3 scripts/chain_table.py --g-max 3 --r-max 2 --d-max 6
"""

from __future__ import annotations

import argparse
import sys
import time

from schubtan.brillnoether import all_bn_data, chain_dimension_check


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g-max", type=int, default=3)
    ap.add_argument("--r-max", type=int, default=2)
    ap.add_argument("--d-max", type=int, default=6)
    args = ap.parse_args()

    start = time.perf_counter()
    failures = 0
    print(f"{'g':>2} {'r':>2} {'data':>6} {'nonempty':>9} {'assignments':>12} {'bad':>4}")
    for g in range(args.g_max + 1):
        for r in range(args.r_max + 1):
            verdicts = [chain_dimension_check(x) for d in range(r, args.d_max + 1) for x in all_bn_data(g, r, d)]
            bad = sum(not v.ok for v in verdicts)
            failures += bad
            print(
                f"{g:>2} {r:>2} {len(verdicts):>6} {sum(v.nonempty for v in verdicts):>9} "
                f"{sum(v.assignments for v in verdicts):>12} {bad:>4}"
            )
    print(f"{failures} disagreements in {time.perf_counter() - start:.1f}s")
    return 0 if failures == 0 else 2


if __name__ == "__main__":
    sys.exit(main())

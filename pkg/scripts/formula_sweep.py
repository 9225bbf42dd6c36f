"""Exhaustive comparison of the pair tangent formula against the linearization oracle.

Covers every pair of Schubert indices for d <= --d-max, r <= --r-max and each
flag-pair class, sampling --points points of the intersection of open strata.
Prints one summary line per (d, r) and a JSON total at the end.

    python3 scripts/formula_sweep.py --field q
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from collections import Counter

from schubtan.exactlinalg import Field
from schubtan.flags import almost_transverse_perm, general_perms, longest, random_flags_with_sigma
from schubtan.oracle import tangent_dim_oracle
from schubtan.schubert import coxeter_bound, sample_sigma_circ_point, schubert_indices, tangent_dim_pair_formula


def flag_classes(d: int):
    yield "identical", tuple(range(1, d + 1))
    yield "transverse", longest(d)
    for t in range(1, d):
        yield f"almost:{t}", almost_transverse_perm(d, t)
    if d >= 3:
        yield "general", general_perms(d)[0]


def sweep(fld: Field, d_max: int, r_max: int, points: int, seed: int) -> dict:
    tally = Counter()
    start = time.perf_counter()
    for d in range(1, d_max + 1):
        for r in range(min(r_max, d - 1) + 1):
            row = Counter()
            for cls, sigma in flag_classes(d):
                for a in schubert_indices(d, r):
                    for b in schubert_indices(d, r):
                        rng = random.Random(f"{seed}:{d}:{r}:{cls}:{a.seq}:{b.seq}")
                        p, q = random_flags_with_sigma(fld, sigma, rng)
                        if cls == "identical":
                            q = p
                        row["instances"] += 1
                        for _ in range(points):
                            lam = sample_sigma_circ_point(p, a, q, b, rng)
                            if lam is None:
                                row["empty"] += 1
                                break
                            dim = tangent_dim_pair_formula(lam, p, a, q, b).dim
                            row["points"] += 1
                            row["mismatch"] += dim != tangent_dim_oracle(lam, [(p, a), (q, b)])
                            row["above_bound"] += dim > coxeter_bound(lam, p, a, q, b)
            print(f"d={d} r={r} " + " ".join(f"{k}={row[k]}" for k in sorted(row)), flush=True)
            tally.update(row)
    return {"field": str(fld), **{k: tally[k] for k in sorted(tally)}, "seconds": round(time.perf_counter() - start, 2)}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", type=Field.parse, default=Field(1009))
    ap.add_argument("--d-max", type=int, default=4)
    ap.add_argument("--r-max", type=int, default=2)
    ap.add_argument("--points", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    total = sweep(args.field, args.d_max, args.r_max, args.points, args.seed)
    print(json.dumps(total))
    return 0 if total.get("mismatch", 0) == 0 and total.get("above_bound", 0) == 0 else 2


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Reproduce the small exact Ramsey values: r(H), M(H, r(H)) and the
witness colorings, for a battery of paths, stars, cliques and cycles.

Usage: python3 scripts/small_values.py [--n-max 10] [--out table.json]
"""

import argparse
import json
import time

from ramseykit.graphs import PatternGraph, encode, mono_counts
from ramseykit.search import SearchBudget, multiplicity, ramsey_number

PATTERNS = ["K2", "S2", "S3", "P3", "P4", "P5", "P6", "K3", "C4", "C5"]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--budget-nodes", type=int, default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    budget = SearchBudget(max_nodes=args.budget_nodes) if args.budget_nodes else None

    rows = []
    for label in PATTERNS:
        h = PatternGraph.parse(label)
        t0 = time.monotonic()
        rn = ramsey_number(h, args.n_max, budget)
        if rn.value is None:
            print(f"{label:>4}: r > {args.n_max} (settled={rn.exact})")
            continue
        rep = multiplicity(h, rn.value, budget)
        elapsed = time.monotonic() - t0
        check = sum(mono_counts(rep.witness, h))
        status = "exact" if (rn.exact and rep.exact) else "PARTIAL"
        print(
            f"{label:>4}: r = {rn.value:2d}   m = {rep.value:5d}   "
            f"[{status}, witness recount {check}, {elapsed:.2f}s]"
        )
        rows.append(
            {
                "pattern": label,
                "ramsey_number": rn.value,
                "threshold_multiplicity": rep.value,
                "exact": rn.exact and rep.exact,
                "witness_kcol": encode(rep.witness),
                "seconds": round(elapsed, 3),
            }
        )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=2)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Scan primitive characters by conductor and summarize least-prime ratios.

Writes the CSV (same format as `grunwald scan`) and prints decile maxima
of ratio_C so the absence of an upward trend is visible at a glance.
"""

import argparse
import time

from grunwald import ratio_c_decile_maxima, scan_family, write_scan_csv
from grunwald.core_arith import Place


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-conductor", type=int, default=2000)
    parser.add_argument("--S", default="", help="comma-separated places to exclude")
    parser.add_argument("--epsilon", type=float, default=0.1)
    parser.add_argument("--out", default="scan.csv")
    args = parser.parse_args()

    S = tuple(Place.parse(part) for part in args.S.split(",") if part)
    t0 = time.time()
    records = list(scan_family(args.max_conductor, S, args.epsilon))
    with open(args.out, "w", encoding="utf-8") as handle:
        count = write_scan_csv(records, handle)
    print(f"{count} primitive characters with conductor <= {args.max_conductor} "
          f"({time.time() - t0:.1f}s) -> {args.out}")

    clean = [rec for rec in records if not rec.cap_exceeded]
    print(f"flagged (cap exceeded): {count - len(clean)}")
    print(f"max least prime: {max(rec.least_prime for rec in clean)}")
    print(f"max ratio_A: {max(rec.ratio_a for rec in clean):.6f}")
    print(f"max ratio_B: {max(rec.ratio_b for rec in clean):.6f}")
    print("ratio_C decile maxima (by conductor):")
    for i, v in enumerate(ratio_c_decile_maxima(records, args.max_conductor)):
        lo = i * args.max_conductor // 10 + 1
        hi = (i + 1) * args.max_conductor // 10
        print(f"  {lo:>5}..{hi:<5} {v:.6f}")


if __name__ == "__main__":
    main()

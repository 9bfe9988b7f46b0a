#!/usr/bin/env python3
"""Sweep the solver over S subsets of {2, 3, 5, 7, infinity} and small exponents.

For every cell: construct a character with mixed unramified/ramified
prescriptions, compare against the exhaustive oracle, and report the
shape ratio log N(construct) / [m * |S u S_inf| * log(N_S * m)].
"""

import itertools
import math
import time

from grunwald import (
    bound_report,
    conductor,
    construct,
    local_character,
    make_instance,
    oracle_minimal,
    sign_local,
    unramified_local,
)
from grunwald.core_arith import Place

BASE = [2, 3, 5, 7, "inf"]
EXPONENTS = [2, 3, 4, 8, 9]


def prescriptions(m, S):
    chars = []
    for p in sorted(p for p in S if p != "inf"):
        g = math.gcd(m, p - 1)
        if p == 2 and m % 2 == 0:
            chars.append(local_character(Place(2), m, conductor_exponent=2, unit_exponents=(m // 2,)))
        elif m % p == 0 and p > 2:
            chars.append(
                local_character(
                    Place(p), m, conductor_exponent=2,
                    unit_exponents=(m // math.gcd(m, (p - 1) * p),),
                )
            )
        elif g > 1:
            chars.append(local_character(Place(p), m, conductor_exponent=1, unit_exponents=(m // g,)))
        else:
            chars.append(unramified_local(p, m, 1))
    if "inf" in S:
        chars.append(sign_local(m, 1 if m % 2 == 0 else 0))
    return chars


def main() -> None:
    t0 = time.time()
    worst = (0.0, None)
    print(f"{'m':>2} {'S':<16} {'constructed':>12} {'oracle':>10} {'ratio':>8}")
    for m in EXPONENTS:
        for k in range(len(BASE) + 1):
            for S in itertools.combinations(BASE, k):
                inst = make_instance(m, prescriptions(m, set(S)))
                sol = construct(inst)
                n = conductor(sol.character).norm
                best = oracle_minimal(inst, n)
                bn = conductor(best.character).norm
                ratio = bound_report(inst, sol).shape_ratio
                if ratio > worst[0]:
                    worst = (ratio, (m, S))
                label = ",".join(str(x) for x in S) or "-"
                print(f"{m:>2} {label:<16} {n:>12} {bn:>10} {ratio:>8.4f}")
    print(f"\nmax shape ratio {worst[0]:.6f} at (m, S) = {worst[1]} [{time.time() - t0:.1f}s]")


if __name__ == "__main__":
    main()

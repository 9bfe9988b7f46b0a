#!/usr/bin/env python3
"""Walk through the classical exponent-8 obstruction at p = 2.

Prescribes an order-8 character of Q_2 whose value at 16 is -1, shows that
no global character of exponent 8 can match it (exhaustively below a cap),
and then builds the minimal exponent-16 solution.
"""

import time

from grunwald import (
    conductor,
    construct,
    local_character,
    local_component,
    make_instance,
    obstruction_exponent,
    oracle_minimal,
    special_case,
)
from grunwald.core_arith import Place
from grunwald.errors import NoSolutionBelowCap
from grunwald.wang_special import FieldDescriptor

CAP = 10**5


def main() -> None:
    psi = local_character(
        Place(2), 8, conductor_exponent=5, unit_exponents=(0, 1), uniformizer_exponent=1
    )
    inst = make_instance(8, [psi])

    rep = special_case(FieldDescriptor(1), 8, (Place(2),))
    print(f"special case occurs: {rep.occurs}, a0 = {rep.a0}, S0 = {{2}}")
    print(f"obstruction exponent of the prescribed data: {obstruction_exponent(inst)} (mod 8)")

    t0 = time.time()
    try:
        oracle_minimal(inst, CAP, exponent=8)
        print("unexpected: an exponent-8 character matched")
    except NoSolutionBelowCap:
        print(f"no exponent-8 character with conductor <= {CAP} ({time.time() - t0:.1f}s, exhaustive)")

    sol = construct(inst)
    chi = sol.character
    print(f"exponent-16 solution: modulus {chi.modulus}, exponents {chi.exponents}")
    print(f"conductor {conductor(chi)} (norm {conductor(chi).norm})")
    print(f"auxiliary primes {sol.aux_primes}, cycle {sol.cycle}")
    print(f"2-adic component matches prescription: {local_component(chi, Place(2)) == psi}")

    t0 = time.time()
    best = oracle_minimal(inst, conductor(chi).norm, exponent=16)
    print(
        f"oracle agrees the minimum is {conductor(best.character).norm} "
        f"({time.time() - t0:.1f}s)"
    )


if __name__ == "__main__":
    main()

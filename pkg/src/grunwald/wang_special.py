"""Detection of the special case in the Grunwald-Wang theorem.

The base field is Q or a quadratic field Q(sqrt d).  A report says whether
the special case occurs for a given exponent m and place set S, and if so
exhibits the distinguished element a0 whose coset measures the failure:
a0 = (2 + eta)^{m/2} where eta generates the maximal real 2-power
cyclotomic subfield (eta = 0 over Q, eta = sqrt 2 over Q(sqrt 2)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core_arith import (
    Place,
    _require_squarefree,
    factor,
    is_mth_power_rational,
    is_square_in_quadratic_field,
    lth_power_test_local,
    primes_stream,
    two_adic_square_profile,
    valuation,
)
from .errors import NoWitnessError, SearchCapError, ValidationError


@dataclass(frozen=True)
class FieldDescriptor:
    """Q (d = 1) or the quadratic field Q(sqrt d) for squarefree d."""

    d: int = 1

    def __post_init__(self):
        if self.d != 1:
            _require_squarefree(self.d)

    @staticmethod
    def rationals() -> "FieldDescriptor":
        return FieldDescriptor(1)

    @staticmethod
    def quadratic(d: int) -> "FieldDescriptor":
        return FieldDescriptor(d)

    @staticmethod
    def parse(text: str) -> "FieldDescriptor":
        if text == "Q":
            return FieldDescriptor.rationals()
        if text.startswith("Qsqrt:"):
            try:
                return FieldDescriptor.quadratic(int(text[6:]))
            except ValueError:
                pass
        raise ValidationError(f"cannot parse field '{text}'")

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    @property
    def degree(self) -> int:
        return 1 if self.d == 1 else 2

    def __str__(self) -> str:
        return "Q" if self.d == 1 else f"Q(sqrt {self.d})"


def s_invariant(field: FieldDescriptor) -> int:
    """Largest s with zeta + 1/zeta in the field for a 2^s-th root of unity.

    eta_4 = 0 lies in Q, so s >= 2 always; eta_8 = sqrt 2 only enters for
    d = 2, and eta_16 already has degree 4, out of reach of our fields.
    """
    return 3 if field.d == 2 else 2


@dataclass(frozen=True)
class SpecialCaseReport:
    occurs: bool
    s: int
    a0: Fraction | None
    a0_coords: tuple[Fraction, Fraction] | None
    S0: frozenset[Place]
    failed_condition: str | None


def _critical_elements(field: FieldDescriptor, s: int):
    """-1 and +-(2 + eta_{2^s}) as coordinate pairs x0 + x1*sqrt(d)."""
    if s == 2:
        return ((Fraction(-1), Fraction(0)), (Fraction(2), Fraction(0)),
                (Fraction(-2), Fraction(0)))
    return ((Fraction(-1), Fraction(0)), (Fraction(2), Fraction(1)),
            (Fraction(-2), Fraction(-1)))


def _power_coords(x0: Fraction, x1: Fraction, d: int, n: int):
    a, b = Fraction(1), Fraction(0)
    for _ in range(n):
        a, b = a * x0 + b * x1 * d, a * x1 + b * x0
    return a, b


def special_case(field: FieldDescriptor, m: int, S) -> SpecialCaseReport:
    """Decide whether exponent m is special for the place set S.

    The special case needs all of: (b) -1 and +-(2 + eta) are nonsquares
    in the field, (c) 2^{s+1} divides m, (d) every place above 2 where
    those elements stay locally nonsquare already lies in S.
    """
    if m < 1:
        raise ValidationError(f"bad exponent {m}")
    S = frozenset(S)
    s = s_invariant(field)
    d = field.d
    elements = _critical_elements(field, s)

    cond_b = all(not is_square_in_quadratic_field(x0, x1, d) for x0, x1 in elements)
    cond_c = m % 2 == 0 and valuation(m, 2) > s
    profiles = [two_adic_square_profile(x0, x1, d) for x0, x1 in elements]
    offending = any(
        all(not prof[i] for prof in profiles) for i in range(len(profiles[0]))
    )
    S0 = frozenset({Place.finite(2)}) if offending else frozenset()
    cond_d = S0 <= S

    failed = None
    if not cond_b:
        failed = "b"
    elif not cond_c:
        failed = "c"
    elif not cond_d:
        failed = "d"
    if failed is not None:
        return SpecialCaseReport(False, s, None, None, S0, failed)

    x0, x1 = _power_coords(*elements[1], d, m // 2)
    if x1 == 0:
        return SpecialCaseReport(True, s, x0, None, S0, None)
    return SpecialCaseReport(True, s, None, (x0, x1), S0, None)


def is_mth_power_in_qp(x: Fraction, v: Place, m: int) -> bool:
    """x an m-th power in Q_v for arbitrary m (prime-power parts tested)."""
    if m < 1:
        raise ValidationError(f"bad power index {m}")
    return all(lth_power_test_local(x, v, l**r) for l, r in factor(m).factors)


def membership_P_m_S(x: Fraction, m: int, S) -> bool:
    """x in P(m, S): an m-th power in every completion of Q outside S.

    By the structure of that group, membership reduces to x or x/a0 being
    a global m-th power, the latter only when the special case occurs.
    """
    x = Fraction(x)
    if x == 0:
        raise ValidationError("membership test of zero")
    if is_mth_power_rational(x, m):
        return True
    report = special_case(FieldDescriptor.rationals(), m, S)
    return report.occurs and is_mth_power_rational(x / report.a0, m)


def witness_prime(x: Fraction, m: int, S=(), cap: int = 10**6) -> int:
    """Least prime outside S where x fails to be a local m-th power.

    Raises NoWitnessError when x lies in P(m, S) so no witness exists, and
    SearchCapError when the search passes cap without finding one.
    """
    x = Fraction(x)
    if x == 0:
        raise ValidationError("witness search for zero")
    S = frozenset(S)
    if membership_P_m_S(x, m, S):
        raise NoWitnessError(f"{x} is an everywhere-local {m}-th power outside S")
    for p in primes_stream():
        if p > cap:
            break
        if Place.finite(p) in S:
            continue
        if not is_mth_power_in_qp(x, Place.finite(p), m):
            return p
    raise SearchCapError(f"no witness prime up to {cap}")

"""Finite-order characters of completions of Q and Dirichlet characters.

Values are stored as zeta-exponents: a character value exp(2*pi*i*t/m) is
represented by the residue t mod m, so all arithmetic stays exact.  The
local-global dictionary follows one fixed normalization: at a ramified
prime the local character inverts the CRT factor on units, and the value
on a uniformizer p collects the complementary CRT factors at p.  That
convention is pinned down by the product-formula tests; flipping it would
flip the sign in exactly two places below.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .core_arith import (
    FactoredInteger,
    Place,
    components,
    crt,
    dlog_units,
    factor,
    unit_group,
    unit_residue,
    valuation,
    valuation_rational,
)
from .errors import ValidationError


@dataclass(frozen=True)
class CycleValue:
    """A formal cycle of Q: a finite part and a real-place bit."""

    finite_part: FactoredInteger
    real_bit: int

    @property
    def norm(self) -> int:
        return self.finite_part.value

    def __str__(self) -> str:
        text = str(self.finite_part)
        return text + "*infinity" if self.real_bit else text


def _slice_conductor_exponent(p: int, k: int, exps: tuple[int, ...], m: int) -> int:
    """Conductor exponent of the character with the given value exponents
    on the canonical generators of (Z/p^k)^*."""
    if k == 0:
        return 0
    if p != 2:
        t = exps[0] % m
        if t == 0:
            return 0
        return valuation(m // math.gcd(m, t), p) + 1
    if k == 1:
        return 0
    if k == 2:
        return 2 if exps[0] % m else 0
    t1 = exps[1] % m
    if t1 == 0:
        return 2 if exps[0] % m else 0
    return valuation(m // math.gcd(m, t1), 2) + 2


def _minimize_unit_part(
    p: int, k: int, exps: tuple[int, ...], m: int
) -> tuple[int, tuple[int, ...]]:
    kp = _slice_conductor_exponent(p, k, exps, m)
    if kp == k:
        return k, tuple(t % m for t in exps)
    if kp == 0:
        return 0, ()
    new = []
    for g in components(p**kp)[0].local_generators:
        vec = dlog_units(p**k, g)
        new.append(sum(t * e for t, e in zip(exps, vec)) % m)
    return kp, tuple(new)


@dataclass(frozen=True, eq=False)
class LocalCharacter:
    """Finite-order character of Q_p^* or R^*, of exponent dividing
    exponent_modulus, with minimal conductor exponent.

    Equality is scale invariant: the same character written with a larger
    exponent modulus compares equal.
    """

    place: Place
    exponent_modulus: int
    conductor_exponent: int
    unit_exponents: tuple[int, ...]
    uniformizer_exponent: int
    sign_exponent: int

    def _key(self):
        m = self.exponent_modulus
        if self.place.is_real:
            return (None, self.sign_exponent % 2)
        return (
            self.place.prime,
            self.conductor_exponent,
            tuple(Fraction(t, m) % 1 for t in self.unit_exponents),
            Fraction(self.uniformizer_exponent, m) % 1,
        )

    def __eq__(self, other):
        if not isinstance(other, LocalCharacter):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def is_ramified(self) -> bool:
        return self.conductor_exponent > 0

    @property
    def conductor_norm(self) -> int:
        if self.place.is_real:
            return 1
        return self.place.prime**self.conductor_exponent

    def order(self) -> int:
        m = self.exponent_modulus
        if self.place.is_real:
            return 2 if self.sign_exponent % 2 else 1
        g = math.gcd(m, self.uniformizer_exponent)
        for t in self.unit_exponents:
            g = math.gcd(g, t)
        return m // g


def local_character(
    place: Place,
    m: int,
    conductor_exponent: int = 0,
    unit_exponents: tuple[int, ...] = (),
    uniformizer_exponent: int = 0,
    sign_exponent: int = 0,
) -> LocalCharacter:
    """Build and normalize a local character (conductor exponent minimized)."""
    if m < 1:
        raise ValidationError(f"bad exponent modulus {m}")
    if place.is_real:
        sign = sign_exponent % 2
        if sign and m % 2:
            raise ValidationError("sign character needs an even exponent modulus")
        if tuple(unit_exponents) or uniformizer_exponent:
            raise ValidationError("real place carries only a sign")
        return LocalCharacter(place, m, sign, (), 0, sign)
    if sign_exponent:
        raise ValidationError("sign exponent only applies to the real place")
    k = conductor_exponent
    if k < 0:
        raise ValidationError(f"bad conductor exponent {k}")
    p = place.prime
    exps = tuple(t % m for t in unit_exponents)
    orders = components(p**k)[0].orders if k else ()
    if len(exps) != len(orders):
        raise ValidationError(
            f"expected {len(orders)} unit exponents mod {p}^{k}, got {len(exps)}"
        )
    for t, o in zip(exps, orders):
        if t * o % m:
            raise ValidationError("unit exponents incompatible with generator orders")
    k, exps = _minimize_unit_part(p, k, exps, m)
    return LocalCharacter(place, m, k, exps, uniformizer_exponent % m, 0)


def unramified_local(p: int, m: int, value_exponent: int) -> LocalCharacter:
    return local_character(Place.finite(p), m, 0, (), value_exponent)


def sign_local(m: int, sign_exponent: int) -> LocalCharacter:
    return local_character(Place.real(), m, 0, (), 0, sign_exponent)


@dataclass(frozen=True)
class DirichletCharacter:
    """Character of (Z/modulus)^* as exponents on the canonical generators."""

    modulus: int
    exponent_modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        orders = unit_group(self.modulus).orders
        if len(self.exponents) != len(orders):
            raise ValidationError(
                f"expected {len(orders)} exponents mod {self.modulus}, "
                f"got {len(self.exponents)}"
            )
        for t, o in zip(self.exponents, orders):
            if not 0 <= t < self.exponent_modulus:
                raise ValidationError("exponents must be reduced")
            if t * o % self.exponent_modulus:
                raise ValidationError(
                    "exponents incompatible with unit-group orders"
                )


def make_dirichlet(N: int, exponents, m: int) -> DirichletCharacter:
    if m < 1:
        raise ValidationError(f"bad exponent modulus {m}")
    return DirichletCharacter(N, m, tuple(t % m for t in exponents))


def trivial_character(N: int = 1, m: int = 1) -> DirichletCharacter:
    return DirichletCharacter(N, m, tuple(0 for _ in unit_group(N).orders))


def evaluate(chi: DirichletCharacter, n: int) -> int | None:
    """Zeta-exponent of chi(n), or None for the extended-by-zero values."""
    if math.gcd(n, chi.modulus) != 1:
        return None
    vec = dlog_units(chi.modulus, n)
    return sum(t * e for t, e in zip(chi.exponents, vec)) % chi.exponent_modulus


def character_order(chi: DirichletCharacter) -> int:
    g = chi.exponent_modulus
    for t in chi.exponents:
        g = math.gcd(g, t)
    return chi.exponent_modulus // g


def pow_character(chi: DirichletCharacter, j: int) -> DirichletCharacter:
    m = chi.exponent_modulus
    return DirichletCharacter(chi.modulus, m, tuple(t * j % m for t in chi.exponents))


def conductor_exponents(chi: DirichletCharacter) -> tuple[tuple[int, int], ...]:
    """Minimal (prime, exponent) pairs for the cycle through which chi factors."""
    out = []
    for c in components(chi.modulus):
        sl = chi.exponents[c.offset : c.offset + len(c.orders)]
        kp = _slice_conductor_exponent(c.prime, c.exponent, sl, chi.exponent_modulus)
        if kp:
            out.append((c.prime, kp))
    return tuple(out)


def conductor(chi: DirichletCharacter) -> CycleValue:
    pairs = conductor_exponents(chi)
    value = math.prod(p**k for p, k in pairs)
    bit = 0
    if chi.modulus > 2:
        bit = 0 if evaluate(chi, chi.modulus - 1) == 0 else 1
    return CycleValue(FactoredInteger(value, pairs), bit)


def primitivize(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character inducing chi (same exponent modulus)."""
    f = conductor(chi).norm
    if f == chi.modulus:
        return chi
    M = 1
    for q, e in factor(chi.modulus).factors:
        if f % q:
            M *= q**e
    exps = []
    for g in unit_group(f).generators:
        x = crt(g, f, 1, M) if M > 1 else g
        exps.append(evaluate(chi, x))
    return DirichletCharacter(f, chi.exponent_modulus, tuple(exps))


def local_component(chi: DirichletCharacter, v: Place) -> LocalCharacter:
    """The local component of the idele-class character attached to chi."""
    m = chi.exponent_modulus
    if v.is_real:
        bit = conductor(chi).real_bit
        return LocalCharacter(v, m, bit, (), 0, bit)
    p = v.prime
    comps = components(chi.modulus)
    mine = None
    for c in comps:
        if c.prime == p:
            mine = c
            break
    if mine is None:
        return local_character(v, m, 0, (), evaluate(chi, p))
    sl = chi.exponents[mine.offset : mine.offset + len(mine.orders)]
    unit_exps = tuple((-t) % m for t in sl)
    unif = 0
    for c in comps:
        if c.prime == p:
            continue
        vec = dlog_units(c.prime_power, p)
        csl = chi.exponents[c.offset : c.offset + len(c.orders)]
        unif += sum(t * e for t, e in zip(csl, vec))
    return local_character(v, m, mine.exponent, unit_exps, unif % m)


def evaluate_local(chi_v: LocalCharacter, x: Fraction) -> int:
    """Zeta-exponent of the local character at a nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValidationError("local evaluation at zero")
    m = chi_v.exponent_modulus
    if chi_v.place.is_real:
        return chi_v.sign_exponent * (m // 2) % m if x < 0 else 0
    p = chi_v.place.prime
    a = valuation_rational(x, p)
    total = a * chi_v.uniformizer_exponent
    k = chi_v.conductor_exponent
    if k:
        u = unit_residue(x, p, k)
        vec = dlog_units(p**k, u)
        total += sum(t * e for t, e in zip(chi_v.unit_exponents, vec))
    return total % m


def verify_product_formula(chi: DirichletCharacter, x: Fraction) -> bool:
    """Check that the local values of x sum to zero (chi trivial on Q^*)."""
    x = Fraction(x)
    if x == 0:
        raise ValidationError("product formula at zero")
    primes = {p for p, _ in conductor(chi).finite_part.factors}
    primes |= {p for p, _ in factor(abs(x.numerator)).factors}
    primes |= {p for p, _ in factor(x.denominator).factors}
    total = evaluate_local(local_component(chi, Place.real()), x)
    for p in sorted(primes):
        total += evaluate_local(local_component(chi, Place.finite(p)), x)
    return total % chi.exponent_modulus == 0


def field_discriminant(chi: DirichletCharacter) -> int:
    """Discriminant of the abelian field cut out by chi (conductor product)."""
    prim = primitivize(chi)
    return math.prod(
        conductor(pow_character(prim, i)).norm for i in range(character_order(prim))
    )


def iter_characters(N: int, exponent: int | None = None, primitive_only: bool = False):
    """All characters mod N of exponent dividing `exponent`, in lex order.

    exponent None means every character (exponent lcm of the generator
    orders).  With primitive_only, only those of conductor exactly N.
    """
    orders = unit_group(N).orders
    mu = exponent if exponent is not None else math.lcm(1, *orders)
    slots = []
    for o in orders:
        g = math.gcd(mu, o)
        step = mu // g
        slots.append([c * step for c in range(g)])
    for combo in itertools.product(*slots):
        chi = DirichletCharacter(N, mu, combo)
        if primitive_only and conductor(chi).norm != N:
            continue
        yield chi


_CHARACTER_KEYS = {"modulus", "exponent_modulus", "exponents"}


def character_to_dict(chi: DirichletCharacter) -> dict:
    return {
        "modulus": chi.modulus,
        "exponent_modulus": chi.exponent_modulus,
        "exponents": list(chi.exponents),
    }


def character_from_dict(data: dict) -> DirichletCharacter:
    for key in data:
        if key not in _CHARACTER_KEYS:
            raise ValidationError(f"unknown key '{key}'")
    try:
        return make_dirichlet(
            int(data["modulus"]),
            [int(t) for t in data["exponents"]],
            int(data["exponent_modulus"]),
        )
    except KeyError as missing:
        raise ValidationError(f"missing key {missing}") from None

"""Exact integer and p-adic primitives.

Factorization, unit groups of residue rings, discrete logarithms, and
power tests in completions of Q and of quadratic fields at the prime 2.
Everything is exact integer/rational arithmetic; no floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InternalContradictionError, NonUnitError, ValidationError

FACTOR_LIMIT = 1 << 96

# Deterministic Miller-Rabin witness set: the first twelve primes certify
# everything below 3.3e24; the extras give margin up to FACTOR_LIMIT scale.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_stream():
    """Yield 2, 3, 5, 7, ... indefinitely (incremental sieve)."""
    yield 2
    sieve: dict[int, int] = {}
    n = 3
    while True:
        p = sieve.pop(n, 0)
        if not p:
            yield n
            sieve[n * n] = n
        else:
            nxt = n + 2 * p
            while nxt in sieve:
                nxt += 2 * p
            sieve[nxt] = p
        n += 2


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of odd composite n (Brent's cycle variant).

    The polynomial offsets are tried in a fixed order, so the returned
    factor is deterministic.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise InternalContradictionError(f"rho exhausted all offsets on {n}")


_SMALL_PRIMES = tuple(itertools.islice(primes_stream(), 200))


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its certified prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod, prev = 1, 1
        for p, e in self.factors:
            if p <= prev or e < 1 or not is_prime(p):
                raise ValidationError(f"bad factorization for {self.value}")
            prev = p
            prod *= p**e
        if self.value < 1 or prod != self.value:
            raise ValidationError(f"factors do not recompose {self.value}")

    @classmethod
    def one(cls) -> "FactoredInteger":
        return cls(1, ())

    def times(self, other: "FactoredInteger") -> "FactoredInteger":
        merged = dict(self.factors)
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return FactoredInteger(self.value * other.value, tuple(sorted(merged.items())))

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def radical(self) -> int:
        return math.prod(p for p, _ in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


@lru_cache(maxsize=None)
def factor(n: int) -> FactoredInteger:
    if not 1 <= n <= FACTOR_LIMIT:
        raise ValidationError(f"factor target out of range: {n}")
    remaining = n
    found: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > remaining:
            break
        while remaining % p == 0:
            found[p] = found.get(p, 0) + 1
            remaining //= p
    if remaining > 1:
        stack = [remaining]
        while stack:
            v = stack.pop()
            if is_prime(v):
                found[v] = found.get(v, 0) + 1
            else:
                d = _pollard_rho(v)
                stack += [d, v // d]
    return FactoredInteger(n, tuple(sorted(found.items())))


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValidationError("valuation of zero")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime, or the real place encoded as prime=None."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None and not is_prime(self.prime):
            raise ValidationError(f"not a certified prime: {self.prime}")

    @classmethod
    def real(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "Place":
        if text == "infinity":
            return cls(None)
        try:
            value = int(text)
        except ValueError:
            raise ValidationError(f"bad place {text!r}") from None
        return cls(value)

    @property
    def is_real(self) -> bool:
        return self.prime is None

    def sort_key(self) -> tuple[int, int]:
        return (1, 0) if self.prime is None else (0, self.prime)

    def __str__(self) -> str:
        return "infinity" if self.prime is None else str(self.prime)


@dataclass(frozen=True)
class UnitGroupStructure:
    """Cyclic decomposition of (Z/N)^* on canonical generators."""

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]


@dataclass(frozen=True)
class UnitComponent:
    """The p-part of (Z/N)^* for one prime power p^k dividing N exactly.

    `generators` are CRT-lifted residues mod N (congruent to 1 modulo the
    complementary part); `local_generators` are the same residues mod p^k.
    `offset` locates this component's slots in the full exponent vector.
    """

    prime: int
    exponent: int
    prime_power: int
    generators: tuple[int, ...]
    local_generators: tuple[int, ...]
    orders: tuple[int, ...]
    offset: int


def _primitive_root_mod_pk(p: int, k: int) -> int:
    pk = p**k
    phi = pk // p * (p - 1)
    qs = [q for q, _ in factor(phi).factors]
    g = 2
    while True:
        if g % p and all(pow(g, phi // q, pk) != 1 for q in qs):
            return g
        g += 1


@lru_cache(maxsize=None)
def components(N: int) -> tuple[UnitComponent, ...]:
    if not 1 <= N <= FACTOR_LIMIT:
        raise ValidationError(f"modulus out of range: {N}")
    out = []
    offset = 0
    for p, k in factor(N).factors:
        pk = p**k
        if p == 2:
            if k == 1:
                local: tuple[int, ...] = ()
                orders: tuple[int, ...] = ()
            elif k == 2:
                local, orders = (3,), (2,)
            else:
                local, orders = (pk - 1, 5), (2, pk // 4)
        else:
            local = (_primitive_root_mod_pk(p, k),)
            orders = (pk // p * (p - 1),)
        cof = N // pk
        if cof == 1:
            lifted = local
        else:
            inv = pow(cof, -1, pk)
            lifted = tuple((1 + cof * ((g - 1) * inv % pk)) % N for g in local)
        out.append(UnitComponent(p, k, pk, lifted, local, orders, offset))
        offset += len(local)
    return tuple(out)


def unit_group(N: int) -> UnitGroupStructure:
    comps = components(N)
    return UnitGroupStructure(
        N,
        tuple(g for c in comps for g in c.generators),
        tuple(o for c in comps for o in c.orders),
    )


@lru_cache(maxsize=512)
def _bsgs_table(g: int, modulus: int, order: int):
    m = math.isqrt(order - 1) + 1 if order > 1 else 1
    table: dict[int, int] = {}
    x = 1
    for j in range(m):
        table.setdefault(x, j)
        x = x * g % modulus
    return m, table, pow(g, -m, modulus)


def _bsgs(g: int, x: int, modulus: int, order: int) -> int:
    m, table, giant = _bsgs_table(g, modulus, order)
    y = x % modulus
    for i in range(m + 1):
        j = table.get(y)
        if j is not None:
            return (i * m + j) % order
        y = y * giant % modulus
    raise NonUnitError(f"{x} not in the subgroup of {g} mod {modulus}")


def dlog_units(N: int, x: int) -> tuple[int, ...]:
    """Exponent vector of x on the canonical generators of (Z/N)^*."""
    if N == 1:
        return ()
    x %= N
    if math.gcd(x, N) != 1:
        raise NonUnitError(f"gcd({x}, {N}) != 1")
    out: list[int] = []
    for c in components(N):
        xi = x % c.prime_power
        if c.prime == 2:
            if c.exponent == 1:
                continue
            if c.exponent == 2:
                out.append(0 if xi == 1 else 1)
                continue
            a = 0 if xi % 4 == 1 else 1
            y = (-xi) % c.prime_power if a else xi
            out.append(a)
            out.append(_bsgs(5, y, c.prime_power, c.orders[1]))
        else:
            out.append(_bsgs(c.local_generators[0], xi, c.prime_power, c.orders[0]))
    return tuple(out)


def crt(r1: int, m1: int, r2: int, m2: int) -> int:
    """The residue mod m1*m2 matching r1 mod m1 and r2 mod m2 (coprime moduli)."""
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)


def prime_power(m: int) -> tuple[int, int]:
    """Write m = l^r with r >= 1, or raise for non prime powers."""
    if m < 2:
        raise ValidationError(f"not a prime power: {m}")
    pairs = factor(m).factors
    if len(pairs) != 1:
        raise ValidationError(f"not a prime power: {m}")
    return pairs[0]


def integer_nth_root(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 0 or k < 1:
        raise ValidationError("root of negative or bad index")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def is_mth_power_rational(x: Fraction, m: int) -> bool:
    if m < 1:
        raise ValidationError(f"bad power index {m}")
    x = Fraction(x)
    if x == 0:
        return True
    if x < 0:
        if m % 2 == 0:
            return False
        x = -x
    num, den = x.numerator, x.denominator
    return integer_nth_root(num, m) ** m == num and integer_nth_root(den, m) ** m == den


def is_square_rational(x: Fraction) -> bool:
    return is_mth_power_rational(x, 2)


def valuation_rational(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValidationError("valuation of zero")
    num, den = abs(x.numerator), x.denominator
    if num % p == 0:
        return valuation(num, p)
    return -valuation(den, p) if den % p == 0 else 0


def unit_residue(x: Fraction, p: int, k: int) -> int:
    """The unit part x * p^{-v(x)} reduced mod p^k."""
    x = Fraction(x)
    v = valuation_rational(x, p)
    num, den = x.numerator, x.denominator
    if v > 0:
        num //= p**v
    elif v < 0:
        den //= p ** (-v)
    pk = p**k
    return num * pow(den, -1, pk) % pk


def lth_power_test_local(x: Fraction, v: Place, m: int) -> bool:
    """Decide x in Q_v^{x m} for m = l^r.

    Finite v != l: the pro-p part of the units is uniquely l-divisible, so
    only the residue character mod p matters.  v = l: an m-th power mod
    l^{2r+1} (odd l) resp. 2^{r+3} certifies the Hensel lift.
    """
    x = Fraction(x)
    if x == 0:
        raise ValidationError("power test of zero")
    l, r = prime_power(m)
    if v.is_real:
        return x > 0 or m % 2 == 1
    p = v.prime
    if valuation_rational(x, p) % m:
        return False
    if p != l:
        g = math.gcd(m, p - 1)
        return pow(unit_residue(x, p, 1), (p - 1) // g, p) == 1
    k = r + 3 if p == 2 else 2 * r + 1
    u = unit_residue(x, p, k)
    exps = dlog_units(p**k, u)
    orders = unit_group(p**k).orders
    return all(e % math.gcd(m, o) == 0 for e, o in zip(exps, orders))


def _two_adic_sqrt(d: int, bits: int) -> int:
    """s with s*s = d mod 2^bits and s = 1 mod 4; needs d = 1 mod 8."""
    if d % 8 != 1:
        raise ValidationError(f"{d} is not a 2-adic unit square")
    s = 1
    for j in range(3, bits):
        if ((s * s - d) >> j) & 1:
            s += 1 << (j - 1)
    return s % (1 << bits)


def is_square_in_q2(x: Fraction) -> bool:
    x = Fraction(x)
    if x == 0:
        return True
    return valuation_rational(x, 2) % 2 == 0 and unit_residue(x, 2, 3) == 1


def _integral_coordinates(x0: Fraction, x1: Fraction) -> tuple[int, int]:
    # scale by a rational square, which never changes squareness
    c = math.lcm(x0.denominator, x1.denominator)
    return int(x0 * c * c), int(x1 * c * c)


def _q2_class_of_truncation(value: int, bits: int) -> bool | None:
    """Squareness in Q_2 of an integer known only mod 2^bits.

    None means the truncation carries too few significant bits to decide.
    """
    value %= 1 << bits
    if value == 0:
        return None
    v = (value & -value).bit_length() - 1
    if v >= bits - 4:
        return None
    return v % 2 == 0 and (value >> v) % 8 == 1


def two_adic_square_profile(
    x0: Fraction, x1: Fraction, d: int
) -> tuple[bool, ...]:
    """Squareness of x0 + x1*sqrt(d) in each completion of Q(sqrt d) above 2.

    d = 1 denotes the base field Q (a single place).  For split d (d = 1
    mod 8) the embedding sending sqrt(d) to the root = 1 mod 4 comes first.
    Everything else (inert or ramified) has a single place above 2.
    """
    x0, x1 = Fraction(x0), Fraction(x1)
    if d != 1:
        _require_squarefree(d)
    if d == 1:
        return (is_square_in_q2(x0 + x1),)
    if x0 == 0 and x1 == 0:
        raise ValidationError("square test of zero")
    if d % 8 == 1:
        a, b = _integral_coordinates(x0, x1)
        if b == 0:
            r = is_square_in_q2(Fraction(a))
            return (r, r)
        bits = 32
        while bits <= 1 << 16:
            s = _two_adic_sqrt(d, bits)
            got = [_q2_class_of_truncation(a + sign * b * s, bits) for sign in (1, -1)]
            if None not in got:
                return tuple(got)
            bits *= 2
        raise InternalContradictionError("2-adic precision loop did not settle")
    if x1 == 0:
        return (is_square_in_q2(x0) or is_square_in_q2(x0 * d),)
    a, b = _integral_coordinates(x0, x1)
    n = a * a - b * b * d
    if not is_square_in_q2(Fraction(n)):
        return (False,)
    # x = (y0 + y1 sqrt d)^2 forces y0^2 = (a +- sqrt(n))/2 in Q_2
    if is_square_rational(Fraction(n)):
        t = integer_nth_root(n, 2)
        return (
            any(
                w != 0 and is_square_in_q2(w)
                for w in (Fraction(a + t, 2), Fraction(a - t, 2))
            ),
        )
    e = valuation(n, 2) // 2
    bits = max(32, valuation(b * b * d, 2) + 16)
    s = _two_adic_sqrt(n >> (2 * e), bits)
    # w/2 is the candidate y0^2; its valuation is forced small by
    # (w/2)(w'/2) = d b^2 / 4, so the truncation decides exactly
    return (any(_half_square(a + sign * (s << e), bits + e) for sign in (1, -1)),)


def _half_square(w: int, bits: int) -> bool:
    """Squareness in Q_2 of w/2 for an integer w known mod 2^bits."""
    w %= 1 << bits
    if w == 0:
        raise InternalContradictionError("unexpected 2-adic cancellation")
    v = (w & -w).bit_length() - 1
    if v >= bits - 4:
        raise InternalContradictionError("unexpected 2-adic cancellation")
    return (v - 1) % 2 == 0 and (w >> v) % 8 == 1


def _require_squarefree(d: int) -> None:
    if d in (0, 1):
        raise ValidationError(f"d must be squarefree, not 0 or 1: {d}")
    if any(e > 1 for _, e in factor(abs(d)).factors):
        raise ValidationError(f"d not squarefree: {d}")


def is_square_in_2adic_quadratic(x: Fraction | tuple, d: int) -> bool:
    """x (a rational, or a coordinate pair x0 + x1*sqrt(d)) a square in K_v, v | 2.

    For split d the chosen place is the embedding with sqrt(d) = 1 mod 4.
    """
    if isinstance(x, tuple):
        x0, x1 = Fraction(x[0]), Fraction(x[1])
    else:
        x0, x1 = Fraction(x), Fraction(0)
    if x0 == 0 and x1 == 0:
        raise ValidationError("square test of zero")
    return two_adic_square_profile(x0, x1, d)[0]


def is_square_in_quadratic_field(x0: Fraction, x1: Fraction, d: int) -> bool:
    """Exact squareness of x0 + x1*sqrt(d) in the field Q(sqrt d); d=1 means Q."""
    x0, x1 = Fraction(x0), Fraction(x1)
    if d == 1:
        return x0 + x1 >= 0 and is_square_rational(x0 + x1)
    _require_squarefree(d)
    if x1 == 0:
        return is_square_rational(x0) or (x0 != 0 and is_square_rational(x0 / d))
    n = x0 * x0 - x1 * x1 * d
    if n < 0 or not is_square_rational(n):
        return False
    t = Fraction(integer_nth_root(n.numerator, 2), integer_nth_root(n.denominator, 2))
    return any(
        w != 0 and is_square_rational(w) for w in ((x0 + t) / 2, (x0 - t) / 2)
    )

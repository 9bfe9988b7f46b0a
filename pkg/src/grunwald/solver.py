"""Construction of global characters with prescribed local components.

Given a prime-power exponent m and finitely many prescribed local
characters, build a Dirichlet character realizing all of them at once:
pick auxiliary primes that rigidify the relevant S-unit classes, assemble
a cycle (the working modulus), and solve a linear system over Z/m for the
exponent vector, returning the solution of least conductor.  The special
case of Wang is decided before solving; obstructed data transparently
widens the exponent, the auxiliary primes and the cycle to 2m.

oracle_minimal is the independent ground truth: exhaustive enumeration of
primitive characters by increasing conductor, sharing no search logic
with the constructive path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .characters import (
    CycleValue,
    DirichletCharacter,
    LocalCharacter,
    _slice_conductor_exponent,
    character_order,
    conductor,
    evaluate_local,
    iter_characters,
    local_character,
    local_component,
    primitivize,
)
from .core_arith import (
    FactoredInteger,
    Place,
    components,
    dlog_units,
    factor,
    prime_power,
    primes_stream,
    unit_group,
    valuation,
)
from .errors import (
    InternalContradictionError,
    NoSolutionBelowCap,
    SearchCapError,
    ValidationError,
)
from .wang_special import FieldDescriptor, special_case

_KERNEL_LIMIT = 1 << 20


@dataclass(frozen=True)
class GrunwaldInstance:
    """Exponent m = l^r plus prescribed local characters at distinct places."""

    m: int
    local_characters: tuple[LocalCharacter, ...]
    field: FieldDescriptor = FieldDescriptor.rationals()

    def __post_init__(self):
        prime_power(self.m)
        keys = [psi.place.sort_key() for psi in self.local_characters]
        if len(set(keys)) != len(keys):
            raise ValidationError("prescribed places must be distinct")
        if sorted(keys) != keys:
            raise ValidationError("prescribed places must be sorted")
        for psi in self.local_characters:
            if psi.exponent_modulus != self.m:
                raise ValidationError(
                    "local characters must be normalized to the instance exponent"
                )

    @property
    def places(self) -> tuple[Place, ...]:
        return tuple(psi.place for psi in self.local_characters)

    @property
    def finite_primes(self) -> tuple[int, ...]:
        return tuple(p.prime for p in self.places if not p.is_real)


def make_instance(m: int, local_characters, field: FieldDescriptor | None = None):
    """Normalize prescribed characters to exponent modulus m and sort them."""
    prime_power(m)
    rebuilt = []
    for psi in local_characters:
        old = psi.exponent_modulus
        if psi.place.is_real:
            rebuilt.append(local_character(psi.place, m, sign_exponent=psi.sign_exponent))
            continue
        exps = tuple(_rescale(t, old, m, psi.place) for t in psi.unit_exponents)
        unif = _rescale(psi.uniformizer_exponent, old, m, psi.place)
        rebuilt.append(
            local_character(psi.place, m, psi.conductor_exponent, exps, unif)
        )
    rebuilt.sort(key=lambda s: s.place.sort_key())
    return GrunwaldInstance(
        m, tuple(rebuilt), field if field is not None else FieldDescriptor.rationals()
    )


def _rescale(t: int, old: int, new: int, place: Place) -> int:
    num = t * new
    if num % old:
        raise ValidationError(
            f"local character at {place} has order not dividing {new}"
        )
    return (num // old) % new


@dataclass(frozen=True)
class GrunwaldSolution:
    character: DirichletCharacter
    exponent_achieved: int
    special_case_flag: bool
    aux_primes: tuple[int, ...]
    cycle: CycleValue

    @property
    def conductor_norm(self) -> int:
        return conductor(self.character).norm


def _require_rational(instance: GrunwaldInstance) -> None:
    if not instance.field.is_rational:
        raise ValidationError("solving is implemented over Q only")


def p_star_basis(m: int, S) -> tuple[int, ...]:
    """Generators of the S-units-mod-m-th-powers group: -1 (m even) and S."""
    prime_power(m)
    primes = sorted({v.prime for v in S if not v.is_real})
    head = [-1] if m % 2 == 0 else []
    return tuple(head + primes)


def auxiliary_primes(m: int, S, cap: int = 10**6) -> tuple[int, ...]:
    """Greedy choice of primes outside S that cut the survivor classes down.

    A basis element product survives q when it is a local m-th power at q;
    survivors must shrink to the trivial class, plus the a0 class when the
    special case occurs.  Each appended prime strictly shrinks the set.
    For non-cyclic 2-power exponents the prime 2 (when 2 is outside S) or
    a prime q = +-3 mod 8 (when 2 is in S, so sqrt 2 stays out of Q_q) is
    additionally required.
    """
    l, r = prime_power(m)
    S = frozenset(S)
    s_primes = {v.prime for v in S if not v.is_real}
    basis = p_star_basis(m, S)
    ranges = [2 if b == -1 else m for b in basis]
    survivors = set(itertools.product(*(range(n) for n in ranges)))
    allowed = {tuple(0 for _ in basis)}
    report = special_case(FieldDescriptor.rationals(), m, S)
    if report.occurs:
        vec = [0] * len(basis)
        vec[basis.index(2)] = m // 2
        allowed.add(tuple(vec))

    chosen: list[int] = []
    for q in primes_stream():
        if survivors <= allowed:
            break
        if q > cap:
            raise SearchCapError(f"auxiliary-prime search passed {cap}")
        if q == l or q in s_primes:
            continue
        g = math.gcd(m, q - 1)
        if g == 1:
            continue
        exp = (q - 1) // g
        beta = [pow(b % q, exp, q) for b in basis]
        kernel = {
            vec
            for vec in survivors
            if math.prod(pow(bq, e, q) for bq, e in zip(beta, vec)) % q == 1
        }
        if len(kernel) < len(survivors):
            chosen.append(q)
            survivors = kernel

    if l == 2 and r >= 3:
        if 2 not in s_primes:
            chosen.append(2)
        elif not any(q % 8 in (3, 5) for q in chosen):
            for q in primes_stream():
                if q % 8 in (3, 5) and q not in s_primes and q not in chosen:
                    chosen.append(q)
                    break
    return tuple(chosen)


def build_cycle(instance: GrunwaldInstance, aux, exponent: int | None = None) -> CycleValue:
    """The working modulus: product of the prescribed conductors, the
    l-power headroom l^(rho+2), and one factor per auxiliary prime."""
    mu = exponent if exponent is not None else instance.m
    l, _ = prime_power(instance.m)
    rho = valuation(mu, l)
    exps: dict[int, int] = {}
    for psi in instance.local_characters:
        if psi.place.is_real or psi.conductor_exponent == 0:
            continue
        p = psi.place.prime
        exps[p] = exps.get(p, 0) + psi.conductor_exponent
    exps[l] = exps.get(l, 0) + rho + 2
    for q in aux:
        exps[q] = exps.get(q, 0) + 1
    pairs = tuple(sorted(exps.items()))
    value = math.prod(p**e for p, e in pairs)
    real_bit = 1 if instance.m % 2 == 0 or any(v.is_real for v in instance.places) else 0
    return CycleValue(FactoredInteger(value, pairs), real_bit)


def obstruction_exponent(instance: GrunwaldInstance, report=None) -> int:
    """Zeta-exponent of the product of prescribed values at a0 (0 = unobstructed)."""
    if report is None:
        report = special_case(instance.field, instance.m, set(instance.places))
    if not report.occurs:
        return 0
    return (
        sum(evaluate_local(psi, report.a0) for psi in instance.local_characters)
        % instance.m
    )


def _assemble_rows(instance: GrunwaldInstance, M: int, mu: int):
    """Linear constraints mod mu on the exponent vector of a character mod M."""
    comps = components(M)
    ug = unit_group(M)
    n = len(ug.generators)
    scale = mu // instance.m
    rows: list[list[int]] = []
    rhs: list[int] = []
    for i, o in enumerate(ug.orders):
        row = [0] * n
        row[i] = o % mu
        rows.append(row)
        rhs.append(0)
    for psi in instance.local_characters:
        if psi.place.is_real:
            rows.append([e % mu for e in dlog_units(M, M - 1)])
            rhs.append(psi.sign_exponent * (mu // 2) % mu)
            continue
        p = psi.place.prime
        mine = None
        for c in comps:
            if c.prime == p:
                mine = c
                break
        if mine is not None:
            # the character's own CRT factor at p inverts the prescribed unit part
            for h, g in enumerate(mine.local_generators):
                row = [0] * n
                row[mine.offset + h] = 1
                rows.append(row)
                rhs.append((-scale * evaluate_local(psi, Fraction(g))) % mu)
        row = [0] * n
        for c in comps:
            if mine is not None and c.prime == p:
                continue
            for h, e in enumerate(dlog_units(c.prime_power, p)):
                row[c.offset + h] = e % mu
        rows.append(row)
        rhs.append(scale * psi.uniformizer_exponent % mu)
    return rows, rhs


def _lval(a: int, l: int, rho: int) -> int:
    v = 0
    while v < rho and a % l == 0:
        a //= l
        v += 1
    return v


def _echelon(rows, rhs, l: int, rho: int):
    """Row-reduce mod l^rho picking globally minimal-valuation pivots.

    Pivot rows are frozen once selected, so every entry of a pivot row in
    a not-yet-used column keeps valuation >= the pivot's; consistency then
    depends only on the constant column, never on branch choices.
    """
    mu = l**rho
    A = [[x % mu for x in row] for row in rows]
    b = [x % mu for x in rhs]
    n = len(A[0]) if A else 0
    pivots: list[tuple[int, int, int]] = []
    used_cols: set[int] = set()
    pivot_rows: set[int] = set()
    while True:
        best = None
        for i in range(len(A)):
            if i in pivot_rows:
                continue
            for j in range(n):
                if j in used_cols:
                    continue
                a = A[i][j]
                if a == 0:
                    continue
                v = _lval(a, l, rho)
                if best is None or v < best[2]:
                    best = (i, j, v)
                    if v == 0:
                        break
            if best is not None and best[2] == 0:
                break
        if best is None:
            break
        i, j, v = best
        lv = l**v
        inv = pow(A[i][j] // lv, -1, mu)
        A[i] = [x * inv % mu for x in A[i]]
        b[i] = b[i] * inv % mu
        for r2 in range(len(A)):
            if r2 == i or r2 in pivot_rows or A[r2][j] == 0:
                continue
            if A[r2][j] % lv:
                raise InternalContradictionError("pivot minimality violated")
            f = A[r2][j] // lv
            A[r2] = [(x - f * y) % mu for x, y in zip(A[r2], A[i])]
            b[r2] = (b[r2] - f * b[i]) % mu
        pivots.append((i, j, v))
        used_cols.add(j)
        pivot_rows.add(i)

    for i in range(len(A)):
        if i not in pivot_rows and b[i] % mu:
            return None
    for i, _, v in pivots:
        if b[i] % (l**v):
            return None
    return A, b, pivots, used_cols


def _backsub(A, b, pivots, free_vals, branch_vals, l, rho, n):
    mu = l**rho
    x = [0] * n
    for j, val in free_vals.items():
        x[j] = val % mu
    for t in range(len(pivots) - 1, -1, -1):
        i, j, v = pivots[t]
        R = (b[i] - sum(A[i][c] * x[c] for c in range(n) if c != j)) % mu
        if R % (l**v):
            raise InternalContradictionError("branch-dependent inconsistency")
        x[j] = (R // (l**v) + branch_vals.get(t, 0) * l ** (rho - v)) % mu
    return x


def _solution_lattice(A, b, pivots, used_cols, l, rho, n):
    """Particular solution plus a basis of the kernel with branch ranges."""
    mu = l**rho
    free_cols = [j for j in range(n) if j not in used_cols]
    zero_b = [0] * len(b)
    part = _backsub(A, b, pivots, {}, {}, l, rho, n)
    basis = []
    ranges = []
    for j in free_cols:
        basis.append(_backsub(A, zero_b, pivots, {j: 1}, {}, l, rho, n))
        ranges.append(mu)
    for t, (_, _, v) in enumerate(pivots):
        if v == 0:
            continue
        basis.append(_backsub(A, zero_b, pivots, {}, {t: 1}, l, rho, n))
        ranges.append(l**v)
    return part, basis, ranges


def _minimal_candidate(part, basis, ranges, M, mu):
    comps = components(M)
    tables: list[dict] = [{} for _ in comps]

    def norm_of(x):
        total = 1
        for c, tab in zip(comps, tables):
            sl = tuple(x[c.offset : c.offset + len(c.orders)])
            val = tab.get(sl)
            if val is None:
                val = c.prime ** _slice_conductor_exponent(c.prime, c.exponent, sl, mu)
                tab[sl] = val
            total *= val
        return total

    total = math.prod(ranges, start=1)
    if total > _KERNEL_LIMIT:
        return tuple(part)
    best = None
    depth = len(basis)

    def rec(d, x):
        nonlocal best
        if d == depth:
            score = (norm_of(x), tuple(x))
            if best is None or score < best:
                best = score
            return
        vec = basis[d]
        y = list(x)
        for c in range(ranges[d]):
            rec(d + 1, y)
            if c + 1 < ranges[d]:
                y = [(a + v) % mu for a, v in zip(y, vec)]

    rec(0, list(part))
    return best[1]


def solve_character(
    instance: GrunwaldInstance,
    cycle: CycleValue,
    aux_primes=(),
    exponent: int | None = None,
) -> GrunwaldSolution:
    """Solve for a character mod the cycle matching all prescribed data.

    With exponent None the Wang dichotomy is decided first: obstructed
    data replaces the supplied cycle and auxiliary primes by ones rebuilt
    for exponent 2m.  An explicit exponent skips that decision (used by
    tests to demonstrate infeasibility at the unwidened exponent).
    """
    _require_rational(instance)
    m = instance.m
    S = set(instance.places)
    report = special_case(instance.field, m, S)
    aux = tuple(aux_primes)
    if exponent is None:
        if report.occurs and obstruction_exponent(instance, report) != 0:
            mu = 2 * m
            aux = auxiliary_primes(mu, S)
            cycle = build_cycle(instance, aux, exponent=mu)
        else:
            mu = m
    else:
        mu = exponent
        if mu % m:
            raise ValidationError("exponent must be a multiple of the instance exponent")
    l, rho = prime_power(mu)
    M = cycle.finite_part.value
    rows, rhs = _assemble_rows(instance, M, mu)
    reduced = _echelon(rows, rhs, l, rho)
    if reduced is None:
        raise InternalContradictionError(
            f"no exponent-{mu} character exists modulo the cycle {cycle}"
        )
    A, b, pivots, used_cols = reduced
    n = len(rows[0]) if rows else 0
    part, basis, ranges = _solution_lattice(A, b, pivots, used_cols, l, rho, n)
    vec = _minimal_candidate(part, basis, ranges, M, mu)
    chi = primitivize(DirichletCharacter(M, mu, tuple(vec)))
    solution = GrunwaldSolution(chi, mu, report.occurs, aux, cycle)
    _verify_solution(instance, solution)
    return solution


def _verify_solution(instance: GrunwaldInstance, solution: GrunwaldSolution) -> None:
    chi = solution.character
    mu = solution.exponent_achieved
    if mu % character_order(chi):
        raise InternalContradictionError("solution order exceeds the exponent")
    for psi in instance.local_characters:
        got = local_component(chi, psi.place)
        if got != psi:
            raise InternalContradictionError(
                f"local component mismatch at {psi.place}: {got} != {psi}"
            )


def construct(instance: GrunwaldInstance) -> GrunwaldSolution:
    """Auxiliary primes, then cycle, then the minimal character mod it."""
    _require_rational(instance)
    S = set(instance.places)
    aux = auxiliary_primes(instance.m, S)
    cycle = build_cycle(instance, aux)
    return solve_character(instance, cycle, aux_primes=aux)


def _admissible_factorization(instance, fac, mu, l_mu, r_mu):
    prescribed = {p.prime: psi for p, psi in zip(instance.places, instance.local_characters) if not p.is_real}
    fdict = dict(fac)
    for p, psi in prescribed.items():
        if fdict.get(p, 0) != psi.conductor_exponent:
            return None
    for q, a in fac:
        if q in prescribed:
            continue
        if q == 2:
            if mu % 2 or not (a == 2 or 3 <= a <= r_mu + 2):
                return None
        elif a == 1:
            if math.gcd(mu, q - 1) == 1:
                return None
        elif q != l_mu or a > r_mu + 1:
            return None
    return prescribed


def _primitive_slices(comp, mu):
    slots = []
    for o in comp.orders:
        step = mu // math.gcd(mu, o)
        slots.append([c * step for c in range(math.gcd(mu, o))])
    out = []
    for sl in itertools.product(*slots):
        if _slice_conductor_exponent(comp.prime, comp.exponent, sl, mu) == comp.exponent:
            out.append(sl)
    return out


def _oracle_pass_pruned(instance, f, mu):
    l_mu, r_mu = prime_power(mu)
    fac = factor(f).factors
    prescribed = _admissible_factorization(instance, fac, mu, l_mu, r_mu)
    if prescribed is None:
        return None
    scale = mu // instance.m
    comps = components(f)
    slots = []
    for c in comps:
        psi = prescribed.get(c.prime)
        if psi is not None:
            slots.append([tuple((-scale * t) % mu for t in psi.unit_exponents)])
        else:
            choices = _primitive_slices(c, mu)
            if not choices:
                return None
            slots.append(choices)
    # per-prescribed-place uniformizer data over the other components
    checks = []
    for p, psi in sorted(prescribed.items()):
        coeffs = [
            dlog_units(c.prime_power, p) if c.prime != p else None for c in comps
        ]
        checks.append((coeffs, scale * psi.uniformizer_exponent % mu))
    sign_check = None
    for psi in instance.local_characters:
        if psi.place.is_real:
            coeffs = [dlog_units(c.prime_power, c.prime_power - 1) for c in comps]
            sign_check = (coeffs, psi.sign_exponent * (mu // 2) % mu)
    for combo in itertools.product(*slots):
        ok = True
        for coeffs, want in checks:
            total = 0
            for cv, sl in zip(coeffs, combo):
                if cv is not None:
                    total += sum(e * t for e, t in zip(cv, sl))
            if total % mu != want:
                ok = False
                break
        if ok and sign_check is not None:
            coeffs, want = sign_check
            total = sum(
                sum(e * t for e, t in zip(cv, sl)) for cv, sl in zip(coeffs, combo)
            )
            if total % mu != want:
                ok = False
        if not ok:
            continue
        chi = DirichletCharacter(f, mu, tuple(t for sl in combo for t in sl))
        if all(
            local_component(chi, psi.place) == psi
            for psi in instance.local_characters
        ):
            return chi
    return None


def _oracle_pass_full(instance, f, mu):
    if f > 1 and f % 4 == 2:
        return None
    for chi in iter_characters(f, mu):
        if conductor(chi).norm != f:
            continue
        if all(
            local_component(chi, psi.place) == psi
            for psi in instance.local_characters
        ):
            return chi
    return None


def oracle_minimal(
    instance: GrunwaldInstance,
    cap: int,
    exponent: int | None = None,
    prune: bool = True,
) -> GrunwaldSolution:
    """Exhaustive minimal solution: first matching primitive character by
    increasing conductor, then lexicographic exponent vector.

    prune=False disables the structural conductor filters and compares
    local components directly on every candidate — slower, used to verify
    the pruned search on small caps.
    """
    _require_rational(instance)
    if cap < 1:
        raise ValidationError(f"bad search cap {cap}")
    m = instance.m
    report = special_case(instance.field, m, set(instance.places))
    if exponent is None:
        obstructed = report.occurs and obstruction_exponent(instance, report) != 0
        mu = 2 * m if obstructed else m
    else:
        mu = exponent
        if mu % m:
            raise ValidationError("exponent must be a multiple of the instance exponent")
    search = _oracle_pass_pruned if prune else _oracle_pass_full
    for f in range(1, cap + 1):
        chi = search(instance, f, mu)
        if chi is not None:
            return GrunwaldSolution(chi, mu, report.occurs, (), conductor(chi))
    raise NoSolutionBelowCap(f"no exponent-{mu} solution with conductor <= {cap}")


@dataclass(frozen=True)
class BoundReport:
    """Quantities entering the conductor bounds, plus the achieved value.

    log_shape is the unconditional log-conductor shape m*(n_places+D)*
    log(N_S*m); power_exponent the polynomial exponent E1*(1/2+eps); and
    grh_shape the conditional shape (log(N_S*l))^(2(e+delta)).  The
    implied constants are not effective, so only ratios are reported.
    """

    e: int
    class_generators: int
    delta: int
    delta_prime: int
    e1: int
    selmer_rank: int
    n_places: int
    norm_s: int
    epsilon: float
    log_shape: float
    power_exponent: float
    grh_shape: float
    achieved_log_conductor: float
    shape_ratio: float


def bound_report(
    instance: GrunwaldInstance,
    solution: GrunwaldSolution,
    epsilon: float = 0.1,
    refine_delta: bool = False,
) -> BoundReport:
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    l, _ = prime_power(instance.m)
    m = instance.m
    finite = [v for v in instance.places if not v.is_real]
    n_places = len(finite) + 1  # the real place always counts
    class_gens = 0
    delta_prime = 1 if l % 2 else 0
    delta = 0 if m == 2 else 1
    if refine_delta and all(v.prime != l for v in finite):
        delta = 0
    e = n_places + class_gens - delta_prime
    phi = m - m // l
    e1 = phi * e + delta
    norm_s = math.prod(v.prime for v in finite)
    log_shape = m * (n_places + class_gens) * math.log(norm_s * m)
    achieved = math.log(conductor(solution.character).norm)
    return BoundReport(
        e=e,
        class_generators=class_gens,
        delta=delta,
        delta_prime=delta_prime,
        e1=e1,
        selmer_rank=e,
        n_places=n_places,
        norm_s=norm_s,
        epsilon=epsilon,
        log_shape=log_shape,
        power_exponent=e1 * (0.5 + epsilon),
        grh_shape=math.log(norm_s * l) ** (2 * (e + delta)),
        achieved_log_conductor=achieved,
        shape_ratio=achieved / log_shape,
    )


_INSTANCE_KEYS = {"m", "places", "field"}
_PLACE_KEYS = {
    "place",
    "conductor_exponent",
    "unit_exponents",
    "uniformizer_exponent",
    "sign_exponent",
}


def instance_from_dict(data: dict) -> GrunwaldInstance:
    if not isinstance(data, dict):
        raise ValidationError("instance record must be a mapping")
    for key in data:
        if key not in _INSTANCE_KEYS:
            raise ValidationError(f"unknown key '{key}'")
    if "m" not in data:
        raise ValidationError("missing key 'm'")
    try:
        m = int(data["m"])
    except (TypeError, ValueError):
        raise ValidationError(f"bad exponent entry {data['m']!r}") from None
    field = (
        FieldDescriptor.parse(data["field"]) if "field" in data else FieldDescriptor.rationals()
    )
    chars = []
    for rec in data.get("places", []):
        if not isinstance(rec, dict):
            raise ValidationError("place record must be a mapping")
        for key in rec:
            if key not in _PLACE_KEYS:
                raise ValidationError(f"unknown key '{key}'")
        if "place" not in rec:
            raise ValidationError("missing key 'place'")
        try:
            place = Place.parse(str(rec["place"]))
            chars.append(
                local_character(
                    place,
                    m,
                    int(rec.get("conductor_exponent", 0)),
                    tuple(int(t) for t in rec.get("unit_exponents", ())),
                    int(rec.get("uniformizer_exponent", 0)),
                    int(rec.get("sign_exponent", 0)),
                )
            )
        except (TypeError, ValueError):
            raise ValidationError(f"bad place record {rec!r}") from None
    return make_instance(m, chars, field)


def instance_to_dict(instance: GrunwaldInstance) -> dict:
    places = []
    for psi in instance.local_characters:
        places.append(
            {
                "place": str(psi.place),
                "conductor_exponent": psi.conductor_exponent,
                "unit_exponents": list(psi.unit_exponents),
                "uniformizer_exponent": psi.uniformizer_exponent,
                "sign_exponent": psi.sign_exponent,
            }
        )
    out = {"m": instance.m, "places": places}
    if not instance.field.is_rational:
        out["field"] = f"Qsqrt:{instance.field.d}"
    return out

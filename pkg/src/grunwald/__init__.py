"""Effective Grunwald–Wang constructions for Dirichlet characters over Q.

Build characters with prescribed local behaviour at finitely many places,
decide the special case of Wang, measure how small the conductor can be
made, and scan character families for least-nonsplit-prime statistics.
"""

from .characters import (
    CycleValue,
    DirichletCharacter,
    LocalCharacter,
    character_from_dict,
    character_order,
    character_to_dict,
    conductor,
    evaluate,
    evaluate_local,
    field_discriminant,
    iter_characters,
    local_character,
    local_component,
    make_dirichlet,
    pow_character,
    primitivize,
    sign_local,
    trivial_character,
    unramified_local,
    verify_product_formula,
)
from .core_arith import (
    FactoredInteger,
    Place,
    dlog_units,
    factor,
    is_mth_power_rational,
    is_prime,
    is_square_in_2adic_quadratic,
    is_square_in_quadratic_field,
    lth_power_test_local,
    primes_stream,
    unit_group,
    valuation,
)
from .errors import (
    GrunwaldError,
    InternalContradictionError,
    NonUnitError,
    NoSolutionBelowCap,
    NoWitnessError,
    SearchCapError,
    ValidationError,
)
from .mult_one import (
    CSV_HEADER,
    PrimeWitness,
    ScanRecord,
    analytic_conductor_S,
    least_nonsplit_prime,
    ratio_c_decile_maxima,
    scan_family,
    write_scan_csv,
)
from .powres import (
    PowerResidueAnswer,
    least_non_lth_power_modulus,
    least_non_lth_power_modulus_with_order,
)
from .solver import (
    BoundReport,
    GrunwaldInstance,
    GrunwaldSolution,
    auxiliary_primes,
    bound_report,
    build_cycle,
    construct,
    instance_from_dict,
    instance_to_dict,
    make_instance,
    obstruction_exponent,
    oracle_minimal,
    p_star_basis,
    solve_character,
)
from .wang_special import (
    FieldDescriptor,
    SpecialCaseReport,
    is_mth_power_in_qp,
    membership_P_m_S,
    s_invariant,
    special_case,
    witness_prime,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

"""
Exhaustive classification of degree-n permutation polynomials and the counting identity
q! = q(q-1)(1 + k2 + q k1).
"""
import logging
import math
from typing import List, Optional

from . import field_core as fc
from .criteria import first_hermite_exponent
from .models import ClassificationResult, FieldSpec, WilsonCount
from .normalize import orbit_codes
from .search import DEFAULT_BLOCK_ROWS, DEFAULT_CHUNK_TARGET, count_permutation_functions, search, search_space_size
from .validation import FieldTooLarge, SearchTooLarge, check_degree_range, validate_search_request

log = logging.getLogger(__name__)

DEFAULT_MAX_CANDIDATES = 10 ** 8
MAX_EXHAUSTIVE_Q = 7
PREFILTERS = ("none", "hermite-partial")


def third_coefficient_vanishes(q: int, n: int) -> bool:
    """Normalised degree-n PPs have a_{n-2} = 0 when 3 <= n <= q-2 and q = -1 mod n."""
    return 3 <= n <= q - 2 and (q + 1) % n == 0


def normalized_domains(field: FieldSpec, n: int, prefilter: str = "none") -> List[List[int]]:
    """
    Allowed codes per coefficient of a normalised degree-n polynomial.

    x^(n-1) is fixed to 0 when p does not divide n. The hermite-partial prefilter also
    fixes x^(n-2) to 0 when q = -1 mod n.
    """
    q = field.q
    every = list(range(q))
    domains = [[0]] + [every for _ in range(1, n)] + [[1]]
    if n % field.p and n > 1:
        domains[n - 1] = [0]
    if prefilter == "hermite-partial" and third_coefficient_vanishes(q, n):
        domains[n - 2] = [0]
    return domains


def _check_size(field: FieldSpec, n: int, size: int, max_candidates: int) -> None:
    errors = validate_search_request(field.q, n, size, max_candidates)
    if errors:
        raise SearchTooLarge("; ".join(errors))


def classify_normalized(
    field: FieldSpec,
    n: int,
    prefilter: str = "none",
    jobs: Optional[int] = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    block_rows: int = DEFAULT_BLOCK_ROWS,
    chunk_target: int = DEFAULT_CHUNK_TARGET,
) -> ClassificationResult:
    """
    Every normalised degree-n PP of field.

    Args:
        field: Field to search
        n: Degree, 2 <= n <= q-2
        prefilter: 'none' or 'hermite-partial'; the result set is the same either way
        jobs: Worker processes
        max_candidates: Refuse searches larger than this

    Returns:
        ClassificationResult with polynomials sorted by degree then top coefficient

    Raises:
        DegreeOutOfRange, SearchTooLarge
    """
    field = fc.ensure_tables(field)
    q = field.q
    check_degree_range(q, n)
    if prefilter not in PREFILTERS:
        raise ValueError(f"unknown prefilter {prefilter!r}")
    domains = normalized_domains(field, n, prefilter)
    size = search_space_size(domains)
    _check_size(field, n, size, max_candidates)

    power_filter = None
    if prefilter == "hermite-partial" and not third_coefficient_vanishes(q, n):
        power_filter = first_hermite_exponent(q, field.p, n)
    found, stats = search(field, domains, power_filter=power_filter, jobs=jobs,
                          block_rows=block_rows, chunk_target=chunk_target)
    if stats["filtered"]:
        log.info("power-sum prefilter at t=%s rejected %d candidates", power_filter, stats["filtered"])
    return ClassificationResult(
        field=field,
        degree=n,
        mode="normalized",
        prefilter=prefilter,
        polynomials=found,
        search_space=size,
        wall_time=stats["wall_time"],
    )


def classify_all(
    field: FieldSpec,
    n: int,
    jobs: Optional[int] = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    block_rows: int = DEFAULT_BLOCK_ROWS,
    chunk_target: int = DEFAULT_CHUNK_TARGET,
) -> ClassificationResult:
    """Every degree-n PP of field: any nonzero leading coefficient and any lower terms."""
    field = fc.ensure_tables(field)
    q = field.q
    check_degree_range(q, n)
    domains = [list(range(q)) for _ in range(n)] + [list(range(1, q))]
    size = search_space_size(domains)
    _check_size(field, n, size, max_candidates)
    found, stats = search(field, domains, jobs=jobs, block_rows=block_rows, chunk_target=chunk_target)
    return ClassificationResult(field=field, degree=n, mode="all", polynomials=found,
                                search_space=size, wall_time=stats["wall_time"])


def orbit_union(result: ClassificationResult) -> set:
    """All c g(x+b) + d over the normalised polynomials of a classification."""
    out = set()
    for g in result.polys():
        out |= orbit_codes(g)
    return out


def audit_nonexistence(field: FieldSpec, n: int, max_candidates: int = DEFAULT_MAX_CANDIDATES,
                       jobs: Optional[int] = None) -> int:
    """Number of normalised degree-n PPs, for confirming that a degree has none."""
    field = fc.ensure_tables(field)
    check_degree_range(field.q, n)
    _check_size(field, n, search_space_size(normalized_domains(field, n)), max_candidates)
    return classify_normalized(field, n, jobs=jobs, max_candidates=max_candidates).count


def wilson_count(
    field: FieldSpec,
    exhaustive: Optional[bool] = None,
    max_exhaustive_q: int = MAX_EXHAUSTIVE_Q,
    jobs: Optional[int] = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> WilsonCount:
    """
    k1 (nonlinear normalised PPs of degree prime to p) and k2 (degree divisible by p),
    over degrees 2..q-2, against q!.

    Args:
        exhaustive: Also count permutations among all q^q reduced polynomials; defaults
            to q <= max_exhaustive_q

    Raises:
        FieldTooLarge: if the exhaustive count is requested above max_exhaustive_q
    """
    field = fc.ensure_tables(field)
    q, p = field.q, field.p
    if exhaustive is None:
        exhaustive = q <= max_exhaustive_q
    elif exhaustive and q > max_exhaustive_q:
        raise FieldTooLarge(f"exhaustive q^q count is capped at q = {max_exhaustive_q}")

    k1 = k2 = 0
    per_degree = {}
    for n in range(2, q - 1):
        count = classify_normalized(field, n, jobs=jobs, max_candidates=max_candidates).count
        per_degree[n] = count
        if n % p:
            k1 += count
        else:
            k2 += count
    total = count_permutation_functions(field, jobs=jobs) if exhaustive else None
    lhs = math.factorial(q)
    rhs = q * (q - 1) * (1 + k2 + q * k1)
    log.info("Wilson identity over %s: k1=%d k2=%d, %d vs %d", field, k1, k2, lhs, rhs)
    return WilsonCount(q=q, k1=k1, k2=k2, lhs=lhs, rhs=rhs, total_pp_count=total, per_degree=per_degree)


def check_third_coefficient(result: ClassificationResult) -> bool:
    """Every listed polynomial has a_{n-2} = 0 whenever q = -1 mod n."""
    n, q = result.degree, result.field.q
    if not third_coefficient_vanishes(q, n):
        return True
    return all(c[n - 2] == 0 for c in result.polynomials)

"""
Orthomorphisms and complete mappings of the additive group of F_q.

f is an orthomorphism when f and f - x both permute F_q, and a complete mapping when f
and f + x both do. Orthomorphisms are preserved by f(x + b) + d but not by scaling.
"""
import itertools
import logging
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from . import field_core as fc
from . import poly_core as pc
from .criteria import is_pp
from .models import ClassificationResult, FieldSpec, OrthoReport, Poly
from .search import DEFAULT_BLOCK_ROWS, DEFAULT_CHUNK_TARGET, injective_rows, search, search_space_size, sort_key
from .tables import get_row
from .validation import FieldTooLarge, SearchTooLarge, check_degree_range, validate_search_request

log = logging.getLogger(__name__)

MAX_BOUND_Q = 9
# 2x is an orthomorphism of F_3 of degree 1 > q-3
MIN_BOUND_Q = 4


def _shift_by_x(f: Poly, sign: int) -> Poly:
    field = fc.ensure_tables(f.field)
    return pc.make_poly(field, pc.padd(field, f.coeffs, [0, sign]))


def is_orthomorphism(f: Poly) -> OrthoReport:
    """Brute-force f and f - x; report the degree of f mod x^q - x."""
    field = fc.ensure_tables(f.field)
    f = f.model_copy(update={"field": field})
    f_pp = is_pp(f)
    return OrthoReport(
        f=f,
        is_pp=f_pp,
        shifted_is_pp=is_pp(_shift_by_x(f, fc.neg(field, 1))),
        is_complete_mapping=f_pp and is_pp(_shift_by_x(f, 1)),
        reduced_degree=pc.reduce_mod_xq_minus_x(f).degree,
    )


def is_complete_mapping(f: Poly) -> bool:
    """f and x + f(x) both permute F_q; equivalently f + x is an orthomorphism."""
    return is_pp(f) and is_pp(_shift_by_x(f, 1))


def _ortho_search(field: FieldSpec, domains, jobs, block_rows, chunk_target) -> Tuple[List[Tuple[int, ...]], float]:
    found, stats = search(field, domains, ortho=True, jobs=jobs, block_rows=block_rows, chunk_target=chunk_target)
    return found, stats["wall_time"]


def _check_size(field: FieldSpec, n: int, size: int, max_candidates: int) -> None:
    errors = validate_search_request(field.q, n, size, max_candidates)
    if errors:
        raise SearchTooLarge("; ".join(errors))


def classify_orthomorphisms(
    field: FieldSpec,
    n: int,
    jobs: Optional[int] = None,
    max_candidates: int = 10 ** 8,
    block_rows: int = DEFAULT_BLOCK_ROWS,
    chunk_target: int = DEFAULT_CHUNK_TARGET,
) -> ClassificationResult:
    """
    Degree-n orthomorphisms with f(0) = 0 and either no x^(n-1) term (P2) or a nonzero
    x^(n-1) term and no x^(n-2) term (P3). The leading coefficient is free.

    Raises:
        DegreeOutOfRange, SearchTooLarge
    """
    field = fc.ensure_tables(field)
    q = field.q
    check_degree_range(q, n)
    every = list(range(q))
    nonzero = list(range(1, q))

    p2 = [[0]] + [every for _ in range(1, n)] + [nonzero]
    p2[n - 1] = [0]
    p3 = [[0]] + [every for _ in range(1, n)] + [nonzero]
    p3[n - 1] = nonzero
    p3[n - 2] = [0]
    size = search_space_size(p2) + search_space_size(p3)
    _check_size(field, n, size, max_candidates)

    found_p2, t2 = _ortho_search(field, p2, jobs, block_rows, chunk_target)
    found_p3, t3 = _ortho_search(field, p3, jobs, block_rows, chunk_target)
    labelled = sorted([(c, "P2") for c in found_p2] + [(c, "P3") for c in found_p3], key=lambda t: sort_key(t[0]))
    return ClassificationResult(
        field=field,
        degree=n,
        mode="ortho",
        polynomials=[c for c, _ in labelled],
        cases=[label for _, label in labelled],
        search_space=size,
        wall_time=t2 + t3,
    )


def classify_orthomorphisms_full(
    field: FieldSpec,
    n: int,
    jobs: Optional[int] = None,
    max_candidates: int = 10 ** 8,
    block_rows: int = DEFAULT_BLOCK_ROWS,
    chunk_target: int = DEFAULT_CHUNK_TARGET,
) -> ClassificationResult:
    """Every degree-n orthomorphism of field, any constant term."""
    field = fc.ensure_tables(field)
    q = field.q
    check_degree_range(q, n)
    domains = [list(range(q)) for _ in range(n)] + [list(range(1, q))]
    size = search_space_size(domains)
    _check_size(field, n, size, max_candidates)
    found, wall = _ortho_search(field, domains, jobs, block_rows, chunk_target)
    return ClassificationResult(field=field, degree=n, mode="ortho-all", polynomials=found,
                                search_space=size, wall_time=wall)


def ortho_orbit_expand(g: Poly, shift: bool = True) -> Set[Tuple[int, ...]]:
    """{g(x + b) + d}, with b = 0 only when shift is False."""
    field = fc.ensure_tables(g.field)
    out: Set[Tuple[int, ...]] = set()
    for b in (range(field.q) if shift else [0]):
        shifted = pc.pcompose(field, g.coeffs, [b, 1]) if b else list(g.coeffs)
        for d in range(field.q):
            coeffs = list(shifted)
            coeffs[0] = fc.add(field, coeffs[0], d)
            out.add(tuple(pc.trim(coeffs)))
    return out


def degree6_statement_codes(field: FieldSpec) -> Set[Tuple[int, ...]]:
    """
    f + d for f in the two P2 families and g(x + b) + d for g in the P3 family: the
    claimed set of every degree-6 orthomorphism of F_9.
    """
    field = fc.ensure_tables(field)
    out: Set[Tuple[int, ...]] = set()
    for row_id in ("ortho:p2-a", "ortho:p2-b", "ortho:p3"):
        row = get_row(row_id)
        for coeffs in row.expand(field):
            out |= ortho_orbit_expand(pc.make_poly(field, coeffs), shift=row.case == "P3")
    return out


def scale_fragility_witness(result: ClassificationResult) -> Optional[Dict[str, object]]:
    """An orthomorphism f and a scale c != 0, 1 with c*f not an orthomorphism."""
    field = fc.ensure_tables(result.field)
    for coeffs in result.polynomials:
        for c in range(2, field.q):
            scaled = pc.make_poly(field, pc.pscale(field, coeffs, c))
            if not is_orthomorphism(scaled).is_orthomorphism:
                return {"f": list(coeffs), "c": c}
    return None


def transform_stable(result: ClassificationResult) -> bool:
    """Every f(x + b) + d of every listed orthomorphism is again an orthomorphism."""
    field = fc.ensure_tables(result.field)
    for coeffs in result.polynomials:
        for image in ortho_orbit_expand(pc.make_poly(field, coeffs)):
            if not is_orthomorphism(pc.make_poly(field, image)).is_orthomorphism:
                return False
    return True


def ortho_degree_bound_scan(field: FieldSpec, max_q: int = MAX_BOUND_Q) -> Dict[str, int]:
    """
    Screen all q! permutations of F_q, interpolate the orthomorphisms and record the
    largest reduced degree.

    Raises:
        FieldTooLarge: above max_q
    """
    field = fc.ensure_tables(field)
    q = field.q
    if q > max_q:
        raise FieldTooLarge(f"the q! permutation scan is capped at q = {max_q}")
    codes = np.arange(q, dtype=np.int64)
    add = fc.vec_add(field, codes[:, None], codes[None, :]).astype(np.int64)
    neg_x = fc.vec_neg(field, codes)
    perms = np.array(list(itertools.permutations(range(q))), dtype=np.int64)
    ortho_rows = injective_rows(add[perms, neg_x[None, :]], q)
    orthos = perms[ortho_rows]
    max_degree = -1
    violations = 0
    for row in orthos:
        degree = pc.carlitz_interpolate(field, [int(v) for v in row], verify=False).degree
        max_degree = max(max_degree, degree)
        if degree > q - 3:
            violations += 1
    log.info("%s: %d permutations, %d orthomorphisms, max degree %d", field, len(perms), len(orthos), max_degree)
    return {"permutations": len(perms), "orthomorphisms": int(len(orthos)),
            "max_degree": max_degree, "violations": violations}


def ortho_degree_bound_audit(field: FieldSpec, max_q: int = MAX_BOUND_Q) -> bool:
    """Every orthomorphism of F_q (q >= 4) reduces to degree <= q-3."""
    if field.q < MIN_BOUND_Q:
        log.info("degree bound needs q >= %d; skipping %s", MIN_BOUND_Q, field)
        return True
    return ortho_degree_bound_scan(field, max_q)["violations"] == 0

"""
Named audits: each one reruns an exhaustive or sampled check and returns an AuditReport.

    mullen               x^6 + a x^5 - a^4 x^2 permutes F_27 for every a != 0
    wilson               q! = q(q-1)(1 + k2 + q k1)
    wan-bound            value sets of non-PPs stay within q - ceil((q-1)/n)
    tables               exhaustive classification equals the catalogued rows
    ortho                degree-6 orthomorphisms of characteristic 3 and the degree bound
    nonexistence         degrees with no PPs at desk scale
    criteria-agreement   every criterion agrees with brute force on a test corpus
"""
import inspect
import logging
import math
import random
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import field_core as fc
from . import poly_core as pc
from .classify import classify_normalized, audit_nonexistence, check_third_coefficient, wilson_count
from .criteria import CRITERION_NAMES, criterion_report, is_pp, wan_bound
from .models import AuditManifest, AuditReport, ClassificationResult, FieldSpec
from .ortho import (
    MIN_BOUND_Q,
    classify_orthomorphisms,
    classify_orthomorphisms_full,
    degree6_statement_codes,
    ortho_degree_bound_scan,
)
from .search import image_sizes, search_space_size
from .tables import expected_normalised, expected_orthomorphisms, label_rows
from .validation import UnknownAudit

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Individual audits
# ---------------------------------------------------------------------------

def audit_mullen(q: int = 27, n: int = 6) -> AuditReport:
    """
    x^6 + a x^5 - a^4 x^2 over F_27: a PP of even degree with q > n(n-2), hence with a
    value set above Wan's bound.
    """
    field = fc.field_from_order(q)
    rows = []
    for a in range(1, q):
        coeffs = [0, 0, fc.neg(field, fc.power(field, a, 4)), 0, 0, a, 1]
        rows.append({"a": a, "coeffs": pc.trim(coeffs), "is_pp": is_pp(pc.make_poly(field, coeffs))})
    bound = wan_bound(q, n)
    details = {
        "q": q,
        "n": n,
        "all_pp": all(r["is_pp"] for r in rows),
        "n_times_n_minus_2": n * (n - 2),
        "q_exceeds_n_times_n_minus_2": q > n * (n - 2),
        "wan_bound": bound,
        "value_set_exceeds_wan_bound": q > bound,
    }
    passed = details["all_pp"] and details["q_exceeds_n_times_n_minus_2"] and details["value_set_exceeds_wan_bound"]
    return AuditReport(name="mullen", passed=passed, details=details, rows=rows)


def audit_wilson(qs: Sequence[int] = (2, 3, 4, 5, 7), max_exhaustive_q: int = 7,
                 jobs: Optional[int] = 1) -> AuditReport:
    rows = []
    for q in qs:
        count = wilson_count(fc.field_from_order(q), max_exhaustive_q=max_exhaustive_q, jobs=jobs)
        rows.append({
            "q": q, "k1": count.k1, "k2": count.k2, "q_factorial": count.lhs, "rhs": count.rhs,
            "exhaustive_pp_count": count.total_pp_count, "identity_holds": count.identity_holds,
        })
    return AuditReport(name="wilson", passed=all(r["identity_holds"] for r in rows),
                       details={"qs": list(qs)}, rows=rows)


def audit_wan_bound(qs: Sequence[int] = (5, 7, 9, 11), max_degree: Optional[int] = 6) -> AuditReport:
    """
    Sweep every monic f with f(0) = 0 of degree 1..max_degree (None: q-1); value sets
    are invariant under c f + d, so this covers all polynomials of those degrees.
    """
    rows = []
    for q in qs:
        field = fc.field_from_order(q)
        top = min(max_degree or q - 1, q - 1)
        for n in range(1, top + 1):
            domains = [[0]] + [list(range(q)) for _ in range(1, n)] + [[1]]
            sizes = image_sizes(field, domains)
            bound = wan_bound(q, n)
            violations = int(((sizes < q) & (sizes > bound)).sum())
            rows.append({"q": q, "n": n, "candidates": search_space_size(domains), "wan_bound": bound,
                         "max_non_pp_value_set": int(sizes[sizes < q].max()) if (sizes < q).any() else None,
                         "violations": violations})
    return AuditReport(name="wan-bound", passed=all(r["violations"] == 0 for r in rows),
                       details={"qs": list(qs), "max_degree": max_degree}, rows=rows)


def verify_table(result: ClassificationResult) -> Dict[str, Any]:
    """Compare one normalised classification with the catalogued rows."""
    field = fc.ensure_tables(result.field)
    expected = expected_normalised(field, result.degree)
    found = result.as_set()
    labels = label_rows(field, result.degree, result.polynomials)
    per_row: Dict[str, int] = {}
    for label in labels:
        per_row[label] = per_row.get(label, 0) + 1
    return {
        "q": field.q,
        "degree": result.degree,
        "found": len(found),
        "expected": len(expected),
        "equal": found == expected,
        "missing": sorted(list(c) for c in expected - found)[:20],
        "unexpected": sorted(list(c) for c in found - expected)[:20],
        "per_row": per_row,
        "third_coefficient_zero": check_third_coefficient(result),
    }


DEFAULT_TABLE_GRID: Tuple[Tuple[int, int], ...] = tuple(
    (q, n)
    for q in (4, 5, 7, 8, 9, 11, 13)
    for n in range(2, min(6, q - 2) + 1)
    if not (q % 2 == 0 and n == 6)
) + ((27, 6),)


def audit_tables(grid: Sequence[Tuple[int, int]] = DEFAULT_TABLE_GRID, jobs: Optional[int] = None,
                 classify: Optional[Callable[[FieldSpec, int], ClassificationResult]] = None) -> AuditReport:
    """
    Args:
        grid: (q, degree) pairs to classify
        classify: Override for obtaining a classification (the CLI passes a cached one)
    """
    rows = []
    for q, n in grid:
        field = fc.field_from_order(q)
        result = classify(field, n) if classify else classify_normalized(field, n, jobs=jobs)
        rows.append(verify_table(result))
    passed = all(r["equal"] and r["third_coefficient_zero"] for r in rows)
    return AuditReport(name="tables", passed=passed, details={"grid": [list(g) for g in grid]}, rows=rows)


def audit_ortho(qs: Sequence[int] = (9, 27), full_q: Optional[int] = 9,
                bound_qs: Sequence[int] = (4, 5, 7, 8, 9), max_bound_q: int = 9,
                jobs: Optional[int] = None) -> AuditReport:
    """Degree-6 orthomorphism classification, the full F_9 statement and the degree bound."""
    rows: List[Dict[str, Any]] = []
    for q in qs:
        field = fc.field_from_order(q)
        result = classify_orthomorphisms(field, 6, jobs=jobs)
        expected = expected_orthomorphisms(field)
        rows.append({"check": "classification", "q": q, "found": result.count,
                     "expected": len(expected), "counts": result.counts,
                     "passed": result.as_set() == expected})
    if full_q:
        field = fc.field_from_order(full_q)
        full = classify_orthomorphisms_full(field, 6, jobs=jobs)
        claimed = degree6_statement_codes(field)
        rows.append({"check": "full-statement", "q": full_q, "found": full.count,
                     "expected": len(claimed), "passed": full.as_set() == claimed})
    for q in bound_qs:
        if not MIN_BOUND_Q <= q <= max_bound_q:
            continue
        scan = ortho_degree_bound_scan(fc.field_from_order(q), max_bound_q)
        rows.append({"check": "degree-bound", "q": q, **scan, "passed": scan["violations"] == 0})
    return AuditReport(name="ortho", passed=all(r["passed"] for r in rows),
                       details={"qs": list(qs), "full_q": full_q, "bound_qs": list(bound_qs)}, rows=rows)


DEFAULT_NONEXISTENCE_GRID: Tuple[Tuple[int, int], ...] = ((13, 6), (17, 6), (23, 6), (25, 6)) + tuple(
    (q, 2) for q in (5, 7, 9, 11, 13, 17, 19, 23, 25, 27)
)


def audit_nonexistence_suite(grid: Sequence[Tuple[int, int]] = DEFAULT_NONEXISTENCE_GRID,
                             jobs: Optional[int] = None) -> AuditReport:
    rows = []
    for q, n in grid:
        count = audit_nonexistence(fc.field_from_order(q), n, jobs=jobs)
        rows.append({"q": q, "degree": n, "count": count, "passed": count == 0})
    return AuditReport(name="nonexistence", passed=all(r["passed"] for r in rows),
                       details={"grid": [list(g) for g in grid]}, rows=rows)


def criteria_corpus(samples: int = 10000, seed: int = 0) -> List[Tuple[FieldSpec, Tuple[int, ...]]]:
    """
    Monic f with f(0) = 0 and degree <= 4 over F_5 and F_7, degree <= 3 over F_9, and
    seeded random samples over F_11 and F_13 (every third one a shifted PP monomial, so
    both verdicts are represented).
    """
    corpus: List[Tuple[FieldSpec, Tuple[int, ...]]] = []
    for q, top in ((5, 4), (7, 4), (9, 3)):
        field = fc.field_from_order(q)
        for n in range(1, top + 1):
            for middle in product(range(q), repeat=n - 1):
                corpus.append((field, (0,) + middle + (1,)))
    rng = random.Random(seed)
    for q in (11, 13):
        field = fc.field_from_order(q)
        exponents = [k for k in range(1, q - 1) if math.gcd(k, q - 1) == 1]
        for i in range(samples):
            if i % 3 == 2:
                k = rng.choice(exponents)
                b, c, d = rng.randrange(q), rng.randrange(1, q), rng.randrange(q)
                coeffs = pc.shift_scale_compose(pc.monomial(field, k), b, c, d).coeffs
            else:
                n = rng.randrange(1, q - 1)
                coeffs = tuple(rng.randrange(q) for _ in range(n)) + (rng.randrange(1, q),)
            corpus.append((field, tuple(coeffs)))
    return corpus


def audit_criteria_agreement(samples: int = 10000, seed: int = 0,
                             criteria: Optional[Sequence[str]] = None) -> AuditReport:
    selected = list(criteria) if criteria else CRITERION_NAMES
    disagreements = []
    per_field: Dict[int, Dict[str, int]] = {}
    for field, coeffs in criteria_corpus(samples, seed):
        report = criterion_report(pc.make_poly(field, coeffs), selected)
        tally = per_field.setdefault(field.q, {"polynomials": 0, "pps": 0, "disagreements": 0})
        tally["polynomials"] += 1
        tally["pps"] += int(report.is_pp)
        if not report.all_agree:
            tally["disagreements"] += 1
            disagreements.append({"q": field.q, "coeffs": list(coeffs),
                                  "verdicts": {k: v.verdict for k, v in report.per_criterion.items()}})
    rows = [{"q": q, **tally} for q, tally in sorted(per_field.items())]
    return AuditReport(name="criteria-agreement", passed=not disagreements,
                       details={"criteria": selected, "samples": samples,
                                "disagreements": disagreements[:20]},
                       rows=rows, seed=seed)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

AUDITS: Dict[str, Tuple[Callable[..., AuditReport], AuditManifest]] = {
    "mullen": (audit_mullen, AuditManifest(
        name="mullen", parameters={"q": 27, "n": 6},
        expected_source="published counterexample: x^6 + a x^5 - a^4 x^2 permutes F_27")),
    "wilson": (audit_wilson, AuditManifest(
        name="wilson", parameters={"qs": [2, 3, 4, 5, 7]},
        expected_source="derived: q! counts permutations, k1/k2 from classification")),
    "wan-bound": (audit_wan_bound, AuditManifest(
        name="wan-bound", parameters={"qs": [5, 7, 9, 11], "max_degree": 6},
        expected_source="Wan's value-set bound, exhaustive sweep")),
    "tables": (audit_tables, AuditManifest(
        name="tables", parameters={"grid": [list(g) for g in DEFAULT_TABLE_GRID]},
        expected_source="catalogued normalised PPs of degree <= 6")),
    "ortho": (audit_ortho, AuditManifest(
        name="ortho", parameters={"qs": [9, 27], "full_q": 9, "bound_qs": [4, 5, 7, 8, 9]},
        expected_source="catalogued degree-6 orthomorphisms; degree bound q-3")),
    "nonexistence": (audit_nonexistence_suite, AuditManifest(
        name="nonexistence", parameters={"grid": [list(g) for g in DEFAULT_NONEXISTENCE_GRID]},
        expected_source="no degree-6 PPs of F_13, F_17, F_23 or F_25; no degree-2 PPs in odd characteristic")),
    "criteria-agreement": (audit_criteria_agreement, AuditManifest(
        name="criteria-agreement", parameters={"samples": 10000, "seed": 0},
        expected_source="derived oracle: brute-force evaluation")),
}


def list_audits() -> List[AuditManifest]:
    return [manifest for _, manifest in AUDITS.values()]


def audit_suite(name: str, **params: Any) -> AuditReport:
    """
    Run one named audit.

    Raises:
        UnknownAudit: for names outside AUDITS
    """
    entry = AUDITS.get(name)
    if entry is None:
        raise UnknownAudit(f"unknown audit {name!r}; choose from {sorted(AUDITS)}")
    runner, _ = entry
    log.info("running audit %s with %s", name, params)
    report = runner(**params)
    log.info("audit %s %s", name, "passed" if report.passed else "FAILED")
    return report


def run_all(**shared: Any) -> List[AuditReport]:
    """Every audit with its defaults; shared keyword arguments go to audits that accept them."""
    reports = []
    for name, (runner, _) in AUDITS.items():
        accepted = inspect.signature(runner).parameters
        reports.append(audit_suite(name, **{k: v for k, v in shared.items() if k in accepted}))
    return reports

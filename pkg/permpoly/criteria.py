"""
Permutation criteria: brute force, power sums, Hermite (both forms), the circulant
characteristic polynomial, the resultant criterion, value-set statistics, Wan's bound and
the congruence criterion on (f - c)^(q-1).

Every criterion returns a CriterionVerdict; criterion_report runs a selection of them and
records the brute-force verdict as ground truth.
"""
import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import field_core as fc
from . import poly_core as pc
from .linalg import bareiss_determinant, characteristic_polynomial, euclidean_resultant
from .models import CriterionReport, CriterionVerdict, FieldSpec, Poly, ValueSetStats, WanBoundResult
from .validation import ConstantInput, DegreeTooHigh

log = logging.getLogger(__name__)


def _field(f: Poly) -> FieldSpec:
    return fc.ensure_tables(f.field)


# ---------------------------------------------------------------------------
# Brute force and value sets
# ---------------------------------------------------------------------------

def is_pp_bruteforce(f: Poly) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """
    Evaluate f at every element, stopping at the first repeated value.

    Returns:
        (is_pp, first colliding pair (c1, c2) in code order or None)
    """
    field = _field(f)
    seen: Dict[int, int] = {}
    for c in range(field.q):
        v = pc.peval(field, f.coeffs, c)
        if v in seen:
            return False, (seen[v], c)
        seen[v] = c
    return True, None


def is_pp(f: Poly) -> bool:
    return is_pp_bruteforce(f)[0]


def value_set(f: Poly) -> List[int]:
    """The image V_f, ascending."""
    return sorted(set(pc.eval_table(f)))


def power_sum_profile(f: Poly) -> List[int]:
    """Sums of f(c)^t over all c, for t = 1..q-1."""
    field = _field(f)
    values = pc.value_table(field, f.coeffs)
    current = list(values)
    profile = []
    for _ in range(1, field.q):
        total = 0
        for v in current:
            if v:
                total = fc.add(field, total, v)
        profile.append(total)
        current = [fc.mul(field, a, b) for a, b in zip(current, values)]
    return profile


def pp_power_sum_signature(field: FieldSpec) -> List[int]:
    """Profile of a permutation: (0, ..., 0, -1)."""
    return [0] * (field.q - 2) + [fc.neg(field, 1)]


def power_sum_test(f: Poly) -> CriterionVerdict:
    field = _field(f)
    profile = power_sum_profile(f)
    signature = pp_power_sum_signature(field)
    if profile == signature:
        return CriterionVerdict(verdict=True)
    first = next(t for t, (a, b) in enumerate(zip(profile, signature), start=1) if a != b)
    return CriterionVerdict(verdict=False, witness={"t": first, "profile": profile})


# ---------------------------------------------------------------------------
# Hermite
# ---------------------------------------------------------------------------

def _hermite_condition_two(field: FieldSpec, fr: Sequence[int]) -> Tuple[Optional[int], List[int]]:
    """
    Check deg(f^t mod x^q - x) <= q-2 for 1 <= t <= q-2 with p not dividing t.

    Returns:
        (first offending t or None, reduced f^(q-1))
    """
    q, p = field.q, field.p
    current: List[int] = [1]
    for t in range(1, q - 1):
        current = pc.pmulmod(field, current, fr)
        if t % p and len(current) > q - 1:
            return t, current
    return None, pc.pmulmod(field, current, fr)


def hermite_test(f: Poly) -> CriterionVerdict:
    """
    Hermite's criterion with f^(q-1) reducing to a monic polynomial of degree q-1.

    The witness is the offending exponent t, or q-1 when the last condition fails.
    """
    field = _field(f)
    q = field.q
    fr = pc.preduce(field, f.coeffs)
    offending, last = _hermite_condition_two(field, fr)
    if offending is not None:
        return CriterionVerdict(verdict=False, witness={"t": offending})
    if len(last) == q and last[-1] == 1:
        return CriterionVerdict(verdict=True)
    return CriterionVerdict(verdict=False, witness={"t": q - 1})


def hermite_one_root_test(f: Poly) -> CriterionVerdict:
    """Hermite's criterion in the form 'f has exactly one root' plus the degree conditions."""
    field = _field(f)
    fr = pc.preduce(field, f.coeffs)
    offending, _ = _hermite_condition_two(field, fr)
    if offending is not None:
        return CriterionVerdict(verdict=False, witness={"t": offending})
    roots = [c for c in range(field.q) if pc.peval(field, fr, c) == 0]
    if len(roots) == 1:
        return CriterionVerdict(verdict=True)
    return CriterionVerdict(verdict=False, witness={"roots": roots})


def hermite_power_coefficient(f: Poly, t: int) -> int:
    """Coefficient of x^(q-1) in f^t mod (x^q - x)."""
    field = _field(f)
    if not 1 <= t <= field.q - 1:
        raise ValueError(f"exponent {t} outside [1, {field.q - 1}]")
    power = pc.ppow_reduced(field, f.coeffs, t)
    return power[field.q - 1] if len(power) == field.q else 0


def first_hermite_exponent(q: int, p: int, n: int) -> Optional[int]:
    """Least t in [2, q-2] with p not dividing t and n*t >= q-1."""
    for t in range(2, q - 1):
        if t % p and n * t >= q - 1:
            return t
    return None


def degree6_hermite_equations(field: FieldSpec, a1: int, a2: int, a3: int) -> List[Dict]:
    """
    Closed-form conditions on x^6 + a3 x^3 + a2 x^2 + a1 x over q = 6m + 5.

    Each entry carries the equation value and whether it is a necessary condition for
    this q (q >= 11, q > 11 and q > 17 respectively).
    """
    field = fc.ensure_tables(field)
    q = field.q

    def k(n: int) -> int:
        return fc.from_int(field, n)

    def term(c: int, *factors: Tuple[int, int]) -> int:
        out = k(c)
        for base, e in factors:
            out = fc.mul(field, out, fc.power(field, base, e))
        return out

    def total(*terms: int) -> int:
        out = 0
        for t in terms:
            out = fc.add(field, out, t)
        return out

    first = total(term(1, (a2, 2)), term(2, (a1, 1), (a3, 1)))
    second = total(
        term(36, (a1, 2), (a2, 1)),
        term(-15, (a2, 2), (a3, 2)),
        term(-10, (a1, 1), (a3, 3)),
    )
    third = total(
        term(72, (a1, 4)),
        term(-12, (a2, 5)),
        term(-240, (a1, 1), (a2, 3), (a3, 1)),
        term(-360, (a1, 2), (a2, 1), (a3, 2)),
        term(55, (a2, 2), (a3, 4)),
        term(22, (a1, 1), (a3, 5)),
    )
    applies = q % 6 == 5
    return [
        {"equation": "a2^2 + 2a1a3", "value": first, "applicable": applies and q >= 11},
        {"equation": "36a1^2a2 - 15a2^2a3^2 - 10a1a3^3", "value": second, "applicable": applies and q > 11},
        {
            "equation": "72a1^4 - 12a2^5 - 240a1a2^3a3 - 360a1^2a2a3^2 + 55a2^2a3^4 + 22a1a3^5",
            "value": third,
            "applicable": applies and q > 17,
        },
    ]


# ---------------------------------------------------------------------------
# Circulant characteristic polynomial
# ---------------------------------------------------------------------------

def circulant_characteristic_polynomial(f: Poly) -> List[int]:
    """Characteristic polynomial of the circulant with first row (a_0, ..., a_{q-2})."""
    field = _field(f)
    size = field.q - 1
    if f.degree > size - 1:
        raise DegreeTooHigh(f"degree {f.degree} exceeds q-2 = {size - 1}; reduce first")
    row = [f.coeff(i) for i in range(size)]
    matrix = [[row[(j - i) % size] for j in range(size)] for i in range(size)]
    return pc.trim(characteristic_polynomial(matrix, fc.field_ops(field)))


def raussnitz_test(f: Poly) -> CriterionVerdict:
    """PP iff the circulant's characteristic polynomial is (x - a_0)^(q-1) - 1."""
    field = _field(f)
    charpoly = circulant_characteristic_polynomial(f)
    target = pc.psub(field, pc.ppow(field, pc.linear_factor(field, f.coeff(0)), field.q - 1), [1])
    return CriterionVerdict(verdict=charpoly == target, witness={"charpoly": charpoly})


# ---------------------------------------------------------------------------
# Resultant criterion
# ---------------------------------------------------------------------------

def sylvester_matrix(a: Sequence, b: Sequence, zero) -> List[list]:
    """Sylvester matrix of two ascending coefficient lists (entries of any ring)."""
    n, m = len(a) - 1, len(b) - 1
    size = n + m
    rows = []
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        rows.append(row)
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        rows.append(row)
    return rows


RESULTANT_METHODS = ("euclid", "sylvester")


def _resultant(a: Sequence, b: Sequence, ops, zero, method: str):
    if method == "sylvester":
        return bareiss_determinant(sylvester_matrix(a, b, zero), ops)
    return euclidean_resultant(a, b, ops)


def resultant_polynomial(f: Poly, extension_check: bool = True, method: str = "euclid") -> List[int]:
    """
    g_f = det R(x^q - x, f - y) - (-1)^q (y^q - y) as ascending coefficients in y.

    The determinant is specialised at every y in F_q (where the subtracted term vanishes)
    and interpolated; with extension_check one more point of F_{q^2} fixes the y^q
    coefficient. method picks the remainder sequence or the Sylvester determinant
    (fraction-free elimination); both give the same value.
    """
    if method not in RESULTANT_METHODS:
        raise ValueError(f"unknown resultant method {method!r}")
    field = _field(f)
    q = field.q
    if f.degree < 1:
        raise ConstantInput("resultant criterion needs degree >= 1")
    ops = fc.field_ops(field)
    x_q_minus_x = [0] * (q + 1)
    x_q_minus_x[1] = fc.neg(field, 1)
    x_q_minus_x[q] = 1

    values = []
    for y in range(q):
        b = list(f.coeffs)
        b[0] = fc.sub(field, b[0], y)
        values.append(_resultant(x_q_minus_x, b, ops, 0, method))
    low = list(pc.carlitz_interpolate(field, values, verify=False).coeffs)
    coeffs = low + [0] * (q + 1 - len(low))
    if not extension_check:
        return pc.trim(coeffs)

    ext, _ = fc.quadratic_extension_ops(field)
    eta = (0, 1)
    a_ext = [(c, 0) for c in x_q_minus_x]
    b_ext = [(c, 0) for c in f.coeffs]
    b_ext[0] = ext.sub(b_ext[0], eta)
    det_eta = _resultant(a_ext, b_ext, ext, ext.zero, method)

    eta_q = ext.one
    base, k = eta, q
    while k:
        if k & 1:
            eta_q = ext.mul(eta_q, base)
        base = ext.mul(base, base)
        k >>= 1
    frob_gap = ext.sub(eta_q, eta)
    sign = (fc.neg(field, 1) if q % 2 else 1, 0)
    g_eta = ext.sub(det_eta, ext.mul(sign, frob_gap))
    low_eta = ext.zero
    for c in reversed(low):
        low_eta = ext.add(ext.mul(low_eta, eta), (c, 0))
    lam = ext.div(ext.sub(g_eta, low_eta), frob_gap)
    if lam[1] != 0:
        raise ArithmeticError("leading resultant coefficient does not lie in the base field")
    coeffs[q] = fc.add(field, coeffs[q], lam[0])
    coeffs[1] = fc.sub(field, coeffs[1], lam[0])
    return pc.trim(coeffs)


def resultant_test(f: Poly, extension_check: bool = True, method: str = "euclid") -> CriterionVerdict:
    """PP iff g_f = 0."""
    g_f = resultant_polynomial(f, extension_check=extension_check, method=method)
    return CriterionVerdict(verdict=not g_f, witness={"g_f": g_f} if g_f else None)


# ---------------------------------------------------------------------------
# Value-set statistics and Wan's bound
# ---------------------------------------------------------------------------

def turnwald_stats(f: Poly) -> ValueSetStats:
    """
    Compute v, u, w for 1 <= deg f < q and evaluate the ten equivalent statements.

    u is the least k >= 1 with s_k != 0, where prod_c (x - f(c)) = sum (-1)^k s_k x^(q-k).
    """
    field = _field(f)
    q, n = field.q, f.degree
    if not 1 <= n < q:
        raise DegreeTooHigh(f"need 1 <= deg f < q, got degree {n}")
    values = pc.value_table(field, f.coeffs)
    v = len(set(values))

    product: List[int] = [1]
    for val in values:
        product = pc.pmul(field, product, pc.linear_factor(field, val))
    u = None
    for k in range(1, q):
        if product[q - k] != 0:
            u = k
            break

    w = None
    for t, total in enumerate(power_sum_profile(f), start=1):
        if total != 0:
            w = t
            break

    inf = math.inf
    uu = inf if u is None else u
    ww = inf if w is None else w
    qf, nf = Fraction(q), Fraction(n)
    items = {
        "1_is_pp": v == q,
        "2_u_eq_q_minus_1": uu == q - 1,
        "3_u_gt_q_minus_q_over_n": uu > qf - qf / nf,
        "4_u_gt_q_minus_v": uu > q - v,
        "5_v_gt_q_minus_q_minus_1_over_n": v > qf - (qf - 1) / nf,
        "6_w_eq_q_minus_1": ww == q - 1,
        "7_2q_over_3_minus_1_lt_w_finite": w is not None and Fraction(2 * q, 3) - 1 < w,
        "8_q_minus_q_plus_1_over_n_lt_w_finite": w is not None and qf - (qf + 1) / nf < w,
        "9_q_minus_u_le_w_finite": w is not None and q - uu <= w,
        "10_u_gt_half_q_minus_1_and_w_finite": uu > Fraction(q - 1, 2) and w is not None,
    }
    return ValueSetStats(q=q, n=n, v=v, u=u, w=w, equivalences=items)


def turnwald_test(f: Poly) -> CriterionVerdict:
    stats = turnwald_stats(f)
    return CriterionVerdict(verdict=stats.u == f.field.q - 1, witness=stats.model_dump())


def wan_bound(q: int, n: int) -> int:
    """q - ceil((q-1)/n)."""
    return q - (q - 1 + n - 1) // n


def wan_bound_check(f: Poly) -> WanBoundResult:
    """Value-set size against Wan's bound; permutations are exempt."""
    field = _field(f)
    fr = pc.make_poly(field, pc.preduce(field, f.coeffs))
    if fr.degree < 1:
        raise ConstantInput("Wan's bound needs a nonconstant polynomial")
    v = len(set(pc.value_table(field, fr.coeffs)))
    bound = wan_bound(field.q, fr.degree)
    pp = v == field.q
    return WanBoundResult(v=v, bound=bound, is_pp=pp, satisfied=pp or v <= bound)


# ---------------------------------------------------------------------------
# Congruence criterion on (f - c)^(q-1)
# ---------------------------------------------------------------------------

def moreno_test(f: Poly) -> Dict[str, CriterionVerdict]:
    """
    Condition 1: (f - c)^(q-1) is never congruent to 1.
    Condition 2: (f - f(c))^(q-1) is congruent to (x - c)^(q-1) for every c.
    """
    field = _field(f)
    q = field.q
    basis = pc.carlitz_basis(field)

    cond1 = CriterionVerdict(verdict=True)
    for c in range(q):
        shifted = pc.psub(field, f.coeffs, [c])
        if pc.ppow_reduced(field, shifted, q - 1) == [1]:
            cond1 = CriterionVerdict(verdict=False, witness={"c": c})
            break

    cond2 = CriterionVerdict(verdict=True)
    for c in range(q):
        shifted = pc.psub(field, f.coeffs, [pc.peval(field, f.coeffs, c)])
        if pc.ppow_reduced(field, shifted, q - 1) != list(basis[c]):
            cond2 = CriterionVerdict(verdict=False, witness={"c": c})
            break
    return {"moreno_1": cond1, "moreno_2": cond2}


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

def _brute_force_verdict(f: Poly) -> CriterionVerdict:
    ok, witness = is_pp_bruteforce(f)
    return CriterionVerdict(verdict=ok, witness=None if witness is None else list(witness))


def _reduced(f: Poly) -> Poly:
    return pc.reduce_mod_xq_minus_x(f)


CRITERIA: Dict[str, Callable[[Poly], CriterionVerdict]] = {
    "brute": _brute_force_verdict,
    "power_sum": power_sum_test,
    "hermite": hermite_test,
    "hermite_one_root": hermite_one_root_test,
    "raussnitz": lambda f: raussnitz_test(_reduced(f)),
    "resultant": resultant_test,
    "turnwald": lambda f: turnwald_test(_reduced(f)),
}

CRITERION_NAMES = list(CRITERIA) + ["moreno"]


def _applicable(name: str, f: Poly) -> bool:
    q = f.field.q
    reduced_degree = _reduced(f).degree
    if name == "raussnitz":
        return reduced_degree <= q - 2
    if name == "resultant":
        return f.degree >= 1
    if name == "turnwald":
        return 1 <= reduced_degree < q
    if name in ("hermite", "hermite_one_root"):
        return q >= 3
    return True


def criterion_report(
    f: Poly,
    criteria: Optional[Sequence[str]] = None,
    extension_check: bool = True
) -> CriterionReport:
    """
    Run the selected criteria on f. None, an empty list or a list containing "all" selects
    every criterion.

    Criteria whose preconditions fail for f (e.g. the circulant criterion on a
    polynomial of reduced degree q-1) are left out of per_criterion.
    """
    f = f.model_copy(update={"field": _field(f)})
    selected = list(criteria) if criteria else list(CRITERION_NAMES)
    if "all" in selected:
        selected = list(CRITERION_NAMES)
    unknown = [c for c in selected if c not in CRITERION_NAMES]
    if unknown:
        raise ValueError(f"unknown criteria: {unknown}")

    truth = is_pp(f)
    verdicts: Dict[str, CriterionVerdict] = {}
    for name in selected:
        if name == "moreno":
            verdicts.update(moreno_test(f))
            continue
        if not _applicable(name, f):
            continue
        if name == "resultant":
            verdicts[name] = resultant_test(f, extension_check=extension_check)
        else:
            verdicts[name] = CRITERIA[name](f)
    report = CriterionReport(polynomial=f, is_pp=truth, per_criterion=verdicts)
    if not report.all_agree:
        log.warning("criteria disagree on %s over %s: %s", f, f.field,
                    {k: v.verdict for k, v in verdicts.items()})
    return report

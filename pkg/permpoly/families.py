"""
Named permutation-polynomial families with closed-form criteria.

Every builder returns a FamilyInstance holding both the closed-form verdict and the
brute-force verdict, so callers (and the audit suite) can check that they agree.
"""
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence

from sympy import divisors

from . import field_core as fc
from . import poly_core as pc
from .criteria import is_pp
from .linalg import bareiss_determinant
from .models import FamilyInstance, FieldSpec, Poly
from .validation import BadDivisor, BadParameters, EvenCharacteristic, NotLinearized, UnknownFamily

log = logging.getLogger(__name__)


def _instance(family: str, parameters: Dict[str, Any], poly: Optional[Poly], verdict: bool,
              details: Optional[Dict[str, Any]] = None) -> FamilyInstance:
    brute = is_pp(poly) if poly is not None else verdict
    instance = FamilyInstance(
        family=family,
        parameters=parameters,
        polynomial=poly,
        criterion_verdict=verdict,
        brute_force_verdict=brute,
        details=details or {},
    )
    if not instance.consistent:
        log.warning("%s %s: closed form says %s, brute force says %s",
                    family, parameters, verdict, brute)
    return instance


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------

def monomial_is_pp(n: int, field: FieldSpec) -> bool:
    """x^n permutes F_q iff gcd(n, q-1) = 1."""
    if n < 1:
        raise BadParameters("exponent must be at least 1")
    return math.gcd(n, field.q - 1) == 1


def monomial_instance(field: FieldSpec, n: int) -> FamilyInstance:
    field = fc.ensure_tables(field)
    return _instance("monomial", {"n": n}, pc.monomial(field, n), monomial_is_pp(n, field))


# ---------------------------------------------------------------------------
# Linearised polynomials
# ---------------------------------------------------------------------------

def _level(k: int, base: int) -> Optional[int]:
    """i with base^i = k, or None."""
    i, power = 0, 1
    while power < k:
        power *= base
        i += 1
    return i if power == k else None


def linearized_poly(field: FieldSpec, coeffs: Sequence[int], base_order: Optional[int] = None) -> Poly:
    """sum coeffs[i] x^(base^i) with base defaulting to the characteristic."""
    field = fc.ensure_tables(field)
    base = base_order or field.p
    out: List[int] = []
    for i, a in enumerate(coeffs):
        k = base ** i
        if len(out) <= k:
            out.extend([0] * (k + 1 - len(out)))
        out[k] = fc.add(field, out[k], a)
    return pc.make_poly(field, out)


def linearized_levels(L: Poly, base_order: int) -> Dict[int, int]:
    """
    Coefficient a_i of x^(base^i) for every nonzero term.

    Raises:
        NotLinearized: if some exponent is not a power of base_order
    """
    levels: Dict[int, int] = {}
    for k, a in enumerate(L.coeffs):
        if a == 0:
            continue
        i = _level(k, base_order) if k > 0 else None
        if i is None:
            raise NotLinearized(f"x^{k} is not of the form x^({base_order}^i)")
        levels[i] = a
    return levels


def _subfield_order(field: FieldSpec, base_order: int) -> int:
    """Extension degree m of F_q over F_base."""
    p_b, r_b = None, None
    for r in range(1, field.r + 1):
        if field.p ** r == base_order:
            p_b, r_b = field.p, r
    if p_b is None or field.r % r_b:
        raise NotLinearized(f"F_{base_order} is not a subfield of {field}")
    return field.r // r_b


def linearized_is_pp(L: Poly, base_order: Optional[int] = None) -> Dict[str, Optional[bool]]:
    """
    Decide whether the base-polynomial L permutes its field, by three routes.

    Route 'roots': L has only the root 0. Route 'determinant': the twisted circulant
    A[i][j] = a_{(i-j) mod m}^(base^j) is nonsingular. Route 'gcd' (only when every a_i
    lies in the subfield F_base): gcd(sum a_i x^i, x^m - 1) = 1.

    Returns:
        Verdict per route, None where the route does not apply
    """
    field = fc.ensure_tables(L.field)
    base = base_order or field.p
    m = _subfield_order(field, base)
    reduced = pc.reduce_mod_xq_minus_x(L)
    levels = linearized_levels(reduced, base)

    roots = [c for c in range(field.q) if pc.peval(field, reduced.coeffs, c) == 0]
    verdicts: Dict[str, Optional[bool]] = {"roots": roots == [0]}

    a = [levels.get(i, 0) for i in range(m)]
    matrix = [
        [fc.power(field, a[(i - j) % m], base ** j) for j in range(m)]
        for i in range(m)
    ]
    verdicts["determinant"] = bareiss_determinant(matrix, fc.field_ops(field)) != 0

    in_subfield = all(fc.power(field, c, base) == c for c in a)
    if in_subfield:
        x_m_minus_one = [fc.neg(field, 1)] + [0] * (m - 1) + [1]
        gcd = pc.pgcd(field, a, x_m_minus_one)
        verdicts["gcd"] = gcd == [1]
    else:
        verdicts["gcd"] = None
    return verdicts


def linearized_instance(field: FieldSpec, coeffs: Sequence[int], base_order: Optional[int] = None) -> FamilyInstance:
    field = fc.ensure_tables(field)
    base = base_order or field.p
    L = linearized_poly(field, coeffs, base)
    routes = linearized_is_pp(L, base)
    decided = [v for v in routes.values() if v is not None]
    verdict = all(decided)
    if len(set(decided)) > 1:
        log.warning("linearized routes disagree for %s: %s", L, routes)
    return _instance("linearized", {"coeffs": list(coeffs), "base": base}, L, verdict, {"routes": routes})


def is_additive(L: Poly) -> bool:
    """L(b + c) = L(b) + L(c) at every pair of field points."""
    field = fc.ensure_tables(L.field)
    values = pc.value_table(field, L.coeffs)
    return all(
        values[fc.add(field, b, c)] == fc.add(field, values[b], values[c])
        for b in range(field.q) for c in range(field.q)
    )


# ---------------------------------------------------------------------------
# PPs of every extension
# ---------------------------------------------------------------------------

def all_extensions_form(f: Poly) -> bool:
    """f = a x^(p^h) + b with a != 0."""
    terms = [k for k, c in enumerate(f.coeffs) if c and k > 0]
    return len(terms) == 1 and _level(terms[0], f.field.p) is not None


def embedding(small: FieldSpec, big: FieldSpec) -> List[int]:
    """
    Code map F_small -> F_big sending the generator of small's modulus to the least root
    of that modulus in big.
    """
    small, big = fc.ensure_tables(small), fc.ensure_tables(big)
    if small.p != big.p or big.r % small.r:
        raise BadParameters(f"{small} does not embed in {big}")
    if small.r == 1:
        return list(range(small.q))
    root = next(c for c in range(big.q) if pc.peval(big, list(small.modulus), c) == 0)
    powers = [1]
    for _ in range(small.r - 1):
        powers.append(fc.mul(big, powers[-1], root))
    out = []
    for code in range(small.q):
        value, rest = 0, code
        for power in powers:
            rest, digit = divmod(rest, small.p)
            if digit:
                value = fc.add(big, value, fc.mul(big, digit, power))
        out.append(value)
    return out


def lift(f: Poly, big: FieldSpec) -> Poly:
    """f viewed over an extension field."""
    image = embedding(f.field, big)
    return pc.make_poly(big, [image[c] for c in f.coeffs])


def extension_pp_profile(f: Poly, degrees: Sequence[int] = (1, 2, 3)) -> Dict[int, bool]:
    """is_pp of f over F_{q^m} for each m."""
    field = f.field
    out = {}
    for m in degrees:
        big = fc.make_field(field.p, field.r * m)
        out[m] = is_pp(lift(f, big))
    return out


def all_extensions_instance(f: Poly, degrees: Sequence[int] = (1, 2, 3)) -> FamilyInstance:
    verdict = all_extensions_form(f)
    profile = extension_pp_profile(f, degrees)
    instance = FamilyInstance(
        family="all-extensions",
        parameters={"coeffs": list(f.coeffs)},
        polynomial=f,
        criterion_verdict=verdict,
        brute_force_verdict=all(profile.values()),
        details={"per_extension": profile},
    )
    return instance


# ---------------------------------------------------------------------------
# x^h g(x^s)^((q-1)/s)
# ---------------------------------------------------------------------------

def specific_class_build(field: FieldSpec, h: int, s: int, g: Poly) -> Optional[Poly]:
    """
    x^h (g(x^s))^((q-1)/s) reduced mod x^q - x, or None when g(x^s) has a nonzero root.

    Raises:
        BadParameters: if gcd(h, q-1) != 1 or s does not divide q-1
    """
    field = fc.ensure_tables(field)
    q = field.q
    if h < 1 or math.gcd(h, q - 1) != 1:
        raise BadParameters(f"need gcd(h, q-1) = 1, got h = {h}")
    if s < 1 or (q - 1) % s:
        raise BadParameters(f"s = {s} does not divide q-1 = {q - 1}")
    g_of_xs = pc.pcompose(field, g.coeffs, [0] * s + [1])
    if any(pc.peval(field, g_of_xs, c) == 0 for c in range(1, q)):
        return None
    power = pc.ppow_reduced(field, g_of_xs, (q - 1) // s)
    return pc.make_poly(field, pc.pmulmod(field, power, [0] * h + [1]))


def specific_class_instance(field: FieldSpec, h: int, s: int, g: Poly) -> FamilyInstance:
    f = specific_class_build(field, h, s, g)
    params = {"h": h, "s": s, "g": list(g.coeffs)}
    if f is None:
        return FamilyInstance(family="specific-class", parameters=params, polynomial=None,
                              criterion_verdict=False, brute_force_verdict=False,
                              details={"hypothesis": "g(x^s) has a nonzero root"})
    return _instance("specific-class", params, f, True)


# ---------------------------------------------------------------------------
# Binomials x^((q+m-1)/m) + a x
# ---------------------------------------------------------------------------

def quadratic_binomial_is_pp(field: FieldSpec, a: int) -> bool:
    """x^((q+1)/2) + a x permutes F_q iff a^2 - 1 is a nonzero square."""
    field = fc.ensure_tables(field)
    if field.p == 2:
        raise EvenCharacteristic("quadratic binomial criterion needs odd q")
    d = fc.sub(field, fc.mul(field, a, a), 1)
    return d != 0 and fc.is_square(field, d)


def binomial_poly(field: FieldSpec, m: int, a: int) -> Poly:
    q = field.q
    out = [0] * ((q + m - 1) // m + 1)
    out[1] = a
    out[-1] = fc.add(field, out[-1], 1)
    return pc.make_poly(field, out)


def quadratic_binomial_instance(field: FieldSpec, a: int) -> FamilyInstance:
    field = fc.ensure_tables(field)
    verdict = quadratic_binomial_is_pp(field, a)
    return _instance("quadratic-binomial", {"a": a}, binomial_poly(field, 2, a), verdict)


def m_binomial_is_pp(field: FieldSpec, m: int, a: int) -> bool:
    """
    x^((q+m-1)/m) + a x permutes F_q iff (-a)^m != 1 and
    ((a + xi^i) / (a + xi^j))^((q-1)/m) != xi^(j-i) for all 0 <= i < j < m,
    xi = g^((q-1)/m) for the primitive element g.

    Raises:
        BadDivisor: unless m > 1 divides q-1
    """
    field = fc.ensure_tables(field)
    q = field.q
    if m <= 1 or (q - 1) % m:
        raise BadDivisor(f"m = {m} must exceed 1 and divide q-1 = {q - 1}")
    if fc.power(field, fc.neg(field, a), m) == 1:
        return False
    xi = fc.power(field, fc.primitive_element(field), (q - 1) // m)
    roots = [fc.power(field, xi, i) for i in range(m)]
    e = (q - 1) // m
    for i in range(m):
        for j in range(i + 1, m):
            ratio = fc.div(field, fc.add(field, a, roots[i]), fc.add(field, a, roots[j]))
            if fc.power(field, ratio, e) == roots[j - i]:
                return False
    return True


def m_binomial_instance(field: FieldSpec, m: int, a: int) -> FamilyInstance:
    field = fc.ensure_tables(field)
    verdict = m_binomial_is_pp(field, m, a)
    return _instance("m-binomial", {"m": m, "a": a}, binomial_poly(field, m, a), verdict)


def valid_binomial_divisors(field: FieldSpec) -> List[int]:
    return [m for m in divisors(field.q - 1) if m > 1]


# ---------------------------------------------------------------------------
# Dickson polynomials
# ---------------------------------------------------------------------------

def dickson_poly(field: FieldSpec, k: int, a: int) -> Poly:
    """
    g_k(x, a) = sum_j k/(k-j) C(k-j, j) (-a)^j x^(k-2j).

    The rational coefficient is integral and is formed over the integers before reduction.
    """
    field = fc.ensure_tables(field)
    if k < 1:
        raise BadParameters("Dickson degree must be at least 1")
    out = [0] * (k + 1)
    minus_a = fc.neg(field, a)
    for j in range(k // 2 + 1):
        integer = k * math.comb(k - j, j) // (k - j)
        coeff = fc.mul(field, fc.from_int(field, integer), fc.power(field, minus_a, j))
        out[k - 2 * j] = fc.add(field, out[k - 2 * j], coeff)
    return pc.make_poly(field, out)


def dickson_poly_recurrence(field: FieldSpec, k: int, a: int) -> Poly:
    """g_0 = 2, g_1 = x, g_{k+1} = x g_k - a g_{k-1}."""
    field = fc.ensure_tables(field)
    prev, cur = pc.trim([fc.from_int(field, 2)]), [0, 1]
    for _ in range(1, k):
        prev, cur = cur, pc.psub(field, pc.pmul(field, [0, 1], cur), pc.pscale(field, prev, a))
    return pc.make_poly(field, cur if k >= 1 else prev)


def dickson_is_pp(field: FieldSpec, k: int, a: int) -> bool:
    """gcd(k, q^2 - 1) = 1 for a != 0; the monomial rule at a = 0."""
    if a == 0:
        return monomial_is_pp(k, field)
    return math.gcd(k, field.q ** 2 - 1) == 1


def dickson_instance(field: FieldSpec, k: int, a: int) -> FamilyInstance:
    field = fc.ensure_tables(field)
    closed = dickson_poly(field, k, a)
    recurrence = dickson_poly_recurrence(field, k, a)
    return _instance("dickson", {"k": k, "a": a}, closed, dickson_is_pp(field, k, a),
                     {"recurrence_matches": closed.coeffs == recurrence.coeffs})


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

FAMILY_BUILDERS: Dict[str, Callable[..., FamilyInstance]] = {
    "monomial": lambda field, n: monomial_instance(field, int(n)),
    "linearized": lambda field, coeffs, base=None: linearized_instance(field, coeffs, base),
    "all-extensions": lambda field, coeffs: all_extensions_instance(pc.make_poly(field, coeffs)),
    "specific-class": lambda field, h, s, g: specific_class_instance(field, int(h), int(s), pc.make_poly(field, g)),
    "quadratic-binomial": lambda field, a: quadratic_binomial_instance(field, int(a)),
    "m-binomial": lambda field, m, a: m_binomial_instance(field, int(m), int(a)),
    "dickson": lambda field, k, a: dickson_instance(field, int(k), int(a)),
}


def build_family(name: str, field: FieldSpec, **params: Any) -> FamilyInstance:
    """
    Realise one member of a named family.

    Raises:
        UnknownFamily: for names outside FAMILY_BUILDERS
    """
    builder = FAMILY_BUILDERS.get(name)
    if builder is None:
        raise UnknownFamily(f"unknown family {name!r}; choose from {sorted(FAMILY_BUILDERS)}")
    try:
        return builder(fc.ensure_tables(field), **params)
    except TypeError as exc:
        raise BadParameters(f"bad parameters for {name}: {exc}") from exc

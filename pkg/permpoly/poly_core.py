"""
Polynomial arithmetic over a finite field.

Internally polynomials are ascending lists of element codes with no trailing zeros;
the Poly model wraps them at the public boundary.
"""
import math
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from . import field_core as fc
from .models import BiPoly, FieldSpec, Poly
from .validation import ConstantInput, EqualPoints, SumMismatch, WrongLength, ZeroScale

Coeffs = List[int]


# ---------------------------------------------------------------------------
# Coefficient-list arithmetic
# ---------------------------------------------------------------------------

def trim(a: Sequence[int]) -> Coeffs:
    end = len(a)
    while end and a[end - 1] == 0:
        end -= 1
    return list(a[:end])


def padd(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        if c:
            out[i] = fc.add(field, out[i], c)
    return trim(out)


def pneg(field: FieldSpec, a: Sequence[int]) -> Coeffs:
    return [fc.neg(field, c) for c in a]


def psub(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Coeffs:
    return padd(field, a, pneg(field, b))


def pscale(field: FieldSpec, a: Sequence[int], c: int) -> Coeffs:
    if c == 0:
        return []
    return trim([fc.mul(field, x, c) for x in a])


def pmul(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Coeffs:
    if not a or not b:
        return []
    if field.r == 1:
        p = field.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim([c % p for c in out])
    logs, exp, m = field._log, field._exp, field.q - 1
    out = [0] * (len(a) + len(b) - 1)
    lb = [(j, logs[y]) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if x:
            lx = logs[x]
            for j, ly in lb:
                out[i + j] = fc.add(field, out[i + j], exp[(lx + ly) % m])
    return trim(out)


def preduce(field: FieldSpec, a: Sequence[int]) -> Coeffs:
    """Fold x^k (k >= q) onto x^(k-q+1) until the degree is at most q-1."""
    q = field.q
    out = list(a)
    for k in range(len(out) - 1, q - 1, -1):
        c = out[k]
        if c:
            j = k - (q - 1)
            out[j] = fc.add(field, out[j], c)
            out[k] = 0
    return trim(out)


def pmulmod(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Coeffs:
    return preduce(field, pmul(field, a, b))


def ppow(field: FieldSpec, a: Sequence[int], k: int) -> Coeffs:
    """a^k without reduction."""
    result: Coeffs = [1]
    base = trim(a)
    while k:
        if k & 1:
            result = pmul(field, result, base)
        k >>= 1
        if k:
            base = pmul(field, base, base)
    return result


def ppow_reduced(field: FieldSpec, a: Sequence[int], k: int) -> Coeffs:
    """a^k mod (x^q - x) by repeated squaring on reduced polynomials."""
    result: Coeffs = [1]
    base = preduce(field, a)
    while k:
        if k & 1:
            result = pmulmod(field, result, base)
        k >>= 1
        if k:
            base = pmulmod(field, base, base)
    return result


def peval(field: FieldSpec, a: Sequence[int], c: int) -> int:
    acc = 0
    for coeff in reversed(a):
        acc = fc.add(field, fc.mul(field, acc, c), coeff)
    return acc


def pcompose(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Coeffs:
    """a(b(x)) by Horner's rule."""
    out: Coeffs = []
    for coeff in reversed(a):
        out = padd(field, pmul(field, out, b), [coeff] if coeff else [])
    return out


def pdivmod(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Tuple[Coeffs, Coeffs]:
    b = trim(b)
    if not b:
        raise fc.DivisionByZero("polynomial division by zero")
    rem = trim(a)
    if len(rem) < len(b):
        return [], rem
    quot = [0] * (len(rem) - len(b) + 1)
    lead_inv = fc.inv(field, b[-1])
    db = len(b) - 1
    while len(rem) >= len(b):
        shift = len(rem) - 1 - db
        factor = fc.mul(field, rem[-1], lead_inv)
        quot[shift] = factor
        for i, c in enumerate(b):
            if c:
                rem[shift + i] = fc.sub(field, rem[shift + i], fc.mul(field, factor, c))
        rem = trim(rem)
    return trim(quot), rem


def pgcd(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Coeffs:
    """Monic gcd."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(field, a, b)[1]
    if not a:
        return []
    return pscale(field, a, fc.inv(field, a[-1]))


def linear_factor(field: FieldSpec, c: int) -> Coeffs:
    """x - c."""
    return [fc.neg(field, c), 1]


def value_table(field: FieldSpec, a: Sequence[int]) -> List[int]:
    return [peval(field, a, c) for c in range(field.q)]


@lru_cache(maxsize=64)
def carlitz_basis(field: FieldSpec) -> Tuple[Tuple[int, ...], ...]:
    """Reduced (x - c)^(q-1) for every code c."""
    q = field.q
    return tuple(tuple(ppow_reduced(field, linear_factor(field, c), q - 1)) for c in range(q))


# ---------------------------------------------------------------------------
# Public Poly operations
# ---------------------------------------------------------------------------

def make_poly(field: FieldSpec, coeffs: Sequence[int]) -> Poly:
    return Poly(field=field, coeffs=tuple(int(c) for c in coeffs))


def x_poly(field: FieldSpec) -> Poly:
    return make_poly(field, [0, 1])


def monomial(field: FieldSpec, k: int, c: int = 1) -> Poly:
    return make_poly(field, [0] * k + [c])


def constant(field: FieldSpec, c: int) -> Poly:
    return make_poly(field, [c])


def poly_arith(f: Poly, g: Poly, op: str) -> Poly:
    """
    Ring operations on two polynomials over the same field.

    Args:
        f: Left operand
        g: Right operand
        op: One of add, sub, mul, compose (compose returns f(g(x)))

    Returns:
        Normalised result
    """
    fc.check_same_field(f.field, g.field)
    field = fc.ensure_tables(f.field)
    if op == "add":
        out = padd(field, f.coeffs, g.coeffs)
    elif op == "sub":
        out = psub(field, f.coeffs, g.coeffs)
    elif op == "mul":
        out = pmul(field, f.coeffs, g.coeffs)
    elif op == "compose":
        out = pcompose(field, f.coeffs, g.coeffs)
    else:
        raise ValueError(f"unknown operation {op!r}")
    return make_poly(field, out)


def evaluate(f: Poly, c: int) -> int:
    """Horner evaluation of f at the element code c."""
    if not 0 <= c < f.field.q:
        raise fc.FieldMismatch(f"code {c} is not an element of {f.field}")
    return peval(fc.ensure_tables(f.field), f.coeffs, c)


def eval_table(f: Poly) -> List[int]:
    """Values of f at codes 0..q-1 in order."""
    return value_table(fc.ensure_tables(f.field), f.coeffs)


def reduce_mod_xq_minus_x(f: Poly) -> Poly:
    field = fc.ensure_tables(f.field)
    return make_poly(field, preduce(field, f.coeffs))


def carlitz_interpolate(field: FieldSpec, values: Sequence[int], verify: bool = True) -> Poly:
    """
    The unique polynomial of degree <= q-1 with the given value table.

    Computes sum_c values[c] * (1 - (x - c)^(q-1)).

    Args:
        field: Field of the table
        values: Exactly q values indexed by element code
        verify: Re-evaluate the result against the table

    Returns:
        Interpolating polynomial
    """
    field = fc.ensure_tables(field)
    q = field.q
    if len(values) != q:
        raise WrongLength(f"expected {q} values, got {len(values)}")
    basis = carlitz_basis(field)
    total = 0
    out: Coeffs = []
    for c, v in enumerate(values):
        if v:
            total = fc.add(field, total, v)
            out = psub(field, out, pscale(field, basis[c], v))
    out = padd(field, out, [total] if total else [])
    result = make_poly(field, out)
    if verify and value_table(field, out) != list(values):
        raise ArithmeticError("interpolation does not reproduce the value table")
    return result


def permutation_poly(field: FieldSpec, images: Sequence[int]) -> Poly:
    """Polynomial representing the map c -> images[c]."""
    return carlitz_interpolate(field, images)


def transposition_poly(field: FieldSpec, a: int, b: int) -> Poly:
    """
    Reduced polynomial of the transposition (a, b):
    x + (b - a)(1 - (x - a)^(q-1)) + (a - b)(1 - (x - b)^(q-1)).
    """
    field = fc.ensure_tables(field)
    if a == b:
        raise EqualPoints("a transposition needs two distinct points")
    basis = carlitz_basis(field)
    ba = fc.sub(field, b, a)
    ab = fc.neg(field, ba)
    out = [0, 1]
    out = padd(field, out, pscale(field, psub(field, [1], basis[a]), ba))
    out = padd(field, out, pscale(field, psub(field, [1], basis[b]), ab))
    return make_poly(field, out)


def shift_scale_compose(f: Poly, b: int, c: int, d: int) -> Poly:
    """c * f(x + b) + d."""
    field = fc.ensure_tables(f.field)
    if c == 0:
        raise ZeroScale("scale factor must be nonzero")
    shifted = pcompose(field, f.coeffs, [b, 1]) if b else list(f.coeffs)
    out = padd(field, pscale(field, shifted, c), [d] if d else [])
    return make_poly(field, out)


# ---------------------------------------------------------------------------
# Bivariate difference quotient
# ---------------------------------------------------------------------------

def difference_quotient(f: Poly) -> BiPoly:
    """
    Phi(x, y) = (f(x) - f(y)) / (x - y) via x^k - y^k = (x - y) sum x^i y^(k-1-i).
    """
    field = fc.ensure_tables(f.field)
    if f.degree < 1:
        raise ConstantInput("difference quotient needs degree >= 1")
    terms: Dict[Tuple[int, int], int] = {}
    for k, a in enumerate(f.coeffs):
        if k == 0 or a == 0:
            continue
        for i in range(k):
            key = (i, k - 1 - i)
            terms[key] = fc.add(field, terms.get(key, 0), a)
    return BiPoly(field=field, terms=terms)


def bipoly_times_x_minus_y(phi: BiPoly) -> Dict[Tuple[int, int], int]:
    field = fc.ensure_tables(phi.field)
    out: Dict[Tuple[int, int], int] = {}
    for (i, j), c in phi.terms.items():
        out[(i + 1, j)] = fc.add(field, out.get((i + 1, j), 0), c)
        out[(i, j + 1)] = fc.sub(field, out.get((i, j + 1), 0), c)
    return {k: v for k, v in out.items() if v}


def difference_identity_holds(f: Poly, phi: BiPoly) -> bool:
    """Check Phi(x, y) * (x - y) == f(x) - f(y) term by term."""
    field = fc.ensure_tables(f.field)
    expected: Dict[Tuple[int, int], int] = {}
    for k, a in enumerate(f.coeffs):
        if k == 0 or a == 0:
            continue
        expected[(k, 0)] = a
        expected[(0, k)] = fc.neg(field, a)
    return bipoly_times_x_minus_y(phi) == expected


def bipoly_eval(phi: BiPoly, x: int, y: int) -> int:
    field = fc.ensure_tables(phi.field)
    acc = 0
    for (i, j), c in phi.terms.items():
        term = fc.mul(field, c, fc.mul(field, fc.power(field, x, i), fc.power(field, y, j)))
        acc = fc.add(field, acc, term)
    return acc


# ---------------------------------------------------------------------------
# Multinomial coefficients mod p
# ---------------------------------------------------------------------------

def multinomial_mod_p(t: int, ks: Sequence[int], p: int) -> int:
    """
    Multinomial coefficient t! / (k_1! ... k_s!) mod p, digit by digit in base p.

    The result is zero as soon as the parts' digits carry in some position.

    Raises:
        SumMismatch: if the parts do not sum to t
    """
    if any(k < 0 for k in ks) or sum(ks) != t:
        raise SumMismatch(f"parts {list(ks)} do not sum to {t}")
    result = 1
    rest_t = t
    rest = list(ks)
    while rest_t:
        rest_t, t_digit = divmod(rest_t, p)
        digits = []
        for idx, k in enumerate(rest):
            rest[idx], d = divmod(k, p)
            digits.append(d)
        if sum(digits) != t_digit:
            return 0
        remaining = t_digit
        for d in digits:
            result = result * math.comb(remaining, d) % p
            remaining -= d
    return result % p


def binomial_mod_p(n: int, k: int, p: int) -> int:
    """Lucas: C(n, k) mod p."""
    if k < 0 or k > n:
        return 0
    return multinomial_mod_p(n, [k, n - k], p)

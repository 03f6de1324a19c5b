"""
Finite field construction and element arithmetic.

Elements of F_{p^r} are integer codes whose base-p digits are the coordinates in the
basis 1, theta, ..., theta^(r-1), theta a root of the field modulus. Multiplication uses
exp/log tables over a primitive element; addition in proper extensions uses Zech
logarithms. Dense numpy addition/multiplication tables are built for q <= table_cap and
back the vectorised searches.
"""
import logging
from functools import lru_cache
from itertools import product
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime, primefactors
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_rem

from .models import FieldSpec
from .validation import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    NotIrreducible,
    NotPrime,
    PermPolyError,
    split_prime_power,
)

log = logging.getLogger(__name__)

DEFAULT_TABLE_CAP = 4096
MAX_ORDER = 1 << 16


class RingOps(NamedTuple):
    """Arithmetic of a field passed to the generic linear-algebra routines."""

    zero: object
    one: object
    add: Callable
    sub: Callable
    mul: Callable
    div: Callable
    is_zero: Callable


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _to_digits(code: int, p: int, r: int) -> List[int]:
    digits = []
    for _ in range(r):
        code, d = divmod(code, p)
        digits.append(d)
    return digits


def _from_digits(digits: Sequence[int], p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


def is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    """
    Trial-divide a monic polynomial over F_p by every monic polynomial of degree <= r/2.

    Args:
        coeffs: Ascending coefficients, monic
        p: Prime

    Returns:
        True if no proper factor exists
    """
    r = len(coeffs) - 1
    if r <= 1:
        return r == 1
    dense = [int(c) % p for c in reversed(coeffs)]
    for d in range(1, r // 2 + 1):
        for tail in product(range(p), repeat=d):
            divisor = [1] + list(tail)
            if not gf_rem(dense, divisor, p, ZZ):
                return False
    return True


def canonical_modulus(p: int, r: int) -> Tuple[int, ...]:
    """First irreducible monic degree-r polynomial in the order sum(a_i p^i)."""
    for m in range(p ** r):
        candidate = tuple(_to_digits(m, p, r)) + (1,)
        if is_irreducible_mod_p(candidate, p):
            return candidate
    raise NotIrreducible(f"no irreducible polynomial of degree {r} over F_{p}")  # unreachable


def _mulmod_digits(a: List[int], b: List[int], modulus: Sequence[int], p: int) -> List[int]:
    r = len(modulus) - 1
    prod = [0] * (2 * r - 1 if r else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    for k in range(len(prod) - 1, r - 1, -1):
        c = prod[k] % p
        if c:
            # x^k = x^(k-r) * (x^r) and x^r = -(m_0 + ... + m_{r-1} x^{r-1})
            for i in range(r):
                prod[k - r + i] -= c * modulus[i]
        prod[k] = 0
    return [c % p for c in prod[:r]]


def _powmod_digits(a: List[int], k: int, modulus: Sequence[int], p: int) -> List[int]:
    r = len(modulus) - 1
    result = [1] + [0] * (r - 1)
    base = list(a)
    while k:
        if k & 1:
            result = _mulmod_digits(result, base, modulus, p)
        base = _mulmod_digits(base, base, modulus, p)
        k >>= 1
    return result


def _find_generator(p: int, r: int, modulus: Sequence[int]) -> int:
    q = p ** r
    if q == 2:
        return 1
    one = [1] + [0] * (r - 1)
    cofactors = [(q - 1) // ell for ell in primefactors(q - 1)]
    for g in range(2, q):
        digits = _to_digits(g, p, r)
        if all(_powmod_digits(digits, e, modulus, p) != one for e in cofactors):
            return g
    raise PermPolyError(f"no generator found for F_{q}")  # unreachable for an irreducible modulus


def _build_tables(field: FieldSpec, table_cap: int) -> None:
    p, r, q = field.p, field.r, field.q
    g = _find_generator(p, r, field.modulus)
    exp = [0] * (q - 1)
    logs = [-1] * q
    cur = [1] + [0] * (r - 1)
    g_digits = _to_digits(g, p, r)
    for k in range(q - 1):
        code = _from_digits(cur, p)
        exp[k] = code
        logs[code] = k
        cur = _mulmod_digits(cur, g_digits, field.modulus, p)

    # zech[n] = log(1 + g^n), -1 when 1 + g^n = 0
    zech = [-1] * (q - 1)
    for n in range(q - 1):
        code = exp[n]
        d0 = code % p
        plus_one = code - d0 + (d0 + 1) % p
        zech[n] = logs[plus_one] if plus_one else -1

    field._exp = exp
    field._log = logs
    field._zech = zech

    if q <= table_cap:
        codes = np.arange(q, dtype=np.int64)
        add = np.zeros((q, q), dtype=np.int64)
        weight = 1
        for _ in range(r):
            digit = (codes // weight) % p
            add += ((digit[:, None] + digit[None, :]) % p) * weight
            weight *= p
        log_arr = np.array([0] + logs[1:], dtype=np.int64)
        exp_arr = np.array(exp, dtype=np.int64)
        mul = exp_arr[(log_arr[:, None] + log_arr[None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        field._add_table = add.astype(np.int32)
        field._mul_table = mul.astype(np.int32)
    log.debug("built arithmetic tables for F_%d (generator %d, dense=%s)", q, g, q <= table_cap)


@lru_cache(maxsize=None)
def make_field(
    p: int,
    r: int = 1,
    modulus_override: Optional[Tuple[int, ...]] = None,
    table_cap: int = DEFAULT_TABLE_CAP
) -> FieldSpec:
    """
    Construct F_{p^r} deterministically.

    Args:
        p: Prime characteristic
        r: Extension degree
        modulus_override: Optional monic modulus (ascending coefficients over F_p)
        table_cap: Largest q for which dense q x q tables are built

    Returns:
        FieldSpec with arithmetic tables attached

    Raises:
        NotPrime, DegreeMismatch, NotIrreducible
    """
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if r < 1:
        raise DegreeMismatch("extension degree must be at least 1")
    if p ** r > MAX_ORDER:
        raise PermPolyError(f"F_{p}^{r} exceeds the supported order {MAX_ORDER}")

    if modulus_override is None:
        modulus = canonical_modulus(p, r)
    else:
        modulus = tuple(int(c) % p for c in modulus_override)
        while len(modulus) > 1 and modulus[-1] == 0:
            modulus = modulus[:-1]
        if len(modulus) - 1 != r:
            raise DegreeMismatch(f"modulus has degree {len(modulus) - 1}, expected {r}")
        if modulus[-1] != 1:
            raise NotIrreducible("modulus must be monic")
        if not is_irreducible_mod_p(modulus, p):
            raise NotIrreducible(f"modulus {list(modulus)} is reducible over F_{p}")

    field = FieldSpec(p=p, r=r, modulus=modulus)
    _build_tables(field, table_cap)
    log.info("constructed F_%d with modulus %s", field.q, list(modulus))
    return field


def field_from_order(q: int, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """Construct F_q from its order; the order is factored automatically."""
    p, r = split_prime_power(q)
    return make_field(p, r, tuple(modulus) if modulus is not None else None)


def field_from_spec(data: dict) -> FieldSpec:
    """Rebuild a field from its serialised {p, r, modulus} form."""
    return make_field(int(data["p"]), int(data["r"]), tuple(int(c) for c in data["modulus"]))


def ensure_tables(field: FieldSpec) -> FieldSpec:
    """Return a field with arithmetic tables, rebuilding when given a bare model."""
    if field._exp is None:
        return make_field(field.p, field.r, field.modulus)
    return field


def check_same_field(*fields: FieldSpec) -> None:
    first = fields[0]
    for other in fields[1:]:
        if other != first:
            raise FieldMismatch(f"{first} and {other} differ")


# ---------------------------------------------------------------------------
# Scalar arithmetic
# ---------------------------------------------------------------------------

def elements(field: FieldSpec) -> range:
    return range(field.q)


def from_int(field: FieldSpec, n: int) -> int:
    """Image of the integer n in the prime subfield."""
    return n % field.p


def add(field: FieldSpec, a: int, b: int) -> int:
    if field.r == 1:
        return (a + b) % field.p
    if field.p == 2:
        return a ^ b
    if a == 0:
        return b
    if b == 0:
        return a
    logs = field._log
    m = field.q - 1
    la = logs[a]
    z = field._zech[(logs[b] - la) % m]
    if z < 0:
        return 0
    return field._exp[(la + z) % m]


def neg(field: FieldSpec, a: int) -> int:
    if a == 0 or field.p == 2:
        return a
    if field.r == 1:
        return field.p - a
    m = field.q - 1
    return field._exp[(field._log[a] + m // 2) % m]


def sub(field: FieldSpec, a: int, b: int) -> int:
    return add(field, a, neg(field, b))


def mul(field: FieldSpec, a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    if field.r == 1:
        return (a * b) % field.p
    logs = field._log
    return field._exp[(logs[a] + logs[b]) % (field.q - 1)]


def inv(field: FieldSpec, a: int) -> int:
    if a == 0:
        raise DivisionByZero(f"0 has no inverse in {field}")
    m = field.q - 1
    return field._exp[(-field._log[a]) % m]


def div(field: FieldSpec, a: int, b: int) -> int:
    return mul(field, a, inv(field, b))


def power(field: FieldSpec, a: int, k: int) -> int:
    """a^k by square-and-multiply, exponent reduced mod q-1 for nonzero a."""
    if a == 0:
        if k < 0:
            raise DivisionByZero(f"0 has no inverse in {field}")
        return 1 if k == 0 else 0
    k %= field.q - 1
    result, base = 1, a
    while k:
        if k & 1:
            result = mul(field, result, base)
        base = mul(field, base, base)
        k >>= 1
    return result


def arith(field: FieldSpec, a: int, b: Optional[int], op: str, k: Optional[int] = None) -> int:
    """
    Dispatch one field operation by name.

    Args:
        field: Field the operands belong to
        a: First operand code
        b: Second operand code (ignored for neg, inv, pow)
        op: One of add, sub, mul, div, neg, inv, pow
        k: Exponent for pow

    Returns:
        Result code
    """
    q = field.q
    for operand in (a, b):
        if operand is not None and not 0 <= operand < q:
            raise FieldMismatch(f"code {operand} is not an element of {field}")
    if op == "add":
        return add(field, a, b)
    if op == "sub":
        return sub(field, a, b)
    if op == "mul":
        return mul(field, a, b)
    if op == "div":
        return div(field, a, b)
    if op == "neg":
        return neg(field, a)
    if op == "inv":
        return inv(field, a)
    if op == "pow":
        return power(field, a, 0 if k is None else k)
    raise ValueError(f"unknown operation {op!r}")


def frobenius(field: FieldSpec, a: int, h: int = 1) -> int:
    """a^(p^h)."""
    return power(field, a, field.p ** h)


def element_order(field: FieldSpec, a: int) -> int:
    if a == 0:
        raise DivisionByZero("0 has no multiplicative order")
    m = field.q - 1
    order = m
    for ell in primefactors(m) if m > 1 else []:
        while order % ell == 0 and power(field, a, order // ell) == 1:
            order //= ell
    return order


def primitive_element(field: FieldSpec) -> int:
    """The generator of the multiplicative group with the smallest code."""
    if field.q == 2:
        return 1
    m = field.q - 1
    cofactors = [m // ell for ell in primefactors(m)]
    for g in range(2, field.q):
        if all(power(field, g, e) != 1 for e in cofactors):
            return g
    raise PermPolyError(f"no generator found for {field}")  # unreachable


def _sqrt_map(field: FieldSpec) -> dict:
    if field._sqrt is None:
        roots = {}
        for c in range(field.q):
            roots.setdefault(mul(field, c, c), c)
        field._sqrt = roots
    return field._sqrt


def is_square(field: FieldSpec, a: int) -> bool:
    """Zero counts as a square; every element is a square in characteristic 2."""
    return a in _sqrt_map(field)


def sqrt(field: FieldSpec, a: int) -> Optional[int]:
    """The square root with the smaller code, or None when a is not a square."""
    return _sqrt_map(field).get(a)


def square_roots(field: FieldSpec, a: int) -> List[int]:
    """Every root of x^2 = a, ascending."""
    root = sqrt(field, a)
    if root is None:
        return []
    other = neg(field, root)
    return sorted({root, other})


def nonzero_squares(field: FieldSpec) -> List[int]:
    return sorted(a for a in _sqrt_map(field) if a != 0)


def nonsquares(field: FieldSpec) -> List[int]:
    squares = _sqrt_map(field)
    return [a for a in range(1, field.q) if a not in squares]


def fourth_powers(field: FieldSpec) -> List[int]:
    return sorted({power(field, c, 4) for c in range(1, field.q)})


def field_ops(field: FieldSpec) -> RingOps:
    """Scalar arithmetic of F_q bundled for the generic linear-algebra routines."""
    return RingOps(
        zero=0,
        one=1,
        add=lambda a, b: add(field, a, b),
        sub=lambda a, b: sub(field, a, b),
        mul=lambda a, b: mul(field, a, b),
        div=lambda a, b: div(field, a, b),
        is_zero=lambda a: a == 0,
    )


def _absolute_trace(field: FieldSpec, a: int) -> int:
    trace, term = 0, a
    for _ in range(field.r):
        trace = add(field, trace, term)
        term = frobenius(field, term)
    return trace


def quadratic_extension_ops(field: FieldSpec) -> Tuple[RingOps, Tuple[int, int]]:
    """
    Arithmetic of F_{q^2} = F_q[z]/(z^2 - s z - t) on pairs (u, v) = u + v z.

    Odd q uses z^2 = nu for the smallest nonsquare nu; characteristic 2 uses
    z^2 = z + a with a of absolute trace 1.

    Returns:
        (ring operations, (s, t))
    """
    q = field.q
    if field.p != 2:
        s, t = 0, nonsquares(field)[0]
    else:
        s = 1
        t = next(a for a in range(1, q) if _absolute_trace(field, a) == 1)

    def e_add(x, y):
        return (add(field, x[0], y[0]), add(field, x[1], y[1]))

    def e_sub(x, y):
        return (sub(field, x[0], y[0]), sub(field, x[1], y[1]))

    def e_mul(x, y):
        u1, v1 = x
        u2, v2 = y
        vv = mul(field, v1, v2)
        u = add(field, mul(field, u1, u2), mul(field, vv, t))
        v = add(field, add(field, mul(field, u1, v2), mul(field, v1, u2)), mul(field, vv, s))
        return (u, v)

    def e_inv(x):
        u, v = x
        # conjugate u + v(s - z); norm u^2 + uvs - v^2 t
        norm = sub(field, add(field, mul(field, u, u), mul(field, mul(field, u, v), s)),
                   mul(field, mul(field, v, v), t))
        if norm == 0:
            raise DivisionByZero("0 has no inverse in the quadratic extension")
        n_inv = inv(field, norm)
        return (mul(field, add(field, u, mul(field, v, s)), n_inv), mul(field, neg(field, v), n_inv))

    ops = RingOps(
        zero=(0, 0),
        one=(1, 0),
        add=e_add,
        sub=e_sub,
        mul=e_mul,
        div=lambda x, y: e_mul(x, e_inv(y)),
        is_zero=lambda x: x == (0, 0),
    )
    return ops, (s, t)


# ---------------------------------------------------------------------------
# Vectorised arithmetic (numpy)
# ---------------------------------------------------------------------------

def _digit_add(field: FieldSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    p = field.p
    out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    weight = 1
    for _ in range(field.r):
        out += (((x // weight) % p + (y // weight) % p) % p) * weight
        weight *= p
    return out


def vec_add(field: FieldSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if field._add_table is not None:
        return field._add_table[x, y]
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if field.r == 1:
        return (x + y) % field.p
    if field.p == 2:
        return x ^ y
    return _digit_add(field, x, y)


def vec_mul(field: FieldSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if field._mul_table is not None:
        return field._mul_table[x, y]
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if field.r == 1:
        return (x * y) % field.p
    logs = np.array([0] + field._log[1:], dtype=np.int64)
    exps = np.array(field._exp, dtype=np.int64)
    out = exps[(logs[x] + logs[y]) % (field.q - 1)]
    return np.where((x == 0) | (y == 0), 0, out)


def vec_neg(field: FieldSpec, x: np.ndarray) -> np.ndarray:
    negs = np.array([neg(field, a) for a in range(field.q)], dtype=np.int64)
    return negs[np.asarray(x, dtype=np.int64)]


def power_vector(field: FieldSpec, k: int) -> np.ndarray:
    """Vector of c^k for every code c."""
    return np.array([power(field, c, k) for c in range(field.q)], dtype=np.int64)

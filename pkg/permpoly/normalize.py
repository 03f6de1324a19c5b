"""
Normalised representatives of permutation polynomials and their transformation orbits.
"""
from typing import Set, Tuple

from . import field_core as fc
from . import poly_core as pc
from .criteria import is_pp
from .models import NormalizedForm, Poly
from .validation import ConstantInput, NotAPP, NotNormalized


def normalize(f: Poly) -> NormalizedForm:
    """
    The unique g = c*f(x+b) + d that is monic, vanishes at 0 and, when p does not divide
    the degree, has no x^(n-1) term.

    f is reduced mod x^q - x first. c = a_n^-1, b = -a_{n-1}/(n a_n) when p does not divide
    n (otherwise 0) and d = -c*f(b).

    Raises:
        NotAPP: if f does not permute its field
        ConstantInput: if f is constant
    """
    field = fc.ensure_tables(f.field)
    f = pc.reduce_mod_xq_minus_x(f)
    if f.degree < 1:
        raise ConstantInput("constant polynomials have no normal form")
    if not is_pp(f):
        raise NotAPP(f"{f} is not a permutation polynomial of {field}")
    n = f.degree
    lead = f.coeff(n)
    c = fc.inv(field, lead)
    if n % field.p:
        b = fc.neg(field, fc.div(field, f.coeff(n - 1), fc.mul(field, lead, fc.from_int(field, n))))
    else:
        b = 0
    d = fc.neg(field, fc.mul(field, c, pc.peval(field, f.coeffs, b)))
    g = pc.shift_scale_compose(f, b, c, d)
    return NormalizedForm(g=g, b=b, c=c, d=d)


def is_normalized(g: Poly) -> bool:
    n = g.degree
    if n < 1 or g.coeff(n) != 1 or g.coeff(0) != 0:
        return False
    return n == 1 or n % g.field.p == 0 or g.coeff(n - 1) == 0


def orbit_codes(g: Poly) -> Set[Tuple[int, ...]]:
    """Coefficient tuples of every c*g(x+b) + d."""
    field = fc.ensure_tables(g.field)
    q, n = field.q, g.degree
    shifts = range(q) if n > 1 and n % field.p else [0]
    out: Set[Tuple[int, ...]] = set()
    for b in shifts:
        shifted = pc.pcompose(field, g.coeffs, [b, 1]) if b else list(g.coeffs)
        for c in range(1, q):
            scaled = pc.pscale(field, shifted, c)
            for d in range(q):
                coeffs = list(scaled)
                coeffs[0] = fc.add(field, coeffs[0], d)
                out.add(tuple(coeffs))
    return out


def orbit_expand(g: Poly) -> Set[Poly]:
    """
    {c*g(x+b) + d : c != 0}, with b over the whole field only for nonlinear g whose degree
    is prime to p.

    Raises:
        NotNormalized: if g is not a normalised polynomial
    """
    if not is_normalized(g):
        raise NotNormalized(f"{g} is not normalised")
    field = fc.ensure_tables(g.field)
    return {pc.make_poly(field, c) for c in orbit_codes(g)}


def extrareduce(f: Poly) -> Tuple[Poly, int, int]:
    """
    Clear the x^4 term of a monic sextic with f(0) = 0 over characteristic 3.

    When a5 != 0 the shift b = a4/a5 removes x^4 without touching x^5, and the constant
    c = -f(b) restores f(0) = 0. Returns (f(x+b) + c, b, c); a5 = 0 leaves f unchanged.
    """
    field = fc.ensure_tables(f.field)
    if field.p != 3 or f.degree != 6 or f.coeff(6) != 1 or f.coeff(0) != 0:
        raise NotNormalized("extrareduce expects a monic sextic with f(0) = 0 over characteristic 3")
    a5, a4 = f.coeff(5), f.coeff(4)
    if a5 == 0:
        return f, 0, 0
    b = fc.div(field, a4, a5)
    c = fc.neg(field, pc.peval(field, f.coeffs, b))
    return pc.shift_scale_compose(f, b, 1, c), b, c

"""
Exact linear algebra over a field supplied as RingOps.
"""
from typing import List, Sequence

from .field_core import RingOps


def bareiss_determinant(matrix: Sequence[Sequence], ops: RingOps):
    """
    Fraction-free (Bareiss) determinant.

    Args:
        matrix: Square matrix of ring elements
        ops: Arithmetic of the coefficient field

    Returns:
        The determinant
    """
    n = len(matrix)
    if n == 0:
        return ops.one
    a = [list(row) for row in matrix]
    sign = False
    prev = ops.one
    for k in range(n - 1):
        if ops.is_zero(a[k][k]):
            pivot = next((i for i in range(k + 1, n) if not ops.is_zero(a[i][k])), None)
            if pivot is None:
                return ops.zero
            a[k], a[pivot] = a[pivot], a[k]
            sign = not sign
        akk = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                num = ops.sub(ops.mul(row_i[j], akk), ops.mul(aik, row_k[j]))
                row_i[j] = ops.div(num, prev)
            row_i[k] = ops.zero
        prev = akk
    det = a[n - 1][n - 1]
    return ops.sub(ops.zero, det) if sign else det


def hessenberg_form(matrix: Sequence[Sequence], ops: RingOps) -> List[list]:
    """Upper Hessenberg matrix similar to the input (elimination with similarity updates)."""
    n = len(matrix)
    h = [list(row) for row in matrix]
    for m in range(1, n - 1):
        pivot = next((i for i in range(m, n) if not ops.is_zero(h[i][m - 1])), None)
        if pivot is None:
            continue
        if pivot != m:
            h[pivot], h[m] = h[m], h[pivot]
            for row in h:
                row[pivot], row[m] = row[m], row[pivot]
        piv = h[m][m - 1]
        for i in range(m + 1, n):
            if ops.is_zero(h[i][m - 1]):
                continue
            u = ops.div(h[i][m - 1], piv)
            for j in range(n):
                h[i][j] = ops.sub(h[i][j], ops.mul(u, h[m][j]))
            for row in h:
                row[m] = ops.add(row[m], ops.mul(u, row[i]))
    return h


def _poly_add(a: list, b: list, ops: RingOps) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = ops.add(out[i], c)
    return out


def _poly_scale(a: list, c, ops: RingOps) -> list:
    return [ops.mul(x, c) for x in a]


def characteristic_polynomial(matrix: Sequence[Sequence], ops: RingOps) -> list:
    """
    det(xI - M) as an ascending coefficient list (monic, length n+1).

    Reduces M to Hessenberg form H and runs the recurrence
    p_m = (x - h_mm) p_{m-1} - sum_i h_im (h_{m,m-1} ... h_{i+1,i}) p_{i-1}.
    """
    n = len(matrix)
    h = hessenberg_form(matrix, ops)
    polys = [[ops.one]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        # (x - h_mm) * p_{m-1}
        shifted = [ops.zero] + list(prev)
        nxt = _poly_add(shifted, _poly_scale(prev, ops.sub(ops.zero, h[m - 1][m - 1]), ops), ops)
        t = ops.one
        for i in range(m - 1, 0, -1):
            t = ops.mul(t, h[i][i - 1])
            coef = ops.mul(h[i - 1][m - 1], t)
            if not ops.is_zero(coef):
                nxt = _poly_add(nxt, _poly_scale(polys[i - 1], ops.sub(ops.zero, coef), ops), ops)
        polys.append(nxt)
    return polys[n]


def _trim(a: Sequence, ops: RingOps) -> list:
    out = list(a)
    while out and ops.is_zero(out[-1]):
        out.pop()
    return out


def _ring_power(a, k: int, ops: RingOps):
    out = ops.one
    while k:
        if k & 1:
            out = ops.mul(out, a)
        a = ops.mul(a, a)
        k >>= 1
    return out


def _remainder(a: list, b: list, ops: RingOps) -> list:
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(rem) > db:
        factor = ops.div(rem[-1], lead)
        shift = len(rem) - 1 - db
        for i, c in enumerate(b):
            rem[shift + i] = ops.sub(rem[shift + i], ops.mul(factor, c))
        rem = _trim(rem, ops)
    return rem


def euclidean_resultant(a: Sequence, b: Sequence, ops: RingOps):
    """
    Res(a, b) of two ascending coefficient lists by the remainder sequence.

    Uses Res(A, B) = (-1)^(deg A deg B) lc(B)^(deg A - deg R) Res(B, R) with R = A mod B,
    so it agrees with the determinant of the Sylvester matrix whose rows of A come first.
    """
    a, b = _trim(a, ops), _trim(b, ops)
    if not a or not b:
        return ops.zero
    if len(a) == 1:
        return _ring_power(a[0], len(b) - 1, ops)
    result = ops.one
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return ops.mul(result, _ring_power(b[0], da, ops))
        r = _remainder(a, b, ops)
        if not r:
            return ops.zero
        if da % 2 and db % 2:
            result = ops.sub(ops.zero, result)
        result = ops.mul(result, _ring_power(b[-1], da - (len(r) - 1), ops))
        a, b = b, r

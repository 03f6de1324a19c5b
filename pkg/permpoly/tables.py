"""
Catalogue of parametric rows listing the normalised PPs of degree <= 6 and the degree-6
orthomorphisms of F_9.

Rows are addressable by id:
    low:<slug>              normalised PPs of degree <= 5 (condition on q)
    deg6-normalised:<k>     normalised degree-6 PPs, k = 1..9
    deg6-reduced:<k>        degree-6 PPs up to c f(x+b) + d, k = 1..9
    ortho:<case>            degree-6 orthomorphisms of F_9 with f(0) = 0

Wherever a row uses a square root of 2 in F_9 both roots are enumerated; "+-" signs that
occur twice in a row are taken together.
"""
from functools import reduce
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from . import field_core as fc
from . import poly_core as pc
from .models import FieldSpec, Poly
from .validation import BadParameters, DegreeOutOfRange, UnknownFamily

Codes = Tuple[int, ...]


class TableRow(BaseModel):
    """One parametric row and the rule for expanding it over a field."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    id: str
    degree: int
    formula: str
    condition: str
    case: Optional[str] = Field(default=None, description="P2 / P3 label for orthomorphism rows")
    applies: Callable[[FieldSpec], bool] = Field(exclude=True)
    expand: Callable[[FieldSpec], Set[Codes]] = Field(exclude=True)


class _Ops:
    """Shorthand element arithmetic for writing row formulas."""

    def __init__(self, field: FieldSpec):
        self.field = field

    def k(self, n: int) -> int:
        return fc.from_int(self.field, n)

    def mul(self, *xs: int) -> int:
        return reduce(lambda a, b: fc.mul(self.field, a, b), xs, 1)

    def add(self, *xs: int) -> int:
        return reduce(lambda a, b: fc.add(self.field, a, b), xs, 0)

    def pw(self, a: int, e: int) -> int:
        return fc.power(self.field, a, e)

    def neg(self, a: int) -> int:
        return fc.neg(self.field, a)

    def poly(self, terms: Dict[int, int]) -> Codes:
        out = [0] * (max(terms) + 1)
        for e, c in terms.items():
            out[e] = fc.add(self.field, out[e], c)
        return tuple(pc.trim(out))

    def nonzero(self) -> range:
        return range(1, self.field.q)

    def sqrt2(self) -> List[int]:
        return fc.square_roots(self.field, self.k(2))

    def signs(self) -> List[int]:
        return sorted({1, self.neg(1)})


def _is_order(*orders: int) -> Callable[[FieldSpec], bool]:
    return lambda field: field.q in orders


# ---------------------------------------------------------------------------
# Degree <= 5
# ---------------------------------------------------------------------------

def _x(field: FieldSpec) -> Set[Codes]:
    return {(0, 1)}


def _x2(field: FieldSpec) -> Set[Codes]:
    return {(0, 0, 1)}


def _x3(field: FieldSpec) -> Set[Codes]:
    return {(0, 0, 0, 1)}


def _x3_minus_ax(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {o.poly({3: 1, 1: o.neg(a)}) for a in fc.nonsquares(field)}


def _x4_pm_3x(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {o.poly({4: 1, 1: o.mul(s, o.k(3))}) for s in o.signs()}


def _x4_linearized(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    out = set()
    for a1 in range(field.q):
        for a2 in range(field.q):
            coeffs = o.poly({4: 1, 2: a1, 1: a2})
            if all(pc.peval(field, coeffs, c) != 0 for c in o.nonzero()):
                out.add(coeffs)
    return out


def _x5(field: FieldSpec) -> Set[Codes]:
    return {(0, 0, 0, 0, 0, 1)}


def _x5_minus_ax(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    fourth = set(fc.fourth_powers(field))
    return {o.poly({5: 1, 1: o.neg(a)}) for a in o.nonzero() if a not in fourth}


def _x5_sqrt2_x(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {o.poly({5: 1, 1: s}) for s in o.sqrt2()}


def _x5_pm_2x2(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {o.poly({5: 1, 2: o.mul(s, o.k(2))}) for s in o.signs()}


def _x5_q7_family(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {
        o.poly({5: 1, 3: a, 2: s, 1: o.mul(o.k(3), a, a)})
        for a in fc.nonsquares(field) for s in o.signs()
    }


def _x5_fifth_family(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    fifth = fc.inv(field, o.k(5))
    return {o.poly({5: 1, 3: a, 1: o.mul(fifth, a, a)}) for a in range(field.q)}


def _x5_q13_family(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {o.poly({5: 1, 3: a, 1: o.mul(o.k(3), a, a)}) for a in fc.nonsquares(field)}


def _x5_char5_family(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {o.poly({5: 1, 3: o.neg(o.mul(o.k(2), a)), 1: o.mul(a, a)}) for a in fc.nonsquares(field)}


# ---------------------------------------------------------------------------
# Degree 6
# ---------------------------------------------------------------------------

def _d6_row1(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {o.poly({6: 1, 1: o.mul(s, o.k(2))}) for s in o.signs()}


def _d6_row2(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {o.poly({6: 1, 1: o.mul(s, o.k(4))}) for s in o.signs()}


def _d6_row3(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {
        o.poly({6: 1, 3: o.mul(s, a, a), 2: a, 1: o.mul(s, o.k(5))})
        for a in fc.nonzero_squares(field) for s in o.signs()
    }


def _d6_row4(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {
        o.poly({6: 1, 3: o.mul(s, o.k(4), a, a), 2: a, 1: o.mul(s, o.k(4))})
        for a in fc.nonsquares(field) for s in o.signs()
    }


def _d6_row5(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    bs = {0, 1} | {b for s in o.sqrt2() for b in (s, o.add(1, s))}
    return {
        o.poly({
            6: 1,
            4: o.pw(a, 2),
            3: o.mul(o.pw(a, 7), b),
            2: o.pw(a, 4),
            1: o.mul(a, o.add(o.mul(o.k(2), b), 1)),
        })
        for a in o.nonzero() for b in bs
    }


def _shifts(reduced: bool, field: FieldSpec) -> Iterable[int]:
    return [0] if reduced else range(field.q)


def _d6_row6(reduced: bool) -> Callable[[FieldSpec], Set[Codes]]:
    def expand(field: FieldSpec) -> Set[Codes]:
        o = _Ops(field)
        k2 = o.k(2)
        out = set()
        for a in o.nonzero():
            for b in _shifts(reduced, field):
                out.add(o.poly({
                    6: 1,
                    5: a,
                    4: o.mul(k2, a, b),
                    3: o.add(o.pw(a, 3), o.mul(a, b, b), o.mul(k2, o.pw(b, 3))),
                    2: o.add(o.mul(k2, o.pw(a, 4)), o.mul(a, o.pw(b, 3))),
                    1: o.add(o.mul(k2, o.pw(a, 5)), o.mul(o.pw(a, 4), b), o.mul(k2, a, o.pw(b, 4))),
                }))
        return out
    return expand


def _d6_row7(reduced: bool) -> Callable[[FieldSpec], Set[Codes]]:
    def expand(field: FieldSpec) -> Set[Codes]:
        o = _Ops(field)
        k2 = o.k(2)
        out = set()
        for s in o.sqrt2():
            for sign in o.signs():
                phi = o.mul(sign, o.add(1, o.neg(s)))
                for a in o.nonzero():
                    for b in _shifts(reduced, field):
                        out.add(o.poly({
                            6: 1,
                            5: a,
                            4: o.mul(k2, a, b),
                            3: o.add(o.mul(a, b, b), o.mul(k2, o.pw(b, 3)), o.mul(o.pw(a, 3), phi)),
                            2: o.add(o.mul(a, o.pw(b, 3)), o.mul(k2, o.pw(a, 4), phi)),
                            1: o.add(o.mul(s, o.pw(a, 5)), o.mul(k2, a, o.pw(b, 4)), o.mul(o.pw(a, 4), b, phi)),
                        }))
        return out
    return expand


def _d6_row8(reduced: bool) -> Callable[[FieldSpec], Set[Codes]]:
    def expand(field: FieldSpec) -> Set[Codes]:
        o = _Ops(field)
        k2 = o.k(2)
        out = set()
        for s in o.sqrt2():
            for a in o.nonzero():
                for b in _shifts(reduced, field):
                    out.add(o.poly({
                        6: 1,
                        5: a,
                        4: o.mul(k2, a, b),
                        3: o.add(o.mul(k2, o.pw(a, 3)), o.mul(a, b, b), o.mul(k2, o.pw(b, 3))),
                        2: o.add(o.pw(a, 4), o.mul(a, o.pw(b, 3))),
                        1: o.add(o.mul(k2, o.pw(a, 5)), o.mul(s, o.pw(a, 5)),
                                 o.mul(k2, o.pw(a, 4), b), o.mul(k2, a, o.pw(b, 4))),
                    }))
        return out
    return expand


def _d6_row9(reduced: bool) -> Callable[[FieldSpec], Set[Codes]]:
    def expand(field: FieldSpec) -> Set[Codes]:
        o = _Ops(field)
        k2 = o.k(2)
        out = set()
        for a in o.nonzero():
            for b in _shifts(reduced, field):
                out.add(o.poly({
                    6: 1,
                    5: a,
                    4: o.mul(k2, a, b),
                    3: o.add(o.mul(a, b, b), o.mul(k2, o.pw(b, 3))),
                    2: o.add(o.mul(k2, o.pw(a, 4)), o.mul(a, o.pw(b, 3))),
                    1: o.add(o.mul(o.pw(a, 4), b), o.mul(k2, a, o.pw(b, 4))),
                }))
        return out
    return expand


# ---------------------------------------------------------------------------
# Degree-6 orthomorphisms of F_9
# ---------------------------------------------------------------------------

def _ortho_p2a(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {
        o.poly({6: a, 4: o.pw(a, 7), 2: o.pw(a, 5), 1: o.k(2)})
        for a in o.nonzero()
    }


def _ortho_p2b(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {
        o.poly({
            6: a,
            4: o.pw(a, 7),
            3: o.neg(o.mul(s, a, a)),
            2: o.pw(a, 5),
            1: o.add(o.k(2), s),
        })
        for a in o.nonzero() for s in o.sqrt2()
    }


def _ortho_p3(field: FieldSpec) -> Set[Codes]:
    o = _Ops(field)
    return {
        o.poly({
            6: o.pw(a, 5),
            5: o.mul(s, o.pw(a, 4)),
            3: o.mul(s, a, a),
            2: a,
            1: o.mul(o.k(2), o.add(1, s)),
        })
        for a in o.nonzero() for s in o.sqrt2()
    }


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def _low_degree_rows() -> List[TableRow]:
    def char(p: int) -> Callable[[FieldSpec], bool]:
        return lambda field: field.p == p

    return [
        TableRow(id="low:x", degree=1, formula="x", condition="any q",
                 applies=lambda field: True, expand=_x),
        TableRow(id="low:x2", degree=2, formula="x^2", condition="q = 0 mod 2",
                 applies=char(2), expand=_x2),
        TableRow(id="low:x3", degree=3, formula="x^3", condition="q != 1 mod 3",
                 applies=lambda field: field.q % 3 != 1, expand=_x3),
        TableRow(id="low:x3-ax", degree=3, formula="x^3 - ax, a not square",
                 condition="q = 0 mod 3", applies=char(3), expand=_x3_minus_ax),
        TableRow(id="low:x4+-3x", degree=4, formula="x^4 +- 3x", condition="q = 7",
                 applies=_is_order(7), expand=_x4_pm_3x),
        TableRow(id="low:x4+a1x2+a2x", degree=4,
                 formula="x^4 + a1x^2 + a2x, only root 0", condition="q = 0 mod 2",
                 applies=char(2), expand=_x4_linearized),
        TableRow(id="low:x5", degree=5, formula="x^5", condition="q != 1 mod 5",
                 applies=lambda field: field.q % 5 != 1, expand=_x5),
        TableRow(id="low:x5-ax", degree=5, formula="x^5 - ax, a not a fourth power",
                 condition="q = 0 mod 5", applies=char(5), expand=_x5_minus_ax),
        TableRow(id="low:x5+sqrt2x", degree=5, formula="x^5 + 2^(1/2)x", condition="q = 9",
                 applies=_is_order(9), expand=_x5_sqrt2_x),
        TableRow(id="low:x5+-2x2", degree=5, formula="x^5 +- 2x^2", condition="q = 7",
                 applies=_is_order(7), expand=_x5_pm_2x2),
        TableRow(id="low:x5+ax3+-x2+3a2x", degree=5,
                 formula="x^5 + ax^3 +- x^2 + 3a^2x, a not square", condition="q = 7",
                 applies=_is_order(7), expand=_x5_q7_family),
        TableRow(id="low:x5+ax3+a2x/5", degree=5, formula="x^5 + ax^3 + 5^-1 a^2x",
                 condition="q = 2, 3 mod 5", applies=lambda field: field.q % 5 in (2, 3),
                 expand=_x5_fifth_family),
        TableRow(id="low:x5+ax3+3a2x", degree=5, formula="x^5 + ax^3 + 3a^2x, a not square",
                 condition="q = 13", applies=_is_order(13), expand=_x5_q13_family),
        TableRow(id="low:x5-2ax3+a2x", degree=5, formula="x^5 - 2ax^3 + a^2x, a not square",
                 condition="q = 0 mod 5", applies=char(5), expand=_x5_char5_family),
    ]


_DEG6_FORMULAS = {
    1: ("x^6 +- 2x", 11),
    2: ("x^6 +- 4x", 11),
    3: ("x^6 +- a^2x^3 + ax^2 +- 5x, a a nonzero square", 11),
    4: ("x^6 +- 4a^2x^3 + ax^2 +- 4x, a not square", 11),
    5: ("x^6 + a^2x^4 + a^7bx^3 + a^4x^2 + a(2b+1)x, b in {0, 1, 2^(1/2), 1 + 2^(1/2)}", 9),
    6: ("x^6 + ax^5 + a^3x^3 + 2a^4x^2 + 2a^5x", 9),
    7: ("x^6 + ax^5 + phi a^3x^3 + 2 phi a^4x^2 + 2^(1/2)a^5x, phi = +-(1 - 2^(1/2))", 9),
    8: ("x^6 + ax^5 + 2a^3x^3 + a^4x^2 + (2 + 2^(1/2))a^5x", 9),
    9: ("x^6 + ax^5 + 2a^4x^2", 27),
}


def _deg6_rows() -> List[TableRow]:
    fixed = {1: _d6_row1, 2: _d6_row2, 3: _d6_row3, 4: _d6_row4, 5: _d6_row5}
    shifted = {6: _d6_row6, 7: _d6_row7, 8: _d6_row8, 9: _d6_row9}
    rows = []
    for listing, reduced in (("deg6-normalised", False), ("deg6-reduced", True)):
        for k, (formula, q) in _DEG6_FORMULAS.items():
            expand = fixed[k] if k in fixed else shifted[k](reduced)
            shown = formula if reduced or k in fixed else f"{formula}, shifted by x -> x + b, b arbitrary"
            rows.append(TableRow(id=f"{listing}:{k}", degree=6, formula=shown, condition=f"q = {q}",
                                 applies=_is_order(q), expand=expand))
    return rows


def _ortho_rows() -> List[TableRow]:
    return [
        TableRow(id="ortho:p2-a", degree=6, formula="ax^6 + a^7x^4 + a^5x^2 + 2x", condition="q = 9",
                 case="P2", applies=_is_order(9), expand=_ortho_p2a),
        TableRow(id="ortho:p2-b", degree=6,
                 formula="ax^6 + a^7x^4 - 2^(1/2)a^2x^3 + a^5x^2 + (2 + 2^(1/2))x",
                 condition="q = 9", case="P2", applies=_is_order(9), expand=_ortho_p2b),
        TableRow(id="ortho:p3", degree=6,
                 formula="a^5x^6 + 2^(1/2)a^4x^5 + 2^(1/2)a^2x^3 + ax^2 + 2(1 + 2^(1/2))x",
                 condition="q = 9", case="P3", applies=_is_order(9), expand=_ortho_p3),
    ]


ROWS: Dict[str, TableRow] = {row.id: row for row in _low_degree_rows() + _deg6_rows() + _ortho_rows()}


def get_row(row_id: str) -> TableRow:
    row = ROWS.get(row_id)
    if row is None:
        raise UnknownFamily(f"unknown table row {row_id!r}")
    return row


def list_rows(prefix: Optional[str] = None) -> List[TableRow]:
    return [row for row in ROWS.values() if prefix is None or row.id.startswith(prefix)]


def default_field(row: TableRow) -> FieldSpec:
    """The field a row is stated for, when it names exactly one order."""
    order = row.condition.removeprefix("q = ")
    if not order.isdigit():
        raise BadParameters(f"row {row.id} holds for a family of fields; pass --q")
    return fc.field_from_order(int(order))


def expand_codes(row_id: str, field: Optional[FieldSpec] = None) -> Set[Codes]:
    """Coefficient tuples of every member of a row over field."""
    row = get_row(row_id)
    field = fc.ensure_tables(field) if field is not None else default_field(row)
    if not row.applies(field):
        raise BadParameters(f"row {row_id} ({row.condition}) does not apply to {field}")
    return row.expand(field)


def expand_table_family(row_id: str, field: Optional[FieldSpec] = None) -> Set[Poly]:
    """Explicit polynomial set of one row."""
    field = fc.ensure_tables(field) if field is not None else default_field(get_row(row_id))
    return {pc.make_poly(field, c) for c in expand_codes(row_id, field)}


def normalised_rows(field: FieldSpec, n: int) -> List[TableRow]:
    """Rows listing the normalised degree-n PPs that apply to field."""
    if n == 6:
        if field.p == 2:
            raise DegreeOutOfRange("degree-6 PPs in even characteristic are not catalogued")
        prefix = "deg6-normalised:"
    else:
        prefix = "low:"
    return [row for row in list_rows(prefix) if row.degree == n and row.applies(field)]


def expected_normalised(field: FieldSpec, n: int) -> Set[Codes]:
    """Union of the catalogued normalised degree-n PPs of field."""
    field = fc.ensure_tables(field)
    out: Set[Codes] = set()
    for row in normalised_rows(field, n):
        out |= row.expand(field)
    return out


def expected_orthomorphisms(field: FieldSpec) -> Set[Codes]:
    """Degree-6 orthomorphisms with f(0) = 0 and (x^5 coefficient zero or x^4 coefficient zero)."""
    field = fc.ensure_tables(field)
    if field.p != 3:
        raise BadParameters("degree-6 orthomorphisms are catalogued for characteristic 3 only")
    out: Set[Codes] = set()
    for row in list_rows("ortho:"):
        if row.applies(field):
            out |= row.expand(field)
    return out


def label_rows(field: FieldSpec, n: int, polynomials: Iterable[Codes], prefix: Optional[str] = None) -> List[str]:
    """First catalogued row containing each polynomial, or 'unlisted'."""
    field = fc.ensure_tables(field)
    if prefix is None:
        rows = normalised_rows(field, n)
    else:
        rows = [row for row in list_rows(prefix) if row.degree == n and row.applies(field)]
    members = [(row.id, row.expand(field)) for row in rows]
    labels = []
    for coeffs in polynomials:
        labels.append(next((rid for rid, ms in members if tuple(coeffs) in ms), "unlisted"))
    return labels

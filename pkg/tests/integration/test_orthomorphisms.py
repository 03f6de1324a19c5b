"""
Integration tests for orthomorphism classification and its structural properties.
"""
import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent.parent))

from permpoly import field_core as fc
from permpoly import poly_core as pc
from permpoly.ortho import (
    classify_orthomorphisms,
    classify_orthomorphisms_full,
    degree6_statement_codes,
    is_complete_mapping,
    is_orthomorphism,
    ortho_degree_bound_audit,
    ortho_degree_bound_scan,
    ortho_orbit_expand,
    scale_fragility_witness,
    transform_stable,
)
from permpoly.tables import expected_orthomorphisms
from permpoly.validation import FieldTooLarge


@pytest.fixture(scope="module")
def f9_result():
    return classify_orthomorphisms(fc.make_field(3, 2), 6, jobs=1)


def test_linear_orthomorphisms():
    f7 = fc.make_field(7)
    assert is_orthomorphism(pc.make_poly(f7, [0, 2])).is_orthomorphism
    report = is_orthomorphism(pc.x_poly(f7))
    assert report.is_pp and not report.shifted_is_pp
    assert not report.is_orthomorphism


def test_f9_degree6(f9_result):
    """40 orthomorphisms: 24 without an x^5 term and 16 with one."""
    assert f9_result.count == 40
    assert f9_result.counts == {"total": 40, "P2": 24, "P3": 16}
    assert f9_result.as_set() == expected_orthomorphisms(f9_result.field)


def test_duality_with_complete_mappings(f9_result):
    """f is an orthomorphism exactly when f - x is a complete mapping."""
    field = fc.ensure_tables(f9_result.field)
    minus_one = fc.neg(field, 1)
    for f in f9_result.polys():
        g = pc.make_poly(field, pc.padd(field, f.coeffs, [0, minus_one]))
        assert is_complete_mapping(g)


def test_transformations(f9_result):
    """f(x + b) + d preserves orthomorphisms; scaling does not."""
    assert transform_stable(f9_result)
    witness = scale_fragility_witness(f9_result)
    assert witness is not None
    scaled = pc.make_poly(f9_result.field, pc.pscale(fc.ensure_tables(f9_result.field), witness["f"], witness["c"]))
    assert not is_orthomorphism(scaled).is_orthomorphism


@pytest.mark.parametrize("q, count", [(4, 8), (5, 15), (7, 133)])
def test_degree_bound_scan(q, count):
    scan = ortho_degree_bound_scan(fc.field_from_order(q))
    assert scan["orthomorphisms"] == count
    assert scan["violations"] == 0
    assert scan["max_degree"] <= q - 3


def test_degree_bound_small_fields():
    """Over F_3 the linear orthomorphisms 2x + b exceed q - 3, so the audit starts at q = 4."""
    scan = ortho_degree_bound_scan(fc.make_field(3))
    assert scan["orthomorphisms"] == 3
    assert scan["max_degree"] == 1
    assert ortho_degree_bound_audit(fc.make_field(3))
    assert ortho_degree_bound_audit(fc.make_field(2))
    assert ortho_degree_bound_audit(fc.make_field(2, 2))


def test_degree_bound_cap():
    with pytest.raises(FieldTooLarge):
        ortho_degree_bound_scan(fc.make_field(11))


@pytest.mark.slow
def test_f9_full_statement():
    """Every degree-6 orthomorphism of F_9 comes from the three catalogued families."""
    f9 = fc.make_field(3, 2)
    full = classify_orthomorphisms_full(f9, 6)
    assert full.as_set() == degree6_statement_codes(f9)


@pytest.mark.slow
def test_f27_has_no_degree6_orthomorphisms():
    assert classify_orthomorphisms(fc.make_field(3, 3), 6).count == 0


def test_orbit_sizes():
    """Shifts separate quadratics; a linear map only moves its constant term."""
    f7 = fc.make_field(7)
    square = pc.make_poly(f7, [0, 0, 1])
    assert len(ortho_orbit_expand(square)) == 49
    assert len(ortho_orbit_expand(square, shift=False)) == 7
    assert ortho_orbit_expand(pc.make_poly(f7, [0, 2])) == {(d, 2) for d in range(7)}

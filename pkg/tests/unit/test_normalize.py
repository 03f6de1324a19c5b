"""
Unit tests for normalisation and orbit expansion.
"""
import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent.parent))

from permpoly import field_core as fc
from permpoly import poly_core as pc
from permpoly.criteria import is_pp
from permpoly.normalize import extrareduce, is_normalized, normalize, orbit_codes, orbit_expand
from permpoly.validation import ConstantInput, NotAPP, NotNormalized


@pytest.fixture
def f7():
    return fc.make_field(7)


def test_normalize_quartic(f7):
    """2x^4 + x^3 + 5x^2 + 2 normalises to x^4 + 3x with b = 6, c = 4, d = 3."""
    form = normalize(pc.make_poly(f7, [2, 0, 5, 1, 2]))
    assert form.g.coeffs == (0, 3, 0, 0, 1)
    assert (form.b, form.c, form.d) == (6, 4, 3)


def test_normalize_is_idempotent(f7):
    g = pc.make_poly(f7, [0, 3, 0, 0, 1])
    form = normalize(g)
    assert form.g == g
    assert (form.b, form.c, form.d) == (0, 1, 0)


def test_normalize_reduces_first(f7):
    """x^7 acts like x."""
    assert normalize(pc.monomial(f7, 7)).g.coeffs == (0, 1)


def test_normalize_rejects_non_pp(f7):
    with pytest.raises(NotAPP):
        normalize(pc.monomial(f7, 2))


def test_normalize_rejects_constant(f7):
    with pytest.raises(ConstantInput):
        normalize(pc.constant(f7, 3))


def test_every_orbit_member_normalises_back(f7):
    g = pc.make_poly(f7, [0, 3, 0, 0, 1])
    for member in sorted(orbit_codes(g))[::17]:
        assert normalize(pc.make_poly(f7, member)).g == g


def test_p_divides_degree_skips_shift():
    """Over F_9 a cubic keeps b = 0 and only loses its constant term."""
    f9 = fc.make_field(3, 2)
    for a in range(9):
        f = pc.make_poly(f9, [5, a, 0, 1])
        if not is_pp(f):
            continue
        form = normalize(f)
        assert form.b == 0
        assert form.g.coeffs == (0, a, 0, 1)
    assert is_normalized(pc.make_poly(f9, [0, 0, 1, 1]))


def test_is_normalized(f7):
    assert is_normalized(pc.make_poly(f7, [0, 1]))
    assert not is_normalized(pc.make_poly(f7, [1, 1]))
    assert not is_normalized(pc.make_poly(f7, [0, 0, 1, 2]))
    assert not is_normalized(pc.make_poly(f7, [0, 0, 2]))


def test_orbit_sizes():
    """Linear polynomials skip the shift; x^3 over F_5 has 5 * 4 * 5 images."""
    f5 = fc.make_field(5)
    assert len(orbit_expand(pc.x_poly(f5))) == 20
    assert len(orbit_expand(pc.monomial(f5, 3))) == 100
    assert all(is_pp(h) for h in orbit_expand(pc.monomial(f5, 3)))


def test_orbit_needs_normalised_input(f7):
    with pytest.raises(NotNormalized):
        orbit_expand(pc.make_poly(f7, [1, 0, 0, 0, 0, 1]))


def test_extrareduce_clears_quartic_term():
    f3 = fc.make_field(3)
    f = pc.make_poly(f3, [0, 1, 0, 0, 1, 1, 1])
    g, b, c = extrareduce(f)
    assert b == 1
    assert g.coeff(4) == 0
    assert g.coeff(5) == 1
    assert g.coeff(0) == 0
    assert g.degree == 6


def test_extrareduce_without_quintic_term():
    f3 = fc.make_field(3)
    f = pc.make_poly(f3, [0, 1, 0, 0, 2, 0, 1])
    assert extrareduce(f) == (f, 0, 0)


def test_extrareduce_needs_characteristic_three(f7):
    with pytest.raises(NotNormalized):
        extrareduce(pc.make_poly(f7, [0, 1, 0, 0, 0, 0, 1]))

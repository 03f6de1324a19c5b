"""
Unit tests for the permutation criteria.
"""
import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent.parent))

from permpoly import field_core as fc
from permpoly import poly_core as pc
from permpoly.criteria import (
    CRITERION_NAMES,
    circulant_characteristic_polynomial,
    criterion_report,
    degree6_hermite_equations,
    first_hermite_exponent,
    hermite_one_root_test,
    hermite_power_coefficient,
    hermite_test,
    is_pp,
    is_pp_bruteforce,
    moreno_test,
    power_sum_profile,
    power_sum_test,
    raussnitz_test,
    resultant_polynomial,
    resultant_test,
    turnwald_stats,
    value_set,
    wan_bound,
    wan_bound_check,
)
from permpoly.validation import ConstantInput, DegreeTooHigh


@pytest.fixture
def f7():
    return fc.make_field(7)


def poly(field, coeffs):
    return pc.make_poly(field, coeffs)


class TestBruteForce:
    """Test evaluation-based checks."""

    def test_monomials_over_f7(self, f7):
        """x^5 permutes F_7 (gcd(5, 6) = 1); x^3 does not."""
        assert is_pp(pc.monomial(f7, 5))
        assert not is_pp(pc.monomial(f7, 3))

    def test_collision_witness(self, f7):
        """x^3 first repeats a value at 1 and 2 (1^3 = 2^3 = 1)."""
        ok, witness = is_pp_bruteforce(pc.monomial(f7, 3))
        assert not ok
        assert witness == (1, 2)

    def test_value_set(self, f7):
        """Squares mod 7."""
        assert value_set(pc.monomial(f7, 2)) == [0, 1, 2, 4]

    def test_power_sums(self, f7):
        """A PP has power sums (0, ..., 0, -1)."""
        assert power_sum_profile(pc.monomial(f7, 5)) == [0, 0, 0, 0, 0, 6]
        assert power_sum_test(pc.monomial(f7, 5)).verdict
        verdict = power_sum_test(pc.monomial(f7, 2))
        assert not verdict.verdict
        assert verdict.witness["t"] == 3


class TestHermite:
    """Test both forms of Hermite's criterion."""

    def test_square_fails_at_t3(self, f7):
        """x^6 is the first power of x^2 with degree above q-2."""
        verdict = hermite_test(pc.monomial(f7, 2))
        assert not verdict.verdict
        assert verdict.witness == {"t": 3}

    def test_pp_passes(self, f7):
        """x^5 + 3 satisfies both forms."""
        f = poly(f7, [3, 0, 0, 0, 0, 1])
        assert hermite_test(f).verdict
        assert hermite_one_root_test(f).verdict

    def test_last_condition(self):
        """x^4 + x^2 over F_5 passes the degree conditions only when t is small."""
        f5 = fc.make_field(5)
        f = poly(f5, [0, 0, 1, 0, 1])
        assert hermite_test(f).verdict == is_pp(f)
        assert hermite_one_root_test(f).verdict == is_pp(f)

    def test_power_coefficient(self):
        """Coefficient of x^10 in (x^6 + x^3 + x^2 + x)^3 mod x^11 - x is 9."""
        f11 = fc.make_field(11)
        f = poly(f11, [0, 1, 1, 1, 0, 0, 1])
        assert hermite_power_coefficient(f, 3) == 9
        with pytest.raises(ValueError):
            hermite_power_coefficient(f, 0)

    def test_first_exponent(self):
        """Least t with n*t >= q - 1 and p not dividing t."""
        assert first_hermite_exponent(11, 11, 6) == 2
        assert first_hermite_exponent(27, 3, 6) == 5
        assert first_hermite_exponent(7, 7, 5) == 2

    def test_degree6_equations_match_power_coefficient(self):
        """Over F_11, the x^10 coefficient of f^3 is 3 (a2^2 + 2 a1 a3)."""
        f11 = fc.make_field(11)
        for a1, a2, a3 in [(1, 1, 1), (2, 0, 0), (3, 5, 7), (10, 4, 1), (6, 6, 0)]:
            f = poly(f11, [0, a1, a2, a3, 0, 0, 1])
            first, second, third = degree6_hermite_equations(f11, a1, a2, a3)
            assert hermite_power_coefficient(f, 3) == fc.mul(f11, 3, first["value"])
            assert first["applicable"]
            assert not second["applicable"]
            assert not third["applicable"]

    def test_degree6_equations_vanish_on_table_rows(self):
        """x^6 + 2x over F_11 satisfies the first equation."""
        f11 = fc.make_field(11)
        assert degree6_hermite_equations(f11, 2, 0, 0)[0]["value"] == 0


class TestCirculant:
    """Test the circulant characteristic polynomial criterion."""

    def test_pp_charpoly(self, f7):
        """x^5 gives (x - 0)^6 - 1."""
        verdict = raussnitz_test(pc.monomial(f7, 5))
        assert verdict.verdict
        assert verdict.witness["charpoly"] == [6, 0, 0, 0, 0, 0, 1]

    def test_non_pp(self, f7):
        assert not raussnitz_test(pc.monomial(f7, 2)).verdict

    def test_constant_term_shift(self, f7):
        """x^5 + 2 gives (x - 2)^6 - 1."""
        assert raussnitz_test(poly(f7, [2, 0, 0, 0, 0, 1])).verdict

    def test_degree_too_high(self, f7):
        """The circulant needs degree <= q - 2."""
        with pytest.raises(DegreeTooHigh):
            circulant_characteristic_polynomial(pc.monomial(f7, 6))


class TestResultant:
    """Test the resultant criterion."""

    @pytest.mark.parametrize("q, coeffs, expected", [
        (7, [0, 0, 0, 0, 0, 1], True),
        (7, [0, 0, 1], False),
        (5, [1, 0, 0, 1], True),
        (4, [0, 0, 1], True),
        (9, [0, 0, 0, 1], True),
        (9, [0, 0, 1], False),
    ])
    def test_verdicts(self, q, coeffs, expected):
        """g_f vanishes exactly for permutation polynomials."""
        f = poly(fc.field_from_order(q), coeffs)
        verdict = resultant_test(f)
        assert verdict.verdict is expected
        assert is_pp(f) is expected

    def test_methods_agree(self):
        """Remainder sequence and Sylvester determinant give the same g_f."""
        f5 = fc.make_field(5)
        for coeffs in ([0, 0, 1], [2, 1, 0, 1], [0, 3, 1, 1]):
            f = poly(f5, coeffs)
            assert resultant_polynomial(f, method="euclid") == resultant_polynomial(f, method="sylvester")

    def test_extension_check_only_adds_top_coefficient(self):
        """Without the extension point g_f has degree below q."""
        f5 = fc.make_field(5)
        f = poly(f5, [0, 0, 1])
        low = resultant_polynomial(f, extension_check=False)
        full = resultant_polynomial(f)
        assert len(low) <= 5
        assert full
        assert len(full) <= 6

    def test_constant_rejected(self, f7):
        with pytest.raises(ConstantInput):
            resultant_polynomial(pc.constant(f7, 3))


class TestValueSets:
    """Test value-set statistics and Wan's bound."""

    def test_square_over_f7(self, f7):
        """x^2 over F_7: v = 4, u = 3, w = 3 and every statement false."""
        stats = turnwald_stats(pc.monomial(f7, 2))
        assert (stats.v, stats.u, stats.w) == (4, 3, 3)
        assert not any(stats.equivalences.values())
        assert stats.consistent

    def test_pp_statements(self, f7):
        """Every statement holds for a PP."""
        stats = turnwald_stats(pc.monomial(f7, 5))
        assert (stats.v, stats.u, stats.w) == (7, 6, 6)
        assert all(stats.equivalences.values())

    def test_degree_range(self, f7):
        with pytest.raises(DegreeTooHigh):
            turnwald_stats(pc.monomial(f7, 7))

    def test_wan_bound_values(self):
        """q - ceil((q-1)/n)."""
        assert wan_bound(11, 2) == 6
        assert wan_bound(27, 6) == 22
        assert wan_bound(7, 3) == 5

    def test_wan_bound_equality(self):
        """x^2 + 3x + 5 over F_11 attains the bound."""
        result = wan_bound_check(poly(fc.make_field(11), [5, 3, 1]))
        assert result.v == 6
        assert result.bound == 6
        assert result.satisfied
        assert not result.is_pp

    def test_wan_bound_reduces_first(self, f7):
        """x^7 is reduced to x before the bound is applied."""
        result = wan_bound_check(pc.monomial(f7, 7))
        assert result.is_pp and result.satisfied
        with pytest.raises(ConstantInput):
            wan_bound_check(poly(f7, [1, 0, 0, 0, 0, 0, 0, 6, 0, 0, 0, 0, 0, 1]))


class TestMoreno:
    """Test the two congruence conditions."""

    def test_pp(self, f7):
        result = moreno_test(pc.monomial(f7, 5))
        assert result["moreno_1"].verdict and result["moreno_2"].verdict

    def test_non_pp(self, f7):
        result = moreno_test(pc.monomial(f7, 2))
        assert not result["moreno_1"].verdict
        assert not result["moreno_2"].verdict


class TestReport:
    """Test the combined criterion report."""

    def test_table_row_over_f11(self):
        """x^6 + 2x is a PP of F_11 and every criterion agrees."""
        report = criterion_report(poly(fc.make_field(11), [0, 2, 0, 0, 0, 0, 1]))
        assert report.is_pp
        assert report.all_agree
        assert set(report.per_criterion) >= {"brute", "hermite", "resultant", "raussnitz", "moreno_1"}

    def test_inapplicable_criteria_skipped(self, f7):
        """Reduced degree q - 1 leaves out the circulant criterion."""
        report = criterion_report(pc.monomial(f7, 6))
        assert "raussnitz" not in report.per_criterion
        assert not report.is_pp
        assert report.all_agree

    def test_selection(self, f7):
        report = criterion_report(pc.monomial(f7, 5), ["brute", "hermite"])
        assert set(report.per_criterion) == {"brute", "hermite"}
        with pytest.raises(ValueError):
            criterion_report(pc.monomial(f7, 5), ["nonsense"])

    def test_all_selects_every_criterion(self, f7):
        """'all', alone or among other names, runs the same set as no selection."""
        f = pc.monomial(f7, 5)
        full = set(criterion_report(f).per_criterion)
        assert set(criterion_report(f, ["all"]).per_criterion) == full
        assert set(criterion_report(f, ["brute", "all"]).per_criterion) == full

    def test_names(self):
        assert "moreno" in CRITERION_NAMES
        assert CRITERION_NAMES[0] == "brute"

    def test_serialisation(self, f7):
        """Reports serialise with the schema version and the polynomial's field."""
        payload = criterion_report(pc.monomial(f7, 5)).model_dump(mode="json", by_alias=True)
        assert payload["schema"] == 1
        assert payload["polynomial"]["coeffs"] == [0, 0, 0, 0, 0, 1]
        assert payload["is_pp"] is True

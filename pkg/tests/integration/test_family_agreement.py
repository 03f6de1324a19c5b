"""
Integration tests: closed-form family criteria against brute-force evaluation.
"""
from itertools import product

import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent.parent))

from permpoly import field_core as fc
from permpoly.families import (
    dickson_instance,
    linearized_instance,
    m_binomial_instance,
    quadratic_binomial_instance,
    valid_binomial_divisors,
)

ODD_ORDERS = [7, 9, 11, 13, 17, 19, 23, 25, 27]


@pytest.mark.parametrize("q", ODD_ORDERS)
def test_quadratic_binomials(q):
    field = fc.field_from_order(q)
    disagreements = [a for a in range(q) if not quadratic_binomial_instance(field, a).consistent]
    assert disagreements == []


@pytest.mark.parametrize("q", [7, 11, 13])
def test_m_binomials(q):
    field = fc.field_from_order(q)
    disagreements = [
        (m, a)
        for m in valid_binomial_divisors(field)
        for a in range(q)
        if not m_binomial_instance(field, m, a).consistent
    ]
    assert disagreements == []


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_dickson(q):
    field = fc.field_from_order(q)
    for k in range(1, 25):
        for a in range(1, q):
            instance = dickson_instance(field, k, a)
            assert instance.consistent, (k, a)
            assert instance.details["recurrence_matches"], (k, a)


@pytest.mark.parametrize("q", [4, 9])
def test_linearized_small(q):
    """Every p-polynomial of degree <= p^2 over F_4 and F_9."""
    field = fc.field_from_order(q)
    for coeffs in product(range(q), repeat=3):
        if not any(coeffs):
            continue
        instance = linearized_instance(field, list(coeffs))
        decided = {v for v in instance.details["routes"].values() if v is not None}
        assert decided == {instance.brute_force_verdict}, coeffs


def test_linearized_gcd_route_over_f27():
    """Base-3 routes over F_27 for polynomials with coefficients in F_3."""
    field = fc.make_field(3, 3)
    for coeffs in product(range(3), repeat=3):
        if not any(coeffs):
            continue
        instance = linearized_instance(field, list(coeffs))
        assert instance.details["routes"]["gcd"] is not None
        assert instance.consistent


@pytest.mark.slow
def test_linearized_f27():
    field = fc.make_field(3, 3)
    for coeffs in product(range(27), repeat=3):
        if not any(coeffs):
            continue
        assert linearized_instance(field, list(coeffs)).consistent, coeffs

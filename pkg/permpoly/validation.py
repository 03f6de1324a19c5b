"""
Error types and request validation for the permutation polynomial toolkit.
"""
from typing import List, Optional, Sequence, Tuple

from sympy import factorint, isprime


class PermPolyError(Exception):
    """Base class for every error raised by the engine."""
    pass


class NotPrime(PermPolyError):
    pass


class NotPrimePower(PermPolyError):
    pass


class NotIrreducible(PermPolyError):
    pass


class DegreeMismatch(PermPolyError):
    pass


class DivisionByZero(PermPolyError, ZeroDivisionError):
    pass


class FieldMismatch(PermPolyError):
    pass


class WrongLength(PermPolyError):
    pass


class EqualPoints(PermPolyError):
    pass


class ZeroScale(PermPolyError):
    pass


class ConstantInput(PermPolyError):
    pass


class SumMismatch(PermPolyError):
    pass


class DegreeTooHigh(PermPolyError):
    pass


class NotLinearized(PermPolyError):
    pass


class BadParameters(PermPolyError):
    pass


class EvenCharacteristic(PermPolyError):
    pass


class BadDivisor(PermPolyError):
    pass


class NotAPP(PermPolyError):
    pass


class NotNormalized(PermPolyError):
    pass


class DegreeOutOfRange(PermPolyError):
    pass


class UnknownFamily(PermPolyError):
    pass


class FieldTooLarge(PermPolyError):
    pass


class SearchTooLarge(PermPolyError):
    pass


class UnknownAudit(PermPolyError):
    pass


class CacheError(PermPolyError):
    pass


def split_prime_power(q: int) -> Tuple[int, int]:
    """
    Factor a field order into (p, r) with q = p^r.

    Raises:
        NotPrimePower: if q is not a prime power
    """
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    (p, r), = factors.items()
    return int(p), int(r)


def validate_field_request(
    p: int,
    r: int,
    modulus: Optional[Sequence[int]] = None,
    max_order: int = 65536
) -> List[str]:
    """
    Validate field construction arguments.

    Args:
        p: Characteristic
        r: Extension degree
        modulus: Optional ascending coefficient list of the modulus
        max_order: Largest supported field order

    Returns:
        List of error messages (empty if all valid)
    """
    errors = []

    if not isprime(p):
        errors.append(f"Characteristic {p} is not prime")

    if r < 1:
        errors.append("Extension degree must be at least 1")
    elif isprime(p) and p ** r > max_order:
        errors.append(f"Field order {p}^{r} exceeds the supported maximum {max_order}")

    if modulus is not None:
        if any(c < 0 or c >= p for c in modulus):
            errors.append(f"Modulus coefficients must lie in [0, {p})")
        if not modulus or modulus[-1] != 1:
            errors.append("Modulus must be monic")

    return errors


def validate_search_request(
    q: int,
    degree: int,
    candidates: int,
    max_candidates: int
) -> List[str]:
    """
    Validate an exhaustive search request before any work is scheduled.

    Args:
        q: Field order
        degree: Polynomial degree
        candidates: Size of the search space
        max_candidates: Configured cap on the search space

    Returns:
        List of error messages (empty if all valid)
    """
    errors = []

    if degree < 1:
        errors.append("Degree must be at least 1")

    if candidates > max_candidates:
        errors.append(
            f"Search space of {candidates:,} candidates over F_{q} exceeds the cap of {max_candidates:,}"
        )

    return errors


def check_degree_range(q: int, degree: int) -> None:
    """Raise DegreeOutOfRange unless 2 <= degree <= q-2."""
    if degree < 2 or degree > q - 2:
        raise DegreeOutOfRange(f"Degree {degree} outside [2, {q - 2}] for F_{q}")

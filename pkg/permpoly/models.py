"""
Data models for fields, polynomials and the reports produced by the engine.
"""
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    computed_field,
    field_serializer,
    field_validator,
    model_validator,
)

SCHEMA_VERSION = 1


class FieldSpec(BaseModel):
    """A constructed finite field F_{p^r}; elements are integer codes in [0, q)."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(ge=2, description="Characteristic")
    r: int = Field(ge=1, description="Extension degree")
    modulus: Tuple[int, ...] = Field(description="Monic modulus over F_p, ascending coefficients")

    # Arithmetic tables, filled in by field_core.make_field
    _exp: Optional[List[int]] = PrivateAttr(default=None)
    _log: Optional[List[int]] = PrivateAttr(default=None)
    _zech: Optional[List[int]] = PrivateAttr(default=None)
    _add_table: Optional[np.ndarray] = PrivateAttr(default=None)
    _mul_table: Optional[np.ndarray] = PrivateAttr(default=None)
    _sqrt: Optional[Dict[int, int]] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _check_modulus_shape(self) -> "FieldSpec":
        if len(self.modulus) != self.r + 1 or self.modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.r}")
        return self

    @property
    def q(self) -> int:
        return self.p ** self.r

    @property
    def has_tables(self) -> bool:
        return self._add_table is not None

    def key(self) -> Tuple[int, int, Tuple[int, ...]]:
        return (self.p, self.r, self.modulus)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return f"F_{self.q}"


class Poly(BaseModel):
    """Univariate polynomial over one field, ascending coefficient codes."""

    model_config = ConfigDict(frozen=True)

    field: FieldSpec
    coeffs: Tuple[int, ...] = ()

    @field_validator("coeffs")
    @classmethod
    def _strip_trailing_zeros(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        end = len(value)
        while end and value[end - 1] == 0:
            end -= 1
        return tuple(value[:end])

    @model_validator(mode="after")
    def _check_codes(self) -> "Poly":
        q = self.field.q
        if any(c < 0 or c >= q for c in self.coeffs):
            raise ValueError(f"coefficient codes must lie in [0, {q})")
        return self

    @computed_field
    @property
    def degree(self) -> int:
        """Degree, with -1 standing in for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = "x" if k == 1 else f"x^{k}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)


class BiPoly(BaseModel):
    """Bivariate polynomial stored as {(i, j): coefficient} for x^i y^j."""

    model_config = ConfigDict(frozen=True)

    field: FieldSpec
    terms: Dict[Tuple[int, int], int] = Field(default_factory=dict)

    @field_validator("terms")
    @classmethod
    def _drop_zero_terms(cls, value: Dict[Tuple[int, int], int]) -> Dict[Tuple[int, int], int]:
        return {k: v for k, v in value.items() if v != 0}

    @field_serializer("terms")
    def _serialize_terms(self, terms: Dict[Tuple[int, int], int]) -> List[List[int]]:
        return [[i, j, c] for (i, j), c in sorted(terms.items())]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
            mono = "".join(
                s for s in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
                ) if s
            )
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(parts)


class CriterionVerdict(BaseModel):
    """Verdict of a single criterion together with its witness."""

    verdict: bool
    witness: Optional[Any] = None


class CriterionReport(BaseModel):
    """Per-criterion verdicts for one polynomial; is_pp is the brute-force truth."""

    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")
    polynomial: Poly
    is_pp: bool
    per_criterion: Dict[str, CriterionVerdict] = Field(default_factory=dict)

    @field_serializer("polynomial")
    def _serialize_polynomial(self, poly: Poly) -> Dict[str, Any]:
        return {"field": poly.field.model_dump(), "coeffs": list(poly.coeffs)}

    @computed_field
    @property
    def all_agree(self) -> bool:
        return all(v.verdict == self.is_pp for v in self.per_criterion.values())


class ValueSetStats(BaseModel):
    """Value-set statistics of one polynomial; None stands in for an infinite u or w."""

    q: int
    n: int = Field(description="Degree")
    v: int = Field(ge=1, description="Size of the value set")
    u: Optional[int] = Field(default=None, description="Least k >= 1 with s_k != 0")
    w: Optional[int] = Field(default=None, description="Least k >= 1 with p_k != 0")
    equivalences: Dict[str, bool] = Field(default_factory=dict)

    @computed_field
    @property
    def consistent(self) -> bool:
        """All equivalent statements share one truth value."""
        return len(set(self.equivalences.values())) <= 1


class WanBoundResult(BaseModel):
    """Value-set size against the bound q - ceil((q-1)/n)."""

    v: int
    bound: int
    is_pp: bool
    satisfied: bool


class FamilyInstance(BaseModel):
    """A realised member of a named PP family with both verdicts."""

    family: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    polynomial: Optional[Poly] = None
    criterion_verdict: bool
    brute_force_verdict: bool
    details: Dict[str, Any] = Field(default_factory=dict)

    @field_serializer("polynomial")
    def _serialize_polynomial(self, poly: Optional[Poly]) -> Optional[List[int]]:
        return None if poly is None else list(poly.coeffs)

    @computed_field
    @property
    def consistent(self) -> bool:
        return self.criterion_verdict == self.brute_force_verdict


class NormalizedForm(BaseModel):
    """Normalised representative g with g = c*f(x+b) + d."""

    g: Poly
    b: int
    c: int
    d: int

    @field_serializer("g")
    def _serialize_g(self, poly: Poly) -> List[int]:
        return list(poly.coeffs)


ClassificationMode = Literal["normalized", "all", "ortho", "ortho-all"]


class ClassificationResult(BaseModel):
    """Exact set of degree-n polynomials found by exhaustive search."""

    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")
    field: FieldSpec
    degree: int
    mode: ClassificationMode
    prefilter: Literal["none", "hermite-partial"] = "none"
    polynomials: List[Tuple[int, ...]] = Field(default_factory=list)
    cases: Optional[List[str]] = Field(default=None, description="Per-polynomial case label")
    search_space: int = Field(ge=0)
    wall_time: float = Field(ge=0, default=0.0)

    @computed_field
    @property
    def count(self) -> int:
        return len(self.polynomials)

    @computed_field
    @property
    def counts(self) -> Dict[str, int]:
        if not self.cases:
            return {"total": len(self.polynomials)}
        tally: Dict[str, int] = {"total": len(self.polynomials)}
        for label in self.cases:
            tally[label] = tally.get(label, 0) + 1
        return tally

    def polys(self) -> List[Poly]:
        return [Poly(field=self.field, coeffs=c) for c in self.polynomials]

    def as_set(self) -> set:
        return set(self.polynomials)


class OrthoReport(BaseModel):
    """Orthomorphism / complete-mapping status of one polynomial."""

    f: Poly
    is_pp: bool
    shifted_is_pp: bool = Field(description="f - x is a PP")
    is_complete_mapping: bool = Field(description="f + x is a PP")
    reduced_degree: int

    @field_serializer("f")
    def _serialize_f(self, poly: Poly) -> List[int]:
        return list(poly.coeffs)

    @computed_field
    @property
    def is_orthomorphism(self) -> bool:
        return self.is_pp and self.shifted_is_pp


class WilsonCount(BaseModel):
    """Counting identity q! = q(q-1)(1 + k2 + q*k1)."""

    q: int
    k1: int = Field(ge=0)
    k2: int = Field(ge=0)
    lhs: int
    rhs: int
    total_pp_count: Optional[int] = None
    per_degree: Dict[int, int] = Field(default_factory=dict)

    @computed_field
    @property
    def identity_holds(self) -> bool:
        exhaustive_ok = self.total_pp_count is None or self.total_pp_count == self.lhs
        return self.lhs == self.rhs and exhaustive_ok


class AuditManifest(BaseModel):
    """Catalogue entry for a named audit."""

    name: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    expected_source: str
    status: Literal["pending", "passed", "failed"] = "pending"


class AuditReport(BaseModel):
    """Outcome of one audit run."""

    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")
    name: str
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    seed: Optional[int] = None

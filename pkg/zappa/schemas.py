"""Pydantic models for every machine-readable document the engine emits."""

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "1"


class Document(BaseModel):
    """Top-level document, versioned by a ``"schema"`` field."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")

    def to_json(self, indent: Optional[int] = 2) -> str:
        return self.model_dump_json(by_alias=True, indent=indent)


# Tables

class GroupDocument(Document):
    n: int
    mul: list[list[int]]
    labels: Optional[list[str]] = None


class PairDocument(Document):
    H: GroupDocument
    K: GroupDocument
    sigma: list[list[int]]
    theta: list[list[int]]


class ZappaDocument(PairDocument):
    """A constructed product group together with the pair it came from."""

    n: int
    mul: list[list[int]]
    labels: Optional[list[str]] = None
    params: Optional[dict[str, Any]] = None


# Condition checks

class ConditionResult(BaseModel):
    condition: str
    passed: bool
    witness: Optional[dict[str, Any]] = None
    witnesses: Optional[list[dict[str, Any]]] = None


class ConditionReport(Document):
    subject: str
    results: list[ConditionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> list[ConditionResult]:
        return [r for r in self.results if not r.passed]

    def result(self, condition: str) -> ConditionResult:
        for r in self.results:
            if r.condition == condition:
                return r
        raise KeyError(condition)


# Families and decompositions

class FamilyReport(Document):
    family: str
    members: list[int]
    is_subgroup: bool
    order: int


class DecompositionCheck(BaseModel):
    name: str
    passed: bool
    detail: Optional[str] = None
    witness: Optional[dict[str, Any]] = None


class DecompositionReport(Document):
    claim: str
    factors: list[str]
    checks: list[DecompositionCheck]
    orders: dict[str, int] = Field(default_factory=dict)
    verdict: bool

    def check(self, name: str) -> DecompositionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


# Predictions

class PredictedAut(Document):
    theorem: str
    order: Optional[int] = None
    chain: dict[str, int] = Field(default_factory=dict)
    chain_kind: Optional[str] = None
    notes: list[str] = Field(default_factory=list)


class M3Prediction(Document):
    branch: str
    order: int
    factors: dict[str, int] = Field(default_factory=dict)
    middle_stratum: bool = False
    notes: list[str] = Field(default_factory=list)


# Verification and enumeration reports

class ClaimResult(BaseModel):
    claim: str
    verdict: bool
    details: dict[str, Any] = Field(default_factory=dict)
    witness: Optional[dict[str, Any]] = None


class PointReport(BaseModel):
    params: dict[str, Any]
    group_order: Optional[int] = None
    claims: list[ClaimResult]

    @property
    def verdict(self) -> bool:
        return all(c.verdict for c in self.claims)


class VerifyReport(Document):
    points: list[PointReport]
    verdict: bool


class AutReport(Document):
    group_order: int
    aut_order: int
    spectrum: dict[int, int]
    matrices: Optional[list[dict[str, list[int]]]] = None


class L2SweepRow(BaseModel):
    m: int
    s: int
    t: int
    tag: str
    theorem: Optional[str] = None
    predicted_order: Optional[int] = None
    brute_force_order: Optional[int] = None
    match: Optional[bool] = None


class M3SweepRow(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    p: int
    m: int
    r: int
    lam: int = Field(alias="lambda")
    t: int
    tag: str
    branch: Optional[str] = None
    predicted_order: Optional[int] = None
    brute_force_order: Optional[int] = None
    match: Optional[bool] = None
    middle_stratum: bool = False


class SweepReport(Document):
    family: str
    rows: list[dict[str, Any]]

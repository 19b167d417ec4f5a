"""Run named claims against one product group and collect verdicts."""

import logging
from functools import cached_property
from typing import Optional, Union

from .aut_engine import (
    MatrixGroup,
    check_A_conditions,
    check_kernel_lemma,
    check_proposition,
    compose_matrices,
    matrix_to_aut,
)
from .errors import FamilyInapplicableError, UnknownFamilyError
from .families import compute_families, verify_ABCD, verify_semidirect_chain
from .family_l2 import L2Params, l2_lemma_suite, predicted_aut_l2
from .family_m3 import M3Params, m3_lemma_suite, predicted_aut_m3
from .matched_pair import MatchedPair, ZSGroup, validate_matched_pair
from .schemas import ClaimResult, PointReport

logger = logging.getLogger(__name__)

CLAIMS = ("matched-pair", "correspondence", "abcd", "chain", "order", "lemmas")
FAMILY_CLAIMS = ("chain", "order", "lemmas")

Params = Union[L2Params, M3Params]


class PointContext:
    """One group under test with its enumerated 𝒜 computed on first use."""

    def __init__(self, zs: ZSGroup, params: Optional[Params] = None, cap: Optional[int] = None, workers: int = 1):
        self.zs = zs
        self.params = params
        self.cap = cap
        self.workers = workers

    @cached_property
    def group(self) -> MatrixGroup:
        return MatrixGroup.enumerate(self.zs, cap=self.cap, workers=self.workers)

    @cached_property
    def families(self):
        return compute_families(self.group)

    @cached_property
    def prediction(self):
        if isinstance(self.params, L2Params):
            return predicted_aut_l2(self.params)
        if isinstance(self.params, M3Params):
            return predicted_aut_m3(self.params, self.zs.mp)
        raise FamilyInapplicableError("claim needs family parameters")


def _first_failed(checks) -> Optional[dict]:
    for c in checks:
        if not c.passed:
            return {"check": getattr(c, "name", None) or getattr(c, "condition", None), **(c.witness or {})}
    return None


def matched_pair_claim(mp: MatchedPair) -> ClaimResult:
    """C1..C6 as a claim, with the first failing condition as witness."""
    report = validate_matched_pair(mp)
    return ClaimResult(
        claim="matched-pair",
        verdict=report.passed,
        details={r.condition: r.passed for r in report.results},
        witness=_first_failed(report.results),
    )


def claim_matched_pair(ctx: PointContext) -> ClaimResult:
    return matched_pair_claim(ctx.zs.mp)


def claim_correspondence(ctx: PointContext) -> ClaimResult:
    """T is a bijection onto 𝒜, its images meet A1..A7, the unit values and
    the kernel statements, and composition matches the matrix product."""
    group = ctx.group
    mp = group.mp
    details = {"aut_order": len(group)}
    witness = None

    keys = {M.key() for M in group.matrices}
    details["injective"] = len(keys) == len(group)

    for name, run in (
        ("A-conditions", lambda M: check_A_conditions(M, mp)),
        ("unit-values", check_proposition),
        ("kernel-lemma", check_kernel_lemma),
    ):
        ok = True
        for idx, M in enumerate(group.matrices):
            report = run(M)
            if not report.passed:
                ok = False
                witness = witness or {"check": name, "matrix": idx, **(_first_failed(report.results) or {})}
                break
        details[name] = ok

    round_trip = True
    for idx, (M, theta) in enumerate(zip(group.matrices, group.auts)):
        back = matrix_to_aut(M, ctx.zs, check=False)
        if back.key() != theta.key():
            round_trip = False
            witness = witness or {"check": "round-trip", "matrix": idx}
            break
    details["round-trip"] = round_trip

    homomorphic = True
    table = group.table
    for i, Mi in enumerate(group.matrices):
        for j, Mj in enumerate(group.matrices):
            k = table[i, j]
            if k < 0 or compose_matrices(Mi, Mj, mp, check=False).key() != group.matrices[k].key():
                homomorphic = False
                witness = witness or {"check": "homomorphy", "left": i, "right": j}
                break
        if not homomorphic:
            break
    details["homomorphy"] = homomorphic

    verdict = all(v for k, v in details.items() if isinstance(v, bool))
    return ClaimResult(claim="correspondence", verdict=verdict, details=details, witness=witness)


def claim_abcd(ctx: PointContext) -> ClaimResult:
    report = verify_ABCD(ctx.group, ctx.families)
    return ClaimResult(
        claim="abcd",
        verdict=report.verdict,
        details={"orders": report.orders, "checks": {c.name: c.passed for c in report.checks}},
        witness=_first_failed(report.checks),
    )


def _chain_kinds(ctx: PointContext) -> tuple[list[str], dict[str, int]]:
    if isinstance(ctx.params, L2Params):
        pred = ctx.prediction
        if pred.chain_kind is None:
            return [], {}
        return [pred.chain_kind], dict(pred.chain)
    if isinstance(ctx.params, M3Params):
        return ["EB", "AD"], dict(ctx.prediction.factors)
    raise FamilyInapplicableError("claim needs family parameters")


def claim_chain(ctx: PointContext) -> ClaimResult:
    """Internal semidirect chain plus the predicted factor orders."""
    kinds, expected = _chain_kinds(ctx)
    if not kinds:
        return ClaimResult(
            claim="chain",
            verdict=False,
            details={"theorem": ctx.prediction.theorem},
            witness={"check": "no chain predicted"},
        )
    details: dict = {}
    witness = None
    verdict = True
    for kind in kinds:
        report = verify_semidirect_chain(ctx.group, kind, ctx.families)
        details[kind] = {c.name: c.passed for c in report.checks}
        verdict = verdict and report.verdict
        witness = witness or (None if report.verdict else {"chain": kind, **(_first_failed(report.checks) or {})})

    actual = {fid: ctx.families[fid].order for fid in expected if fid in ctx.families}
    details["factor_orders"] = {"expected": expected, "actual": actual}
    if actual != expected:
        verdict = False
        witness = witness or {"check": "factor-orders"}
    return ClaimResult(claim="chain", verdict=verdict, details=details, witness=witness)


def claim_order(ctx: PointContext) -> ClaimResult:
    pred = ctx.prediction
    actual = len(ctx.group)
    details = {"predicted": pred.order, "brute_force": actual}
    if hasattr(pred, "theorem"):
        details["theorem"] = pred.theorem
    else:
        details["branch"] = pred.branch
        details["middle_stratum"] = pred.middle_stratum
    verdict = pred.order is not None and pred.order == actual
    return ClaimResult(
        claim="order",
        verdict=verdict,
        details=details,
        witness=None if verdict else {"predicted": pred.order, "brute_force": actual},
    )


def claim_lemmas(ctx: PointContext) -> ClaimResult:
    if isinstance(ctx.params, L2Params):
        report = l2_lemma_suite(ctx.group, ctx.params)
    elif isinstance(ctx.params, M3Params):
        report = m3_lemma_suite(ctx.group, ctx.params)
    else:
        raise FamilyInapplicableError("claim needs family parameters")
    return ClaimResult(
        claim="lemmas",
        verdict=report.passed,
        details={r.condition: r.passed for r in report.results},
        witness=_first_failed(report.results),
    )


_RUNNERS = {
    "matched-pair": claim_matched_pair,
    "correspondence": claim_correspondence,
    "abcd": claim_abcd,
    "chain": claim_chain,
    "order": claim_order,
    "lemmas": claim_lemmas,
}


def applicable_claims(params: Optional[Params]) -> list[str]:
    return list(CLAIMS) if params is not None else [c for c in CLAIMS if c not in FAMILY_CLAIMS]


def verify_point(
    zs: ZSGroup,
    claims: list[str],
    params: Optional[Params] = None,
    cap: Optional[int] = None,
    workers: int = 1,
) -> PointReport:
    """Evaluate ``claims`` in order on one group.

    Raises:
        UnknownFamilyError: an unknown claim name.
        FamilyInapplicableError: a family claim without family parameters, or
            on a semidirect point.
        ScaleError: |G| exceeds the brute-force cap.
    """
    for name in claims:
        if name not in _RUNNERS:
            raise UnknownFamilyError(f"unknown claim {name!r}")
    ctx = PointContext(zs, params=params, cap=cap, workers=workers)
    results = []
    for name in claims:
        result = _RUNNERS[name](ctx)
        logger.info("claim %s: %s", name, "pass" if result.verdict else "FAIL")
        results.append(result)
    point = params.as_dict() if params is not None else {}
    return PointReport(params=point, group_order=zs.n, claims=results)

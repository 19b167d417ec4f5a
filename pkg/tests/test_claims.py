"""Tests for claim evaluation on single groups."""

import pytest

from zappa.claims import CLAIMS, PointContext, applicable_claims, claim_chain, verify_point
from zappa.errors import FamilyInapplicableError, ScaleError, UnknownFamilyError
from zappa.family_l2 import L2Params, build_l2, enumerate_l2_params
from zappa.family_m3 import M3Params, build_m3
from zappa.matched_pair import build_zappa
from zappa.schemas import PredictedAut


class TestApplicableClaims:
    """Test claim selection."""

    def test_without_params(self):
        assert applicable_claims(None) == ["matched-pair", "correspondence", "abcd"]

    def test_with_params(self):
        assert applicable_claims(L2Params(8, 3, 1)) == list(CLAIMS)


class TestVerifyPoint:
    """Test running claims against one group."""

    def test_direct_product(self, z4_x_z2):
        report = verify_point(z4_x_z2, applicable_claims(None))
        assert report.verdict
        assert report.group_order == 8
        assert report.params == {}
        assert [c.claim for c in report.claims] == ["matched-pair", "correspondence", "abcd"]

    def test_l2_831(self, l2_831):
        p = L2Params(8, 3, 1)
        report = verify_point(l2_831, ["matched-pair", "correspondence", "abcd", "order", "lemmas"], params=p)
        assert report.verdict, [c.claim for c in report.claims if not c.verdict]
        order = next(c for c in report.claims if c.claim == "order")
        assert order.details["predicted"] == order.details["brute_force"] == 64
        correspondence = next(c for c in report.claims if c.claim == "correspondence")
        assert correspondence.details["aut_order"] == 64
        assert correspondence.details["homomorphy"] is True

    def test_abcd_failure_is_reported(self):
        p = L2Params(8, 1, 1)
        zs = build_zappa(build_l2(p))
        report = verify_point(zs, ["abcd"], params=p)
        assert not report.verdict
        abcd = report.claims[0]
        assert abcd.details["checks"]["product-covers"] is False
        assert abcd.witness["check"] in ("hypothesis-1-beta-gamma-in-P", "product-covers")

    def test_fc_chain_fails_inner_link(self):
        p = L2Params(8, 1, 2)
        report = verify_point(build_zappa(build_l2(p)), ["chain"], params=p)
        chain = report.claims[0]
        assert not chain.verdict
        assert chain.details["FC"]["FC=Aut"] is True

    def test_unknown_claim(self, z4_x_z2):
        with pytest.raises(UnknownFamilyError):
            verify_point(z4_x_z2, ["associativity"])

    def test_family_claim_needs_params(self, z4_x_z2):
        with pytest.raises(FamilyInapplicableError):
            verify_point(z4_x_z2, ["order"])

    def test_cap(self, l2_831):
        with pytest.raises(ScaleError):
            verify_point(l2_831, ["correspondence"], cap=16)

    def test_matched_pair_claim_skips_enumeration(self, l2_831):
        report = verify_point(l2_831, ["matched-pair"], cap=1)
        assert report.verdict
        assert set(report.claims[0].details) == {"C1", "C2", "C3", "C4", "C5", "C6"}


class TestChainClaim:
    """Test the chain claim when no chain is predicted."""

    def test_unclassified_prediction(self, z4_x_z2):
        ctx = PointContext(z4_x_z2, params=L2Params(8, 1, 1))
        ctx.__dict__["prediction"] = PredictedAut(theorem="unclassified")
        result = claim_chain(ctx)
        assert not result.verdict
        assert result.witness == {"check": "no chain predicted"}
        assert result.details == {"theorem": "unclassified"}


GENUINE_L2_UP_TO_16 = [p for m in range(2, 17, 2) for p in enumerate_l2_params(m) if not p.semidirect]


@pytest.mark.slow
class TestCorrespondenceBattery:
    """Test the matrix correspondence across the small family points."""

    @pytest.mark.parametrize("p", GENUINE_L2_UP_TO_16, ids=lambda p: f"{p.m}-{p.s}-{p.t}")
    def test_l2(self, p):
        report = verify_point(build_zappa(build_l2(p)), ["correspondence"], params=p)
        result = report.claims[0]
        assert result.verdict, result.witness
        assert result.details["homomorphy"] is True

    @pytest.mark.parametrize("r, lam", [(1, 1), (2, 2)])
    def test_m3_order_81(self, r, lam):
        q = M3Params(3, 9, r, lam)
        report = verify_point(build_zappa(build_m3(q)), ["correspondence"], params=q)
        result = report.claims[0]
        assert result.verdict, result.witness
        assert result.details["aut_order"] == 486

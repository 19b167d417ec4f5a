"""Tests for subgroup families and decompositions of the matrix group."""

import pytest

from zappa.aut_engine import identity_matrix
from zappa.errors import UnknownFamilyError
from zappa.families import (
    MAP_FAMILIES,
    MATRIX_FAMILIES,
    check_conjugation_stability,
    compute_families,
    compute_family,
    in_P,
    in_Q,
    in_S,
    one_minus_beta_gamma,
    reduced_characterization,
    verify_ABCD,
    verify_semidirect_chain,
)


class TestPredicates:
    """Test the map predicates on identity components."""

    def test_identity_components(self, l2_831):
        mp = l2_831.mp
        ident = identity_matrix(mp)
        assert in_P(ident.alpha.tbl, mp)
        assert in_S(ident.delta.tbl, mp)
        assert in_Q(ident.beta.tbl, mp)

    def test_one_minus_beta_gamma_of_identity(self, l2_831):
        ident = identity_matrix(l2_831.mp)
        assert one_minus_beta_gamma(ident).is_identity()


class TestComputeFamily:
    """Test filtering the enumerated matrices into families."""

    def test_unknown_family(self, z4_x_z2_aut):
        with pytest.raises(UnknownFamilyError):
            compute_family("W", z4_x_z2_aut)

    def test_direct_product_orders(self, z4_x_z2_aut):
        fam = compute_families(z4_x_z2_aut)
        assert {fid: fam[fid].order for fid in "ABCD"} == {"A": 2, "B": 2, "C": 2, "D": 1}
        assert all(fam[fid].is_subgroup for fid in MATRIX_FAMILIES)

    def test_every_family_contains_identity(self, l2_831_aut):
        for fid in MATRIX_FAMILIES:
            assert 0 in compute_family(fid, l2_831_aut).members

    def test_map_families(self, z4_x_z2_aut):
        for fid in MAP_FAMILIES:
            report = compute_family(fid, z4_x_z2_aut)
            assert report.family == fid
            assert report.order >= 1

    def test_l2_811_orders(self, l2_811_aut):
        fam = compute_families(l2_811_aut, ("A", "B", "C", "D"))
        assert {fid: r.order for fid, r in fam.items()} == {"A": 1, "B": 1, "C": 2, "D": 2}


class TestABCD:
    """Test the four-factor decomposition."""

    def test_direct_product(self, z4_x_z2_aut):
        report = verify_ABCD(z4_x_z2_aut)
        assert report.verdict
        assert report.orders["ABCD"] == report.orders["Aut"] == 8

    def test_z4_x_z8(self, z4_x_z8_aut):
        report = verify_ABCD(z4_x_z8_aut)
        assert report.verdict
        assert report.orders["Aut"] == 128

    def test_l2_831(self, l2_831_aut):
        report = verify_ABCD(l2_831_aut)
        assert report.verdict
        assert report.orders["Aut"] == 64

    def test_l2_811_falls_short(self, l2_811_aut):
        report = verify_ABCD(l2_811_aut)
        assert not report.verdict
        assert not report.check("product-covers").passed
        assert report.orders["ABCD"] < report.orders["Aut"] == 32
        assert report.check("product-covers").witness["missing"]

    def test_missing_family(self, z4_x_z2_aut):
        fam = compute_families(z4_x_z2_aut, ("A", "B", "C"))
        with pytest.raises(UnknownFamilyError):
            verify_ABCD(z4_x_z2_aut, fam)


class TestSemidirectChains:
    """Test the internal semidirect decompositions."""

    def test_eb_chain(self, l2_871_aut):
        report = verify_semidirect_chain(l2_871_aut, "EB")
        assert report.verdict
        assert report.orders["B"] == 2
        assert report.orders["E"] * report.orders["B"] == report.orders["Aut"] == 64
        assert report.check("C<|E").passed
        assert report.factors == ["C", "M", "B"]

    def test_fc_outer_link(self, l2_812_aut):
        report = verify_semidirect_chain(l2_812_aut, "FC")
        for name in ("F<|Aut", "F&C=1", "FC=Aut"):
            assert report.check(name).passed
        assert report.orders["Aut"] == 64

    def test_ad_on_direct_product(self, z4_x_z2_aut):
        report = verify_semidirect_chain(z4_x_z2_aut, "AD")
        assert report.verdict
        assert report.factors == ["A", "D"]

    def test_unknown_chain(self, z4_x_z2_aut):
        with pytest.raises(UnknownFamilyError):
            verify_semidirect_chain(z4_x_z2_aut, "XY")

    def test_trivial_subgroup_is_normal(self, l2_831_aut):
        everything = list(range(len(l2_831_aut)))
        assert check_conjugation_stability(l2_831_aut, everything, [0]).passed
        assert check_conjugation_stability(l2_831_aut, everything, everything).passed


class TestReducedCharacterization:
    """Test Q and R against their reduced forms."""

    def test_abelian_direct_product(self, z4_x_z2_aut):
        report = reduced_characterization(z4_x_z2_aut)
        assert report.passed
        assert [r.condition for r in report.results] == ["Q=Hom(K,Stab_H(K))", "R=CrossHom(H,Stab_K(H))"]

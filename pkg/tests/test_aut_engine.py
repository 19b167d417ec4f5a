"""Tests for automorphism enumeration and the matrix correspondence."""

import numpy as np
import pytest

from zappa.aut_engine import (
    MatrixGroup,
    aut_order_spectrum,
    aut_to_matrix,
    brute_force_aut,
    check_A_conditions,
    check_kernel_lemma,
    check_proposition,
    compose_matrices,
    identity_matrix,
    matrix_from_tables,
    matrix_to_aut,
)
from zappa.errors import NotInAError, NotTwoGeneratedError, ScaleError
from zappa.group_core import cyclic_group, direct_product
from zappa.matched_pair import MatchedPair, build_zappa


class TestBruteForce:
    """Test the generator-image enumeration."""

    def test_z4_x_z2(self, z4_x_z2):
        auts = brute_force_aut(z4_x_z2)
        assert len(auts) == 8
        assert np.array_equal(auts[0].perm, np.arange(8))

    def test_spectrum_is_dihedral(self, z4_x_z2):
        assert aut_order_spectrum(brute_force_aut(z4_x_z2)) == {1: 1, 2: 5, 4: 2}

    def test_threads_agree(self, l2_831):
        serial = brute_force_aut(l2_831)
        threaded = brute_force_aut(l2_831, workers=3)
        assert [a.key() for a in serial] == [a.key() for a in threaded]

    def test_scale_error(self, l2_831):
        with pytest.raises(ScaleError) as exc:
            brute_force_aut(l2_831, cap=16)
        assert exc.value.witness == {"order": 32, "cap": 16}

    def test_not_two_generated(self):
        klein = direct_product(cyclic_group(2), cyclic_group(2))
        trivial = cyclic_group(1)
        mp = MatchedPair.from_tables(klein, trivial, [[0, 1, 2, 3]], [[0, 0, 0, 0]])
        with pytest.raises(NotTwoGeneratedError):
            brute_force_aut(build_zappa(mp))

    def test_l2_orders(self, l2_831_aut, l2_811_aut):
        assert len(l2_831_aut) == 64
        assert len(l2_811_aut) == 32


class TestCorrespondence:
    """Test T: Aut(G) → 𝒜 and its inverse."""

    def test_identity_first(self, l2_831_aut):
        assert l2_831_aut.matrices[0].same_as(identity_matrix(l2_831_aut.mp))

    def test_every_matrix_meets_conditions(self, l2_831_aut):
        for M in l2_831_aut.matrices:
            assert check_A_conditions(M, l2_831_aut.mp).passed
            assert check_proposition(M).passed
            assert check_kernel_lemma(M).passed

    def test_round_trip(self, l2_831_aut):
        zs = l2_831_aut.zs
        for theta, M in zip(l2_831_aut.auts, l2_831_aut.matrices):
            assert matrix_to_aut(M, zs).key() == theta.key()
            assert aut_to_matrix(matrix_to_aut(M, zs), zs).same_as(M)

    def test_distinct_matrices(self, l2_871_aut):
        assert len({M.key() for M in l2_871_aut.matrices}) == len(l2_871_aut)

    def test_composition_is_homomorphic(self, l2_831_aut):
        group = l2_831_aut
        mp = group.mp
        for i in range(0, len(group), 5):
            for j in range(0, len(group), 7):
                k = group.product(i, j)
                assert k is not None
                assert compose_matrices(group.matrices[i], group.matrices[j], mp).same_as(group.matrices[k])

    def test_inverse(self, l2_831_aut):
        for i in range(len(l2_831_aut)):
            assert l2_831_aut.product(i, l2_831_aut.inverse(i)) == 0

    def test_table_has_no_holes(self, z4_x_z2_aut):
        assert (z4_x_z2_aut.table >= 0).all()
        assert (z4_x_z2_aut.table[0] == np.arange(8)).all()

    def test_non_bijective_matrix_rejected(self, l2_831):
        mp = l2_831.mp
        M = matrix_from_tables(mp, [0, 0, 0, 0], [0] * 8, [0, 0, 0, 0], list(range(8)))
        assert not check_A_conditions(M, mp).result("A7").passed
        with pytest.raises(NotInAError):
            matrix_to_aut(M, l2_831)

    def test_compose_checks_operands(self, l2_831):
        mp = l2_831.mp
        bad = matrix_from_tables(mp, [0, 0, 0, 0], [0] * 8, [0, 0, 0, 0], list(range(8)))
        with pytest.raises(NotInAError) as exc:
            compose_matrices(bad, identity_matrix(mp), mp)
        assert exc.value.witness["operand"] == "left"

    def test_matrix_dict(self, z4_x_z2_aut):
        d = z4_x_z2_aut.matrices[0].to_dict()
        assert d == {"alpha": [0, 1, 2, 3], "beta": [0, 0], "gamma": [0, 0, 0, 0], "delta": [0, 1]}


class TestMatrixGroup:
    """Test the indexed matrix group."""

    def test_enumerate_with_cap(self, z4_x_z2):
        assert len(MatrixGroup.enumerate(z4_x_z2, cap=8)) == 8
        with pytest.raises(ScaleError):
            MatrixGroup.enumerate(z4_x_z2, cap=4)

    def test_index_of_unknown_perm(self, z4_x_z2_aut):
        assert z4_x_z2_aut.index_of_perm(np.array([1, 0, 2, 3, 4, 5, 6, 7])) is None

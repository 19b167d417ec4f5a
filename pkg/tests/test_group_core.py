"""Tests for group tables and subgroup helpers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zappa.errors import InvalidOrderError, NotAGroupError
from zappa.group_core import (
    GroupTable,
    Subset,
    check_associativity,
    cyclic_group,
    direct_product,
    element_orders,
    generated_subgroup,
    group_from_document,
    is_subgroup,
    order_of,
    order_spectrum,
    subgroup_table,
    unit_group,
)

# smallest loop that is not a group: identity and inverses, but (1·1)·2 ≠ 1·(1·2)
LOOP_5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class TestCyclicGroup:
    """Test the cyclic group builder."""

    def test_inverses_and_identity(self):
        g = cyclic_group(5)
        assert g.n == 5
        assert g.identity == 0
        assert g.inv.tolist() == [0, 4, 3, 2, 1]
        assert g.labels is None

    def test_labels(self):
        g = cyclic_group(4, "b")
        assert g.labels == ("1", "b", "b^2", "b^3")
        assert g.label(2) == "b^2"

    def test_invalid_order(self):
        with pytest.raises(InvalidOrderError):
            cyclic_group(0)

    def test_tables_are_read_only(self):
        g = cyclic_group(3)
        with pytest.raises(ValueError):
            g.mul[0, 0] = 1

    def test_power(self):
        g = cyclic_group(7)
        assert g.power(3, 2) == 6
        assert g.power(3, -1) == 4


class TestFromMul:
    """Test building groups from raw tables."""

    def test_no_identity(self):
        with pytest.raises(NotAGroupError):
            GroupTable.from_mul([[0, 0], [0, 0]])

    def test_not_square(self):
        with pytest.raises(InvalidOrderError):
            GroupTable.from_mul([[0, 1, 2], [1, 2, 0]])

    def test_out_of_range(self):
        with pytest.raises(NotAGroupError):
            GroupTable.from_mul([[0, 1], [1, 2]])

    def test_loop_passes_without_associativity_check(self):
        g = GroupTable.from_mul(LOOP_5)
        assert g.identity == 0
        assert not check_associativity(g)

    def test_loop_rejected_with_associativity_check(self):
        with pytest.raises(NotAGroupError) as exc:
            GroupTable.from_mul(LOOP_5, check_associativity=True)
        assert set(exc.value.witness) == {"x", "y", "z"}

    def test_document_round_trip(self):
        g = cyclic_group(6, "a")
        back = group_from_document(g.to_document())
        assert np.array_equal(back.mul, g.mul)
        assert back.labels == g.labels


class TestOrders:
    """Test element orders and spectra."""

    def test_element_orders_z6(self):
        assert element_orders(cyclic_group(6)).tolist() == [1, 6, 3, 2, 3, 6]
        assert order_of(cyclic_group(6), 4) == 3

    def test_direct_product_spectrum(self):
        g = direct_product(cyclic_group(2), cyclic_group(3))
        assert g.n == 6
        assert g.is_abelian()
        assert order_spectrum(g) == {1: 1, 2: 1, 3: 2, 6: 2}

    def test_klein_spectrum(self):
        g = direct_product(cyclic_group(2), cyclic_group(2))
        assert order_spectrum(g) == {1: 1, 2: 3}


class TestSubgroups:
    """Test subgroup predicates and restriction."""

    def test_is_subgroup(self):
        g = cyclic_group(6)
        assert is_subgroup(g, Subset.of(g, [0, 2, 4]))
        assert not is_subgroup(g, Subset.of(g, [0, 1]))
        assert not is_subgroup(g, Subset.of(g, [2, 4]))

    def test_generated_subgroup(self):
        g = cyclic_group(12)
        assert generated_subgroup(g, [8]).members == (0, 4, 8)
        assert len(generated_subgroup(g, [4, 6])) == 6

    def test_subgroup_table(self):
        g = cyclic_group(6)
        sub, emb = subgroup_table(g, Subset.of(g, [0, 2, 4]))
        assert sub.n == 3
        assert emb.tolist() == [0, 2, 4]
        assert element_orders(sub).tolist() == [1, 3, 3]

    def test_subgroup_table_rejects_non_subgroup(self):
        g = cyclic_group(6)
        with pytest.raises(NotAGroupError):
            subgroup_table(g, Subset.of(g, [0, 1]))

    def test_unsorted_subset(self):
        with pytest.raises(ValueError):
            Subset(cyclic_group(4), (2, 0))


class TestUnitGroup:
    """Test units modulo m."""

    def test_units_mod_8(self):
        assert unit_group(8) == ([1, 3, 5, 7], 4)

    def test_degenerate_modulus(self):
        assert unit_group(1) == ([0], 1)

    def test_invalid_modulus(self):
        with pytest.raises(InvalidOrderError):
            unit_group(0)


class TestGroupProperties:
    """Property tests over small cyclic and direct products."""

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=1, max_value=12), st.integers(min_value=1, max_value=6))
    def test_direct_products_are_groups(self, a, b):
        g = direct_product(cyclic_group(a), cyclic_group(b))
        assert g.n == a * b
        assert check_associativity(g)
        assert (g.mul[np.arange(g.n), g.inv] == g.identity).all()

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=1, max_value=40))
    def test_lagrange(self, n):
        orders = element_orders(cyclic_group(n))
        assert all(n % int(o) == 0 for o in orders)
        assert sum(order_spectrum(cyclic_group(n)).values()) == n

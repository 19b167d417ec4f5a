"""Finite groups as dense multiplication tables.

Elements are the indices ``0..n-1``. Every table is a read-only ``numpy``
array, so a :class:`GroupTable` can be shared freely between threads.
"""

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import totient

from .errors import InvalidOrderError, NotAGroupError
from .schemas import GroupDocument

logger = logging.getLogger(__name__)


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group given by its multiplication table.

    Attributes:
        mul: n×n table, ``mul[x, y]`` is the index of ``x·y``.
        identity: index of the identity element.
        inv: length-n table of inverse indices.
        labels: optional element names, used only for display.
    """

    mul: np.ndarray
    identity: int
    inv: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    @property
    def n(self) -> int:
        return int(self.mul.shape[0])

    @classmethod
    def from_mul(
        cls,
        mul,
        labels: Optional[Sequence[str]] = None,
        check_associativity: bool = False,
    ) -> "GroupTable":
        """Build a table from a raw multiplication table.

        Identity and inverses are derived. The associativity check is opt-in
        because the builders in this package are associative by construction.

        Raises:
            InvalidOrderError: table is empty or not square.
            NotAGroupError: entries out of range, no identity, missing
                inverses, or (when requested) a non-associative triple.
        """
        table = np.asarray(mul, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InvalidOrderError(f"multiplication table must be a non-empty square, got shape {table.shape}")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise NotAGroupError("multiplication table has entries outside 0..n-1")

        ar = np.arange(n)
        candidates = np.flatnonzero((table == ar[None, :]).all(axis=1) & (table == ar[:, None]).all(axis=0))
        if candidates.size == 0:
            raise NotAGroupError("multiplication table has no two-sided identity")
        e = int(candidates[0])

        hits = table == e
        if not hits.any(axis=1).all():
            x = int(np.flatnonzero(~hits.any(axis=1))[0])
            raise NotAGroupError(f"element {x} has no inverse", witness={"x": x})
        inv = hits.argmax(axis=1)
        if not (table[inv, ar] == e).all():
            x = int(np.flatnonzero(table[inv, ar] != e)[0])
            raise NotAGroupError(f"element {x} has no two-sided inverse", witness={"x": x})

        if labels is not None and len(labels) != n:
            raise InvalidOrderError(f"expected {n} labels, got {len(labels)}")

        g = cls(
            mul=_frozen(table),
            identity=e,
            inv=_frozen(inv),
            labels=tuple(labels) if labels is not None else None,
        )
        if check_associativity:
            witness = g.associativity_witness()
            if witness is not None:
                raise NotAGroupError("multiplication table is not associative", witness=witness)
        return g

    def associativity_witness(self) -> Optional[dict]:
        """First triple (x, y, z) with (xy)z ≠ x(yz), or None. O(n³)."""
        for x in range(self.n):
            left = self.mul[self.mul[x, :], :]
            right = self.mul[x, self.mul]
            bad = np.argwhere(left != right)
            if bad.size:
                y, z = (int(v) for v in bad[0])
                return {"x": x, "y": y, "z": z}
        return None

    def power(self, x: int, k: int) -> int:
        result = self.identity
        base = x if k >= 0 else int(self.inv[x])
        for _ in range(abs(k)):
            result = int(self.mul[result, base])
        return result

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    @cached_property
    def signature(self) -> str:
        """Content hash of the multiplication table, used as a cache key."""
        return hashlib.sha1(self.mul.tobytes()).hexdigest()

    def to_document(self) -> GroupDocument:
        return GroupDocument(
            n=self.n,
            mul=self.mul.tolist(),
            labels=list(self.labels) if self.labels else None,
        )


def group_from_document(doc: GroupDocument, check_associativity: bool = True) -> GroupTable:
    if doc.n != len(doc.mul):
        raise InvalidOrderError(f"declared n={doc.n} but table has {len(doc.mul)} rows")
    return GroupTable.from_mul(doc.mul, labels=doc.labels, check_associativity=check_associativity)


@dataclass(frozen=True, eq=False)
class Subset:
    """A sorted set of element indices of a parent group."""

    parent: GroupTable
    members: tuple[int, ...]

    def __post_init__(self):
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("subset members must be sorted and distinct")
        if self.members and (self.members[0] < 0 or self.members[-1] >= self.parent.n):
            raise ValueError("subset member out of range")

    @classmethod
    def of(cls, parent: GroupTable, members: Iterable[int]) -> "Subset":
        return cls(parent, tuple(sorted({int(x) for x in members})))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return int(x) in set(self.members)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)


def cyclic_group(n: int, symbol: Optional[str] = None) -> GroupTable:
    """Z_n with element i the residue i.

    Args:
        n: group order, at least 1.
        symbol: optional generator name; labels become ``"1", "b", "b^2", ...``.

    Raises:
        InvalidOrderError: n < 1.
    """
    if int(n) != n or n < 1:
        raise InvalidOrderError(f"cyclic group order must be a positive integer, got {n}")
    n = int(n)
    ar = np.arange(n)
    mul = np.add.outer(ar, ar) % n
    labels = None
    if symbol:
        labels = ["1"] + [symbol if i == 1 else f"{symbol}^{i}" for i in range(1, n)]
    inv = (-ar) % n
    return GroupTable(mul=_frozen(mul), identity=0, inv=_frozen(inv), labels=tuple(labels) if labels else None)


def direct_product(g1: GroupTable, g2: GroupTable) -> GroupTable:
    """G1 × G2 with index i1·|G2| + i2."""
    n1, n2 = g1.n, g2.n
    mul = g1.mul[:, None, :, None] * n2 + g2.mul[None, :, None, :]
    mul = mul.reshape(n1 * n2, n1 * n2)
    inv = (g1.inv[:, None] * n2 + g2.inv[None, :]).reshape(-1)
    labels = None
    if g1.labels or g2.labels:
        labels = tuple(f"({g1.label(i)},{g2.label(j)})" for i in range(n1) for j in range(n2))
    return GroupTable(
        mul=_frozen(mul),
        identity=g1.identity * n2 + g2.identity,
        inv=_frozen(inv),
        labels=labels,
    )


def order_of(g: GroupTable, x: int) -> int:
    """Least k ≥ 1 with x^k = 1."""
    k, y = 1, int(x)
    while y != g.identity:
        y = int(g.mul[y, x])
        k += 1
    return k


def element_orders(g: GroupTable) -> np.ndarray:
    """Orders of all elements at once."""
    ar = np.arange(g.n)
    orders = np.zeros(g.n, dtype=np.int64)
    cur = ar.copy()
    for k in range(1, g.n + 1):
        done = (cur == g.identity) & (orders == 0)
        orders[done] = k
        if (orders > 0).all():
            break
        cur = g.mul[cur, ar]
    return orders


def order_spectrum(g: GroupTable) -> dict[int, int]:
    """Histogram {element order: count}, sorted by order."""
    counts = Counter(int(o) for o in element_orders(g))
    return dict(sorted(counts.items()))


def check_associativity(g: GroupTable) -> bool:
    return g.associativity_witness() is None


def is_subgroup(g: GroupTable, s: Subset) -> bool:
    """True iff s contains 1 and is closed under products and inverses."""
    if s.parent is not g:
        raise ValueError("subset belongs to a different group")
    if g.identity not in s:
        return False
    sub = s.as_array()
    products = g.mul[np.ix_(sub, sub)]
    return bool(np.isin(products, sub).all() and np.isin(g.inv[sub], sub).all())


def generated_subgroup(g: GroupTable, gens: Iterable[int]) -> Subset:
    """Subgroup generated by ``gens`` (closure under right multiplication)."""
    gens = [int(x) for x in gens]
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for y in gens:
                z = int(g.mul[x, y])
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return Subset.of(g, seen)


def subgroup_table(g: GroupTable, s: Subset) -> tuple[GroupTable, np.ndarray]:
    """Restrict ``g`` to a subgroup and relabel it densely.

    Returns:
        (table, embedding): the subgroup's own GroupTable and the array mapping
        its indices back into ``g``.
    """
    if not is_subgroup(g, s):
        raise NotAGroupError("subset is not a subgroup")
    emb = s.as_array()
    pos = np.full(g.n, -1, dtype=np.int64)
    pos[emb] = np.arange(len(emb))
    mul = pos[g.mul[np.ix_(emb, emb)]]
    labels = [g.label(int(x)) for x in emb] if g.labels else None
    return GroupTable.from_mul(mul, labels=labels), _frozen(emb)


def unit_group(m: int) -> tuple[list[int], int]:
    """Units modulo m and Euler's φ(m).

    For the degenerate modulus m = 1 the single residue class is 0, so the
    result is ``([0], 1)``.
    """
    if m < 1:
        raise InvalidOrderError(f"modulus must be positive, got {m}")
    phi = int(totient(m))
    if m == 1:
        return [0], phi
    units = [u for u in range(1, m) if gcd(u, m) == 1]
    return units, phi

"""Pointwise algebra on arbitrary maps between group element sets.

Maps are not assumed to be homomorphisms. For maps into a group,

    (φ + ψ)(u) = φ(u)ψ(u)
    (φ · ψ)(u) = φ(u)·ψ(u)     (σ of a K-valued and an H-valued map)
    φ^ψ(u)     = φ(u)^{ψ(u)}   (θ of a K-valued and an H-valued map)
"""

from dataclasses import dataclass

import numpy as np

from .errors import MapAlgebraTypeError
from .group_core import GroupTable, Subset, _frozen
from .matched_pair import MatchedPair


def _same(g1: GroupTable, g2: GroupTable) -> bool:
    return g1 is g2 or (g1.n == g2.n and g1.signature == g2.signature)


@dataclass(frozen=True, eq=False)
class MapTable:
    """A total function dom → cod stored as a table of codomain indices."""

    dom: GroupTable
    cod: GroupTable
    tbl: np.ndarray

    @classmethod
    def of(cls, dom: GroupTable, cod: GroupTable, tbl) -> "MapTable":
        tbl = np.asarray(tbl, dtype=np.int64)
        if tbl.shape != (dom.n,):
            raise MapAlgebraTypeError(f"map table must have length {dom.n}, got shape {tbl.shape}")
        if tbl.size and (tbl.min() < 0 or tbl.max() >= cod.n):
            raise MapAlgebraTypeError(f"map table has entries outside 0..{cod.n - 1}")
        return cls(dom=dom, cod=cod, tbl=_frozen(tbl))

    def __call__(self, u: int) -> int:
        return int(self.tbl[u])

    def same_as(self, other: "MapTable") -> bool:
        return bool(np.array_equal(self.tbl, other.tbl))

    def is_zero(self) -> bool:
        """True when the map is constant at the identity."""
        return bool((self.tbl == self.cod.identity).all())

    def is_identity(self) -> bool:
        return _same(self.dom, self.cod) and bool((self.tbl == np.arange(self.dom.n)).all())

    def is_homomorphism(self) -> bool:
        return bool((self.tbl[self.dom.mul] == self.cod.mul[self.tbl[:, None], self.tbl[None, :]]).all())

    def is_bijective(self) -> bool:
        return self.dom.n == self.cod.n and np.unique(self.tbl).size == self.dom.n

    def image(self) -> Subset:
        return Subset.of(self.cod, np.unique(self.tbl).tolist())


def identity_map(g: GroupTable) -> MapTable:
    return MapTable.of(g, g, np.arange(g.n))


def zero_map(dom: GroupTable, cod: GroupTable) -> MapTable:
    """The constant map onto the identity of ``cod``."""
    return MapTable.of(dom, cod, np.full(dom.n, cod.identity))


def map_add(phi: MapTable, psi: MapTable) -> MapTable:
    if not (_same(phi.dom, psi.dom) and _same(phi.cod, psi.cod)):
        raise MapAlgebraTypeError("map_add needs maps with the same domain and codomain")
    return MapTable.of(phi.dom, phi.cod, phi.cod.mul[phi.tbl, psi.tbl])


def map_neg(phi: MapTable) -> MapTable:
    """u ↦ φ(u)⁻¹."""
    return MapTable.of(phi.dom, phi.cod, phi.cod.inv[phi.tbl])


def map_compose(eta: MapTable, phi: MapTable) -> MapTable:
    """η ∘ φ."""
    if not _same(phi.cod, eta.dom):
        raise MapAlgebraTypeError("map_compose needs cod(φ) = dom(η)")
    return MapTable.of(phi.dom, eta.cod, eta.tbl[phi.tbl])


def _action_operands(phi: MapTable, psi: MapTable, mp: MatchedPair, name: str):
    if not _same(phi.dom, psi.dom):
        raise MapAlgebraTypeError(f"{name} needs maps with the same domain")
    if not (_same(phi.cod, mp.K) and _same(psi.cod, mp.H)):
        raise MapAlgebraTypeError(f"{name} needs a K-valued left operand and an H-valued right operand")


def map_dot(phi: MapTable, psi: MapTable, mp: MatchedPair) -> MapTable:
    """(φ·ψ)(u) = φ(u)·ψ(u), an H-valued map."""
    _action_operands(phi, psi, mp, "map_dot")
    return MapTable.of(phi.dom, mp.H, mp.sigma[phi.tbl, psi.tbl])


def map_exp(phi: MapTable, psi: MapTable, mp: MatchedPair) -> MapTable:
    """φ^ψ(u) = φ(u)^{ψ(u)}, a K-valued map."""
    _action_operands(phi, psi, mp, "map_exp")
    return MapTable.of(phi.dom, mp.K, mp.theta[phi.tbl, psi.tbl])


def kernel_of(phi: MapTable) -> Subset:
    """Preimage of the identity; a subset, not necessarily a subgroup."""
    return Subset.of(phi.dom, np.flatnonzero(phi.tbl == phi.cod.identity).tolist())

"""Matched pairs of groups and their Zappa-Szép products.

A matched pair is two groups H, K with actions

    sigma[k, h] = k·h  (an element of H)
    theta[k, h] = k^h  (an element of K)

so that kh = (k·h)(k^h) in the product. The product lives on H×K with index
``h * |K| + k`` and multiplication

    (h, k)(h', k') = (h (k·h'), k^{h'} k').
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

import numpy as np

from .errors import (
    MalformedPairError,
    MatchedPairInvalidError,
    NotAZappaFactorizationError,
)
from .group_core import (
    GroupTable,
    Subset,
    _frozen,
    group_from_document,
    is_subgroup,
    subgroup_table,
)
from .schemas import ConditionReport, ConditionResult, PairDocument, ZappaDocument

logger = logging.getLogger(__name__)


class SemidirectKind(str, Enum):
    DIRECT = "direct"
    # theta trivial: H is normal, G = H ⋊ K
    LEFT = "left-semidirect"
    # sigma trivial: K is normal, G = K ⋊ H
    RIGHT = "right-semidirect"
    GENUINE = "genuine"


@dataclass(frozen=True, eq=False)
class MatchedPair:
    H: GroupTable
    K: GroupTable
    sigma: np.ndarray
    theta: np.ndarray

    @classmethod
    def from_tables(cls, H: GroupTable, K: GroupTable, sigma, theta) -> "MatchedPair":
        """Wrap raw action tables after checking shape and range.

        Raises:
            MalformedPairError: a table is not |K|×|H| or has out-of-range entries.
        """
        sigma = np.asarray(sigma, dtype=np.int64)
        theta = np.asarray(theta, dtype=np.int64)
        shape = (K.n, H.n)
        for name, table, bound in (("sigma", sigma, H.n), ("theta", theta, K.n)):
            if table.shape != shape:
                raise MalformedPairError(f"{name} must have shape {shape}, got {table.shape}")
            if table.min() < 0 or table.max() >= bound:
                raise MalformedPairError(f"{name} has entries outside 0..{bound - 1}")
        return cls(H=H, K=K, sigma=_frozen(sigma), theta=_frozen(theta))

    def to_document(self) -> PairDocument:
        return PairDocument(
            H=self.H.to_document(),
            K=self.K.to_document(),
            sigma=self.sigma.tolist(),
            theta=self.theta.tolist(),
        )


def pair_from_document(doc: PairDocument) -> MatchedPair:
    H = group_from_document(doc.H)
    K = group_from_document(doc.K)
    return MatchedPair.from_tables(H, K, doc.sigma, doc.theta)


@dataclass(frozen=True, eq=False)
class ZSGroup:
    """The product H ⋈ K with its source pair and factor back-map.

    ``factor[x]`` is the pair (h, k) with x = h * |K| + k.
    """

    group: GroupTable
    mp: MatchedPair
    factor: np.ndarray

    @property
    def n(self) -> int:
        return self.group.n

    def element(self, h: int, k: int) -> int:
        return int(h) * self.mp.K.n + int(k)

    def embed_h(self, h) -> Any:
        return np.asarray(h) * self.mp.K.n + self.mp.K.identity

    def embed_k(self, k) -> Any:
        return self.mp.H.identity * self.mp.K.n + np.asarray(k)

    def h_subgroup(self) -> Subset:
        return Subset.of(self.group, self.embed_h(np.arange(self.mp.H.n)).tolist())

    def k_subgroup(self) -> Subset:
        return Subset.of(self.group, self.embed_k(np.arange(self.mp.K.n)).tolist())

    def to_document(self, params: Optional[dict] = None) -> ZappaDocument:
        pair = self.mp.to_document()
        return ZappaDocument(
            H=pair.H,
            K=pair.K,
            sigma=pair.sigma,
            theta=pair.theta,
            n=self.n,
            mul=self.group.mul.tolist(),
            labels=list(self.group.labels) if self.group.labels else None,
            params=params,
        )


def zappa_from_document(doc: PairDocument) -> ZSGroup:
    """Rebuild a product from a pair or product document.

    A product document's stored table must agree with the rebuilt one.
    """
    zs = build_zappa(pair_from_document(doc))
    mul = getattr(doc, "mul", None)
    if mul is not None and not np.array_equal(np.asarray(mul), zs.group.mul):
        raise MalformedPairError("stored multiplication table disagrees with the pair it claims to come from")
    return zs


def _witness(mask: np.ndarray, names: tuple[str, ...], all_witnesses: bool) -> tuple:
    bad = np.argwhere(~mask)
    if bad.size == 0:
        return None, None
    first = {name: int(v) for name, v in zip(names, bad[0])}
    rest = [{name: int(v) for name, v in zip(names, row)} for row in bad] if all_witnesses else None
    return first, rest


def validate_matched_pair(mp: MatchedPair, all_witnesses: bool = False) -> ConditionReport:
    """Check C1..C6 exhaustively.

    Args:
        mp: pair to check.
        all_witnesses: also list every counterexample, not only the first.

    Returns:
        ConditionReport with one result per condition; failed conditions
        carry the first counterexample.
    """
    H, K = mp.H, mp.K
    s, th = mp.sigma, mp.theta
    HM, KM = H.mul, K.mul
    ar_h, ar_k = np.arange(H.n), np.arange(K.n)
    kk = ar_k[:, None, None]
    hh2 = ar_h[None, None, :]

    checks = []
    # C1 and C2 are split into their two halves so the witness names one variable
    checks.append(("C1", s[K.identity, :] == ar_h, ("h",)))
    checks.append(("C1", th[:, H.identity] == ar_k, ("k",)))
    checks.append(("C2", s[:, H.identity] == H.identity, ("k",)))
    checks.append(("C2", th[K.identity, :] == K.identity, ("h",)))
    checks.append(("C3", s[KM] == s[kk, s[None, :, :]], ("k", "k2", "h")))
    checks.append(("C4", th[KM] == KM[th[kk, s[None, :, :]], th[None, :, :]], ("k", "k2", "h")))
    checks.append(("C5", s[kk, HM[None, :, :]] == HM[s[:, :, None], s[th[:, :, None], hh2]], ("k", "h", "h2")))
    checks.append(("C6", th[kk, HM[None, :, :]] == th[th[:, :, None], hh2], ("k", "h", "h2")))

    merged: dict[str, ConditionResult] = {}
    for name, mask, names in checks:
        first, rest = _witness(mask, names, all_witnesses)
        current = merged.get(name)
        if current is None:
            merged[name] = ConditionResult(condition=name, passed=first is None, witness=first, witnesses=rest)
        elif first is not None and current.passed:
            merged[name] = ConditionResult(condition=name, passed=False, witness=first, witnesses=rest)
        elif first is not None and rest and current.witnesses is not None:
            current.witnesses.extend(rest)

    report = ConditionReport(subject="matched-pair", results=list(merged.values()))
    if not report.passed:
        logger.debug("matched pair fails %s", [r.condition for r in report.failed()])
    return report


def _product_labels(H: GroupTable, K: GroupTable) -> Optional[list[str]]:
    if not (H.labels and K.labels):
        return None
    labels = []
    for h in range(H.n):
        for k in range(K.n):
            if h == H.identity and k == K.identity:
                labels.append("1")
            elif h == H.identity:
                labels.append(K.label(k))
            elif k == K.identity:
                labels.append(H.label(h))
            else:
                labels.append(H.label(h) + K.label(k))
    return labels


def build_zappa(mp: MatchedPair) -> ZSGroup:
    """Build the product group of a matched pair.

    Raises:
        MatchedPairInvalidError: the pair fails one of C1..C6; the first
            failing condition and its witness are attached.
    """
    report = validate_matched_pair(mp)
    if not report.passed:
        bad = report.failed()[0]
        raise MatchedPairInvalidError(
            f"matched pair violates {bad.condition}",
            witness={"condition": bad.condition, **(bad.witness or {})},
        )

    H, K = mp.H, mp.K
    nk = K.n
    idx = np.arange(H.n * nk)
    h, k = idx // nk, idx % nk
    hx, kx = h[:, None], k[:, None]
    hy, ky = h[None, :], k[None, :]
    new_h = H.mul[hx, mp.sigma[kx, hy]]
    new_k = K.mul[mp.theta[kx, hy], ky]
    group = GroupTable.from_mul(
        new_h * nk + new_k,
        labels=_product_labels(H, K),
        check_associativity=True,
    )
    factor = np.stack([h, k], axis=1)
    logger.debug("built product of order %d", group.n)
    return ZSGroup(group=group, mp=mp, factor=_frozen(factor))


def matched_pair_from_internal(g: GroupTable, h: Subset, k: Subset) -> MatchedPair:
    """Recover the matched pair of an internal factorization G = HK.

    For each k̂, ĥ the product k̂ĥ is written uniquely as h'k', giving
    σ(k̂, ĥ) = h' and θ(k̂, ĥ) = k'.

    Raises:
        NotAZappaFactorizationError: h or k is not a subgroup, they meet
            nontrivially, or |h|·|k| ≠ |g|.
    """
    for name, s in (("h", h), ("k", k)):
        if not is_subgroup(g, s):
            raise NotAZappaFactorizationError(f"{name} is not a subgroup")
    common = sorted(set(h.members) & set(k.members))
    if common != [g.identity]:
        raise NotAZappaFactorizationError(
            "subgroups intersect nontrivially",
            witness={"common": [int(x) for x in common if x != g.identity]},
        )
    if len(h) * len(k) != g.n:
        raise NotAZappaFactorizationError(f"|h|·|k| = {len(h) * len(k)} but |g| = {g.n}")

    hs, ks = h.as_array(), k.as_array()
    products = g.mul[hs[:, None], ks[None, :]]
    fac_h = np.full(g.n, -1, dtype=np.int64)
    fac_k = np.full(g.n, -1, dtype=np.int64)
    fac_h[products] = np.repeat(np.arange(len(hs)), len(ks)).reshape(products.shape)
    fac_k[products] = np.tile(np.arange(len(ks)), len(hs)).reshape(products.shape)
    if (fac_h < 0).any():
        x = int(np.flatnonzero(fac_h < 0)[0])
        raise NotAZappaFactorizationError("element has no factorization h·k", witness={"x": x})

    H, _ = subgroup_table(g, h)
    K, _ = subgroup_table(g, k)
    kh = g.mul[ks[:, None], hs[None, :]]
    return MatchedPair.from_tables(H, K, fac_h[kh], fac_k[kh])


def sigma_is_trivial(mp: MatchedPair) -> bool:
    return bool((mp.sigma == np.arange(mp.H.n)[None, :]).all())


def theta_is_trivial(mp: MatchedPair) -> bool:
    return bool((mp.theta == np.arange(mp.K.n)[:, None]).all())


def is_semidirect(mp: MatchedPair) -> SemidirectKind:
    """Classify a pair by which of its actions is trivial."""
    s_triv, t_triv = sigma_is_trivial(mp), theta_is_trivial(mp)
    if s_triv and t_triv:
        return SemidirectKind.DIRECT
    if t_triv:
        return SemidirectKind.LEFT
    if s_triv:
        return SemidirectKind.RIGHT
    return SemidirectKind.GENUINE


def homomorphic_action_flags(mp: MatchedPair) -> dict[str, bool]:
    """Flag actions that are homomorphic in one argument but not trivial.

    ``sigma_by_automorphisms``: every h ↦ k·h is an automorphism of H.
    ``theta_by_homomorphisms``: every k ↦ k^h is an endomorphism of K.
    Such pairs are reported for review rather than treated as semidirect.
    """
    H, K = mp.H, mp.K
    s, th = mp.sigma, mp.theta
    ar_k = np.arange(K.n)[:, None, None]
    sigma_hom = bool((s[ar_k, H.mul[None, :, :]] == H.mul[s[:, :, None], s[:, None, :]]).all())
    theta_hom = bool((th[K.mul] == K.mul[th[:, None, :], th[None, :, :]]).all())
    flags = {
        "sigma_by_automorphisms": sigma_hom and not sigma_is_trivial(mp),
        "theta_by_homomorphisms": theta_hom and not theta_is_trivial(mp),
    }
    flags["review"] = flags["sigma_by_automorphisms"] or flags["theta_by_homomorphisms"]
    return flags


def stabilizer_h(mp: MatchedPair) -> Subset:
    """Stab_H(K) = {h : k^h = k for all k}."""
    fixed = (mp.theta == np.arange(mp.K.n)[:, None]).all(axis=0)
    return Subset.of(mp.H, np.flatnonzero(fixed).tolist())


def stabilizer_k(mp: MatchedPair) -> Subset:
    """Stab_K(H) = {k : k·h = h for all h}."""
    fixed = (mp.sigma == np.arange(mp.H.n)[None, :]).all(axis=1)
    return Subset.of(mp.K, np.flatnonzero(fixed).tolist())


def extend_actions(
    H: GroupTable,
    K: GroupTable,
    h_gen: int,
    sigma_col,
    theta_col,
) -> tuple[np.ndarray, np.ndarray]:
    """Full action tables from their values at a generator of H.

    Given σ(k, b) and θ(k, b) for every k and a generator b of H, the powers
    b^j are reached with C5 and C6:

        σ(k, h·b) = σ(k, h)·σ(θ(k, h), b)
        θ(k, h·b) = θ(θ(k, h), b)

    Raises:
        ValueError: ``h_gen`` does not generate H.
    """
    sigma_col = np.asarray(sigma_col, dtype=np.int64)
    theta_col = np.asarray(theta_col, dtype=np.int64)
    sigma = np.full((K.n, H.n), -1, dtype=np.int64)
    theta = np.full((K.n, H.n), -1, dtype=np.int64)

    h = H.identity
    cur_s = np.full(K.n, H.identity, dtype=np.int64)
    cur_t = np.arange(K.n)
    for _ in range(H.n):
        sigma[:, h] = cur_s
        theta[:, h] = cur_t
        cur_s = H.mul[cur_s, sigma_col[cur_t]]
        cur_t = theta_col[cur_t]
        h = int(H.mul[h, h_gen])
    if (sigma < 0).any():
        raise ValueError(f"element {h_gen} does not generate H")
    return sigma, theta


def semidirect_product(H: GroupTable, K: GroupTable, phi) -> GroupTable:
    """H ⋊ K for an action of K on H by automorphisms.

    ``phi[k, h]`` is the image of h under k. Elements are (h, k) with index
    ``h * |K| + k`` and (h, k)(h', k') = (h·phi_k(h'), kk'). Written with plain
    loops, it serves as an independent oracle for products with trivial θ.
    """
    phi = np.asarray(phi)
    nh, nk = H.n, K.n
    mul = np.empty((nh * nk, nh * nk), dtype=np.int64)
    for h in range(nh):
        for k in range(nk):
            for h2 in range(nh):
                for k2 in range(nk):
                    new_h = H.mul[h, phi[k, h2]]
                    new_k = K.mul[k, k2]
                    mul[h * nk + k, h2 * nk + k2] = new_h * nk + new_k
    return GroupTable.from_mul(mul)

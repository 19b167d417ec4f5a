"""Subgroup families of the matrix group 𝒜 and its decompositions.

Map families (each a predicate on one or more components):

    P  α ∈ Aut(H), k·α(h) = α(k·h), k^{α(h)} = k^h
    Q  β(kk') = β(k)(k·β(k')), k = k^{β(k')}, β(k) = β(k^h)
    R  γ(hh') = γ(h)^{h'}γ(h'), h' = γ(h)·h', γ(k·h) = γ(h)
    S  δ ∈ Aut(K), δ(k)·h = k·h, δ(k)^h = δ(k^h)
    X  (α, γ, δ) with δ ∈ Aut(K) and the four mixed identities
    Y  (α, β, δ) with α ∈ Aut(H) and the four mixed identities
    Z  (α, δ) ∈ Aut(H)×Aut(K) compatible with both actions

Matrix families are the members of 𝒜 of a fixed shape whose components
satisfy the matching predicate:

    A [[α,0],[0,1]]  B [[1,β],[0,1]]  C [[1,0],[γ,1]]  D [[1,0],[0,δ]]
    E [[α,0],[γ,δ]]  F [[α,β],[0,δ]]  M [[α,0],[0,δ]]
"""

import logging
from typing import Callable, Optional

import numpy as np

from .aut_engine import AutMatrix, MatrixGroup, compose_matrices, identity_matrix
from .errors import UnknownFamilyError
from .map_algebra import (
    MapTable,
    identity_map,
    map_add,
    map_compose,
    map_neg,
)
from .matched_pair import MatchedPair, stabilizer_h, stabilizer_k
from .schemas import (
    ConditionReport,
    ConditionResult,
    DecompositionCheck,
    DecompositionReport,
    FamilyReport,
)

logger = logging.getLogger(__name__)

MAP_FAMILIES = ("P", "Q", "R", "S", "X", "Y", "Z")
MATRIX_FAMILIES = ("A", "B", "C", "D", "E", "F", "M")


# Map predicates

def _is_aut(t: np.ndarray, mul: np.ndarray) -> bool:
    return np.unique(t).size == t.size and bool((t[mul] == mul[t[:, None], t[None, :]]).all())


def in_P(alpha: np.ndarray, mp: MatchedPair) -> bool:
    s, th = mp.sigma, mp.theta
    return (
        _is_aut(alpha, mp.H.mul)
        and bool((s[:, alpha] == alpha[s]).all())
        and bool((th[:, alpha] == th).all())
    )


def in_Q(beta: np.ndarray, mp: MatchedPair) -> bool:
    s, th = mp.sigma, mp.theta
    ar_k = np.arange(mp.K.n)
    return (
        bool((beta[mp.K.mul] == mp.H.mul[beta[:, None], s[ar_k[:, None], beta[None, :]]]).all())
        and bool((th[:, beta] == ar_k[:, None]).all())
        and bool((beta[th] == beta[:, None]).all())
    )


def in_R(gamma: np.ndarray, mp: MatchedPair) -> bool:
    s, th = mp.sigma, mp.theta
    ar_h = np.arange(mp.H.n)
    return (
        bool((gamma[mp.H.mul] == mp.K.mul[th[gamma[:, None], ar_h[None, :]], gamma[None, :]]).all())
        and bool((s[gamma, :] == ar_h[None, :]).all())
        and bool((gamma[s] == gamma[None, :]).all())
    )


def in_S(delta: np.ndarray, mp: MatchedPair) -> bool:
    s, th = mp.sigma, mp.theta
    return (
        _is_aut(delta, mp.K.mul)
        and bool((s[delta, :] == s).all())
        and bool((th[delta, :] == delta[th]).all())
    )


def _mixed_alpha_delta(alpha, delta, mp: MatchedPair) -> bool:
    """δ(k)·α(h) = α(k·h) for all k, h."""
    return bool((mp.sigma[delta[:, None], alpha[None, :]] == alpha[mp.sigma]).all())


def in_X(alpha, gamma, delta, mp: MatchedPair) -> bool:
    HM, KM, s, th = mp.H.mul, mp.K.mul, mp.sigma, mp.theta
    return (
        _is_aut(delta, KM)
        and bool((alpha[HM] == HM[alpha[:, None], s[gamma[:, None], alpha[None, :]]]).all())
        and bool((gamma[HM] == KM[th[gamma[:, None], alpha[None, :]], gamma[None, :]]).all())
        and _mixed_alpha_delta(alpha, delta, mp)
        and bool((KM[th[delta[:, None], alpha[None, :]], gamma[None, :]] == KM[gamma[s], delta[th]]).all())
    )


def in_Y(alpha, beta, delta, mp: MatchedPair) -> bool:
    HM, KM, s, th = mp.H.mul, mp.K.mul, mp.sigma, mp.theta
    return (
        _is_aut(alpha, HM)
        and bool((beta[KM] == HM[beta[:, None], s[delta[:, None], beta[None, :]]]).all())
        and bool((delta[KM] == KM[th[delta[:, None], beta[None, :]], delta[None, :]]).all())
        and bool((HM[beta[:, None], s[delta[:, None], alpha[None, :]]] == HM[alpha[s], beta[th]]).all())
        and bool((th[delta[:, None], alpha[None, :]] == delta[th]).all())
    )


def in_Z(alpha, delta, mp: MatchedPair) -> bool:
    return (
        _is_aut(alpha, mp.H.mul)
        and _is_aut(delta, mp.K.mul)
        and _mixed_alpha_delta(alpha, delta, mp)
        and bool((mp.theta[delta[:, None], alpha[None, :]] == delta[mp.theta]).all())
    )


def _components(M: AutMatrix):
    return M.alpha.tbl, M.beta.tbl, M.gamma.tbl, M.delta.tbl


def _matches_map_family(fid: str, M: AutMatrix, mp: MatchedPair) -> bool:
    al, be, ga, de = _components(M)
    if fid == "P":
        return in_P(al, mp)
    if fid == "Q":
        return in_Q(be, mp)
    if fid == "R":
        return in_R(ga, mp)
    if fid == "S":
        return in_S(de, mp)
    if fid == "X":
        return in_X(al, ga, de, mp)
    if fid == "Y":
        return in_Y(al, be, de, mp)
    return in_Z(al, de, mp)


def _matches_matrix_family(fid: str, M: AutMatrix, mp: MatchedPair) -> bool:
    al, be, ga, de = _components(M)
    one_h = M.alpha.is_identity()
    one_k = M.delta.is_identity()
    zero_b = M.beta.is_zero()
    zero_g = M.gamma.is_zero()
    if fid == "A":
        return zero_b and zero_g and one_k and in_P(al, mp)
    if fid == "B":
        return one_h and zero_g and one_k and in_Q(be, mp)
    if fid == "C":
        return one_h and zero_b and one_k and in_R(ga, mp)
    if fid == "D":
        return one_h and zero_b and zero_g and in_S(de, mp)
    if fid == "E":
        return zero_b and in_X(al, ga, de, mp)
    if fid == "F":
        return zero_g and in_Y(al, be, de, mp)
    return zero_b and zero_g and in_Z(al, de, mp)


# Closure tests

def _closed_under_products(group: MatrixGroup, members: list[int]) -> bool:
    if not members or 0 not in members:
        return False
    idx = np.asarray(members)
    products = group.table[np.ix_(idx, idx)]
    inverses = [group.inverse(i) for i in members]
    return bool(np.isin(products, idx).all()) and all(i in set(members) for i in inverses)


def _closed_maps(values: dict[bytes, MapTable], op: Callable[[MapTable, MapTable], MapTable], unit: MapTable) -> bool:
    if unit.tbl.tobytes() not in values:
        return False
    for f in values.values():
        for g in values.values():
            if op(f, g).tbl.tobytes() not in values:
                return False
    return True


def _embedded(fid: str, M: AutMatrix, mp: MatchedPair) -> AutMatrix:
    """The shaped matrix carrying a member's X, Y or Z components."""
    ident = identity_matrix(mp)
    if fid == "X":
        return AutMatrix(M.alpha, ident.beta, M.gamma, M.delta)
    if fid == "Y":
        return AutMatrix(M.alpha, M.beta, ident.gamma, M.delta)
    return AutMatrix(M.alpha, ident.beta, ident.gamma, M.delta)


def compute_family(fid: str, group: MatrixGroup) -> FamilyReport:
    """Filter the enumerated 𝒜 by a family's defining predicate.

    For matrix families (A..M) members are the matrices of the right shape and
    the subgroup test is closure inside 𝒜. For map families (P..Z) members are
    the matrices whose components satisfy the predicate; ``order`` counts the
    distinct component values, and the subgroup test is closure of those values
    (composition for P and S, pointwise product for Q and R, matrix product of
    the shaped embeddings for X, Y, Z).

    Raises:
        UnknownFamilyError: fid is not one of P..Z or A..M.
    """
    mp = group.mp
    if fid in MATRIX_FAMILIES:
        members = [i for i, M in enumerate(group.matrices) if _matches_matrix_family(fid, M, mp)]
        return FamilyReport(
            family=fid,
            members=members,
            is_subgroup=_closed_under_products(group, members),
            order=len(members),
        )
    if fid not in MAP_FAMILIES:
        raise UnknownFamilyError(f"unknown family {fid!r}")

    members = [i for i, M in enumerate(group.matrices) if _matches_map_family(fid, M, mp)]
    if fid in ("P", "Q", "R", "S"):
        attr = {"P": "alpha", "Q": "beta", "R": "gamma", "S": "delta"}[fid]
        values = {}
        for i in members:
            mt = getattr(group.matrices[i], attr)
            values[mt.tbl.tobytes()] = mt
        if fid in ("P", "S"):
            dom = mp.H if fid == "P" else mp.K
            closed = _closed_maps(values, map_compose, identity_map(dom))
        else:
            unit = getattr(identity_matrix(mp), attr)
            closed = _closed_maps(values, map_add, unit)
        return FamilyReport(family=fid, members=members, is_subgroup=closed, order=len(values))

    shaped = {}
    for i in members:
        E = _embedded(fid, group.matrices[i], mp)
        shaped[E.key()] = E
    unit = identity_matrix(mp)
    closed = unit.key() in shaped and all(
        compose_matrices(x, y, mp, check=False).key() in shaped for x in shaped.values() for y in shaped.values()
    )
    return FamilyReport(family=fid, members=members, is_subgroup=closed, order=len(shaped))


def compute_families(group: MatrixGroup, fids=MATRIX_FAMILIES) -> dict[str, FamilyReport]:
    return {fid: compute_family(fid, group) for fid in fids}


# Decompositions

def _product_set(group: MatrixGroup, xs: list[int], ys: list[int]) -> tuple[set[int], Optional[dict]]:
    if not xs or not ys:
        return set(), None
    prods = group.table[np.ix_(np.asarray(xs), np.asarray(ys))]
    witness = None
    bad = np.argwhere(prods < 0)
    if bad.size:
        i, j = bad[0]
        witness = {"left": int(xs[i]), "right": int(ys[j])}
    return set(int(v) for v in np.unique(prods[prods >= 0])), witness


def one_minus_beta_gamma(M: AutMatrix) -> MapTable:
    """h ↦ h·β(γ(h))⁻¹."""
    return map_add(identity_map(M.alpha.dom), map_neg(map_compose(M.beta, M.gamma)))


def verify_ABCD(group: MatrixGroup, families: Optional[dict[str, FamilyReport]] = None) -> DecompositionReport:
    """Check 𝒜 = ABCD.

    Checks: every product abcd lies in 𝒜; the hypothesis 1−βγ ∈ P for every
    matrix of 𝒜; and |ABCD| = |𝒜|.
    """
    mp = group.mp
    fam = families or compute_families(group, ("A", "B", "C", "D"))
    for fid in ("A", "B", "C", "D"):
        if fid not in fam:
            raise UnknownFamilyError(f"family {fid} was not computed")

    current = set(fam["A"].members)
    closure_witness = None
    for fid in ("B", "C", "D"):
        current, witness = _product_set(group, sorted(current), fam[fid].members)
        closure_witness = closure_witness or witness
    checks = [
        DecompositionCheck(
            name="products-in-A",
            passed=closure_witness is None,
            witness=closure_witness,
        )
    ]

    hyp_witness = None
    for i, M in enumerate(group.matrices):
        if not in_P(one_minus_beta_gamma(M).tbl, mp):
            hyp_witness = {"matrix": i}
            break
    checks.append(
        DecompositionCheck(
            name="hypothesis-1-beta-gamma-in-P",
            passed=hyp_witness is None,
            witness=hyp_witness,
        )
    )

    covered = len(current) == len(group)
    checks.append(
        DecompositionCheck(
            name="product-covers",
            passed=covered,
            detail=f"|ABCD| = {len(current)}, |Aut| = {len(group)}",
            witness=None if covered else {"missing": sorted(set(range(len(group))) - current)[:1]},
        )
    )
    orders = {fid: fam[fid].order for fid in ("A", "B", "C", "D")}
    orders["ABCD"] = len(current)
    orders["Aut"] = len(group)
    return DecompositionReport(
        claim="ABCD",
        factors=["A", "B", "C", "D"],
        checks=checks,
        orders=orders,
        verdict=all(c.passed for c in checks),
    )


def check_conjugation_stability(group: MatrixGroup, by: list[int], target: list[int]) -> DecompositionCheck:
    """Is ``target`` stable under conjugation by every member of ``by``?"""
    tset = set(target)
    t = group.table
    for g in by:
        g_inv = group.inverse(g)
        for x in target:
            left = t[g, x]
            y = t[left, g_inv] if left >= 0 and g_inv is not None else -1
            if y not in tset:
                return DecompositionCheck(name="conjugation-stable", passed=False, witness={"by": int(g), "element": int(x)})
    return DecompositionCheck(name="conjugation-stable", passed=True)


def _semidirect_link(group: MatrixGroup, whole: list[int], normal: list[int], complement: list[int], names: tuple[str, str, str]) -> list[DecompositionCheck]:
    W, N, Q = names
    norm = check_conjugation_stability(group, whole, normal)
    common = sorted(set(normal) & set(complement))
    prod, witness = _product_set(group, normal, complement)
    covers = prod == set(whole) and witness is None
    return [
        DecompositionCheck(name=f"{N}<|{W}", passed=norm.passed, witness=norm.witness),
        DecompositionCheck(
            name=f"{N}&{Q}=1",
            passed=common == [0],
            witness=None if common == [0] else {"common": common},
        ),
        DecompositionCheck(
            name=f"{N}{Q}={W}",
            passed=covers,
            detail=f"|{N}{Q}| = {len(prod)}, |{W}| = {len(whole)}",
            witness=witness,
        ),
    ]


CHAINS = {
    # 𝒜 = E ⋊ B with E = C ⋊ M
    "EB": (("E", "B"), ("C", "M")),
    # 𝒜 = F ⋊ C with F = B ⋊ M
    "FC": (("F", "C"), ("B", "M")),
}


def verify_semidirect_chain(group: MatrixGroup, chain: str, families: Optional[dict[str, FamilyReport]] = None) -> DecompositionReport:
    """Check a chain of internal semidirect decompositions.

    ``EB``: E ◁ 𝒜, E∩B = 1, EB = 𝒜, then C ◁ E, C∩M = 1, CM = E.
    ``FC``: F ◁ 𝒜, F∩C = 1, FC = 𝒜, then B ◁ F, B∩M = 1, BM = F.
    ``AD``: A, D ⊆ M commute elementwise, A∩D = 1, AD = M.

    Raises:
        UnknownFamilyError: unknown chain name.
    """
    fam = dict(families or {})
    needed = {"EB": "EBCM", "FC": "FCBM", "AD": "ADM"}.get(chain)
    if needed is None:
        raise UnknownFamilyError(f"unknown chain {chain!r}")
    for fid in needed:
        if fid not in fam:
            fam[fid] = compute_family(fid, group)

    everything = list(range(len(group)))
    checks: list[DecompositionCheck] = []
    if chain == "AD":
        A, D, M = fam["A"].members, fam["D"].members, fam["M"].members
        inside = set(A) <= set(M) and set(D) <= set(M)
        checks.append(DecompositionCheck(name="A,D<=M", passed=inside))
        t = group.table
        comm = next(({"a": a, "d": d} for a in A for d in D if t[a, d] != t[d, a]), None)
        checks.append(DecompositionCheck(name="A,D commute", passed=comm is None, witness=comm))
        common = sorted(set(A) & set(D))
        checks.append(DecompositionCheck(name="A&D=1", passed=common == [0], witness=None if common == [0] else {"common": common}))
        prod, witness = _product_set(group, A, D)
        checks.append(
            DecompositionCheck(
                name="AD=M",
                passed=prod == set(M) and witness is None,
                detail=f"|AD| = {len(prod)}, |M| = {len(M)}",
                witness=witness,
            )
        )
        factors = ["A", "D"]
    else:
        (outer_n, outer_q), (inner_n, inner_q) = CHAINS[chain]
        checks += _semidirect_link(group, everything, fam[outer_n].members, fam[outer_q].members, ("Aut", outer_n, outer_q))
        checks += _semidirect_link(group, fam[outer_n].members, fam[inner_n].members, fam[inner_q].members, (outer_n, inner_n, inner_q))
        factors = [inner_n, inner_q, outer_q]

    for fid in needed:
        checks.append(DecompositionCheck(name=f"{fid} subgroup", passed=fam[fid].is_subgroup))
    orders = {fid: fam[fid].order for fid in needed}
    orders["Aut"] = len(group)
    return DecompositionReport(
        claim=f"chain-{chain}",
        factors=factors,
        checks=checks,
        orders=orders,
        verdict=all(c.passed for c in checks),
    )


def reduced_characterization(group: MatrixGroup) -> ConditionReport:
    """Compare Q and R with their reduced forms for abelian factors.

    Q against Hom(K, Stab_H(K)) and R against crossed homomorphisms into
    Stab_K(H) constant on σ-orbits. Divergences name the first matrix.
    """
    mp = group.mp
    stab_h = set(stabilizer_h(mp).members)
    stab_k = set(stabilizer_k(mp).members)
    ar_h = np.arange(mp.H.n)
    q_bad = r_bad = None
    for i, M in enumerate(group.matrices):
        be, ga = M.beta.tbl, M.gamma.tbl
        q_reduced = M.beta.is_homomorphism() and set(be.tolist()) <= stab_h
        if q_bad is None and in_Q(be, mp) != q_reduced:
            q_bad = {"matrix": i, "raw": in_Q(be, mp), "reduced": q_reduced}
        crossed = bool((ga[mp.H.mul] == mp.K.mul[mp.theta[ga[:, None], ar_h[None, :]], ga[None, :]]).all())
        r_reduced = crossed and set(ga.tolist()) <= stab_k and bool((ga[mp.sigma] == ga[None, :]).all())
        if r_bad is None and in_R(ga, mp) != r_reduced:
            r_bad = {"matrix": i, "raw": in_R(ga, mp), "reduced": r_reduced}
    return ConditionReport(
        subject="reduced-characterization",
        results=[
            ConditionResult(condition="Q=Hom(K,Stab_H(K))", passed=q_bad is None, witness=q_bad),
            ConditionResult(condition="R=CrossHom(H,Stab_K(H))", passed=r_bad is None, witness=r_bad),
        ],
    )

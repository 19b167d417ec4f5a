"""Automorphisms of H ⋈ K and their matrices (α, β, γ, δ).

An automorphism θ of G = H ⋈ K is written

    θ(h) = α(h)γ(h),   θ(k) = β(k)δ(k)

with α: H→H, γ: H→K, β: K→H, δ: K→K. The set of such quadruples satisfying
A1..A7 is a group under the composition in :func:`compose_matrices`, and
``aut_to_matrix`` is an isomorphism onto it.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .config import get_max_group_order
from .errors import FormulaConsistencyError, NotInAError, NotTwoGeneratedError, ScaleError
from .group_core import element_orders, is_subgroup
from .map_algebra import (
    MapTable,
    identity_map,
    kernel_of,
    map_add,
    map_compose,
    map_dot,
    map_exp,
    zero_map,
)
from .matched_pair import MatchedPair, ZSGroup
from .schemas import ConditionReport, ConditionResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Automorphism:
    perm: np.ndarray

    def key(self) -> bytes:
        return self.perm.tobytes()


@dataclass(frozen=True, eq=False)
class AutMatrix:
    alpha: MapTable
    beta: MapTable
    gamma: MapTable
    delta: MapTable

    def key(self) -> bytes:
        return b"|".join(m.tbl.tobytes() for m in (self.alpha, self.beta, self.gamma, self.delta))

    def same_as(self, other: "AutMatrix") -> bool:
        return self.key() == other.key()

    def to_dict(self) -> dict[str, list[int]]:
        return {
            "alpha": self.alpha.tbl.tolist(),
            "beta": self.beta.tbl.tolist(),
            "gamma": self.gamma.tbl.tolist(),
            "delta": self.delta.tbl.tolist(),
        }


def identity_matrix(mp: MatchedPair) -> AutMatrix:
    return AutMatrix(
        alpha=identity_map(mp.H),
        beta=zero_map(mp.K, mp.H),
        gamma=zero_map(mp.H, mp.K),
        delta=identity_map(mp.K),
    )


def matrix_from_tables(mp: MatchedPair, alpha, beta, gamma, delta) -> AutMatrix:
    return AutMatrix(
        alpha=MapTable.of(mp.H, mp.H, alpha),
        beta=MapTable.of(mp.K, mp.H, beta),
        gamma=MapTable.of(mp.H, mp.K, gamma),
        delta=MapTable.of(mp.K, mp.K, delta),
    )


def _generator(g) -> Optional[int]:
    hits = np.flatnonzero(element_orders(g) == g.n)
    return int(hits[0]) if hits.size else None


def _powers(mul: np.ndarray, identity: int, count: int) -> np.ndarray:
    """P[x, i] = x^i for every element x and 0 ≤ i < count."""
    n = mul.shape[0]
    ar = np.arange(n)
    P = np.empty((n, count), dtype=np.int64)
    P[:, 0] = identity
    for i in range(1, count):
        P[:, i] = mul[P[:, i - 1], ar]
    return P


def _scan_candidates(mul, xs, ys, P, pos_h, pos_k, right_b, right_a) -> list[np.ndarray]:
    found = []
    n = mul.shape[0]
    for x in xs:
        xp = P[x, pos_h]
        for y in ys:
            phi = mul[xp[:, None], P[y, pos_k][None, :]].reshape(-1)
            # multiplicative on generators from the right
            if not (phi[right_b] == mul[phi, x]).all():
                continue
            if not (phi[right_a] == mul[phi, y]).all():
                continue
            if np.unique(phi).size != n:
                continue
            if not (phi[mul] == mul[phi[:, None], phi[None, :]]).all():
                continue
            found.append(phi)
    return found


def brute_force_aut(
    g: ZSGroup,
    cap: Optional[int] = None,
    workers: int = 1,
) -> list[Automorphism]:
    """Enumerate Aut(G) by generator images.

    Every element of G is b^i a^j with b, a generators of the embedded cyclic
    factors H and K. A candidate pair (x, y) of images with ord(x) = |H| and
    ord(y) = |K| extends to φ(b^i a^j) = x^i y^j; candidates are kept when φ is
    bijective and multiplicative on all pairs.

    Args:
        g: the product group.
        cap: largest |G| accepted; defaults to ZAPPA_MAX_GROUP_ORDER.
        workers: threads used to scan candidate images of b.

    Returns:
        All automorphisms, sorted lexicographically by permutation, so the
        identity comes first.

    Raises:
        ScaleError: |G| exceeds the cap.
        NotTwoGeneratedError: H or K is not cyclic.
    """
    cap = cap or get_max_group_order()
    if g.n > cap:
        raise ScaleError(f"group of order {g.n} exceeds the brute-force cap {cap}", witness={"order": g.n, "cap": cap})
    H, K = g.mp.H, g.mp.K
    h_gen, k_gen = _generator(H), _generator(K)
    if h_gen is None or k_gen is None:
        raise NotTwoGeneratedError("both factors must be cyclic for generator-image enumeration")

    G = g.group
    b = int(g.embed_h(h_gen))
    a = int(g.embed_k(k_gen))

    # exponent of each factor element in its generator
    pos_h = np.empty(H.n, dtype=np.int64)
    pos_h[_powers(H.mul, H.identity, H.n)[h_gen]] = np.arange(H.n)
    pos_k = np.empty(K.n, dtype=np.int64)
    pos_k[_powers(K.mul, K.identity, K.n)[k_gen]] = np.arange(K.n)

    P = _powers(G.mul, G.identity, max(H.n, K.n))
    orders = element_orders(G)
    xs = np.flatnonzero(orders == H.n).tolist()
    ys = np.flatnonzero(orders == K.n).tolist()
    right_b = G.mul[:, b]
    right_a = G.mul[:, a]
    logger.debug("scanning %d x %d generator images in a group of order %d", len(xs), len(ys), G.n)

    if workers > 1 and len(xs) > 1:
        chunks = [xs[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                lambda part: _scan_candidates(G.mul, part, ys, P, pos_h, pos_k, right_b, right_a),
                chunks,
            )
            found = [phi for part in parts for phi in part]
    else:
        found = _scan_candidates(G.mul, xs, ys, P, pos_h, pos_k, right_b, right_a)

    found.sort(key=lambda p: p.tolist())
    result = []
    for phi in found:
        phi.setflags(write=False)
        result.append(Automorphism(perm=phi))
    logger.info("|Aut(G)| = %d for |G| = %d", len(result), G.n)
    return result


def aut_to_matrix(theta: Automorphism, g: ZSGroup) -> AutMatrix:
    """T(θ): read α, γ off θ(h) and β, δ off θ(k) through the factor map."""
    mp = g.mp
    img_h = theta.perm[g.embed_h(np.arange(mp.H.n))]
    img_k = theta.perm[g.embed_k(np.arange(mp.K.n))]
    return matrix_from_tables(
        mp,
        alpha=g.factor[img_h, 0],
        beta=g.factor[img_k, 0],
        gamma=g.factor[img_h, 1],
        delta=g.factor[img_k, 1],
    )


def _first(mask: np.ndarray, names: tuple[str, ...]) -> Optional[dict]:
    bad = np.argwhere(~mask)
    if bad.size == 0:
        return None
    return {name: int(v) for name, v in zip(names, bad[0])}


def check_A_conditions(M: AutMatrix, mp: MatchedPair) -> ConditionReport:
    """Evaluate A1..A7 for a quadruple of maps.

    A7 is checked as bijectivity of (h, k) ↦ θ(h)θ(k) on H×K.
    """
    H, K = mp.H, mp.K
    HM, KM, s, th = H.mul, K.mul, mp.sigma, mp.theta
    al, be, ga, de = M.alpha.tbl, M.beta.tbl, M.gamma.tbl, M.delta.tbl
    for name, mt, dom, cod in (("alpha", M.alpha, H, H), ("beta", M.beta, K, H), ("gamma", M.gamma, H, K), ("delta", M.delta, K, K)):
        if mt.tbl.shape != (dom.n,) or mt.tbl.max(initial=0) >= cod.n:
            raise NotInAError(f"{name} has the wrong signature for this matched pair")

    sk, tk = s, th  # σ(k, h), θ(k, h) indexed [k, h]
    checks = [
        ("A1", al[HM] == HM[al[:, None], s[ga[:, None], al[None, :]]], ("h", "h2")),
        ("A2", ga[HM] == KM[th[ga[:, None], al[None, :]], ga[None, :]], ("h", "h2")),
        ("A3", be[KM] == HM[be[:, None], s[de[:, None], be[None, :]]], ("k", "k2")),
        ("A4", de[KM] == KM[th[de[:, None], be[None, :]], de[None, :]], ("k", "k2")),
        (
            "A5",
            HM[be[:, None], s[de[:, None], al[None, :]]] == HM[al[sk], s[ga[sk], be[tk]]],
            ("k", "h"),
        ),
        (
            "A6",
            KM[th[de[:, None], al[None, :]], ga[None, :]] == KM[th[ga[sk], be[tk]], de[tk]],
            ("k", "h"),
        ),
    ]
    results = [ConditionResult(condition=name, passed=bool(mask.all()), witness=_first(mask, names)) for name, mask, names in checks]

    new_h = HM[al[:, None], s[ga[:, None], be[None, :]]]
    new_k = KM[th[ga[:, None], be[None, :]], de[None, :]]
    image = (new_h * K.n + new_k).reshape(-1)
    values, first_idx, counts = np.unique(image, return_index=True, return_counts=True)
    if values.size == image.size:
        results.append(ConditionResult(condition="A7", passed=True))
    else:
        dup = int(values[np.flatnonzero(counts > 1)[0]])
        hits = np.flatnonzero(image == dup)[:2]
        witness = {"pairs": [[int(x) // K.n, int(x) % K.n] for x in hits]}
        results.append(ConditionResult(condition="A7", passed=False, witness=witness))
    return ConditionReport(subject="A-conditions", results=results)


def matrix_to_aut(M: AutMatrix, g: ZSGroup, check: bool = True) -> Automorphism:
    """θ(h, k) = α(h)γ(h)·β(k)δ(k).

    Raises:
        NotInAError: M fails one of A1..A7; the witness names the condition.
        FormulaConsistencyError: M passes A1..A7 but the resulting map is not
            an automorphism.
    """
    mp = g.mp
    if check:
        report = check_A_conditions(M, mp)
        if not report.passed:
            bad = report.failed()[0]
            raise NotInAError(
                f"matrix fails {bad.condition}",
                witness={"condition": bad.condition, **(bad.witness or {})},
            )
    G = g.group
    u = M.alpha.tbl * mp.K.n + M.gamma.tbl
    v = M.beta.tbl * mp.K.n + M.delta.tbl
    perm = G.mul[u[:, None], v[None, :]].reshape(-1)
    if check:
        if np.unique(perm).size != G.n or not (perm[G.mul] == G.mul[perm[:, None], perm[None, :]]).all():
            raise FormulaConsistencyError("matrix passes A1..A7 but does not define an automorphism")
    perm.setflags(write=False)
    return Automorphism(perm=perm)


def compose_matrices(Mp: AutMatrix, M: AutMatrix, mp: MatchedPair, check: bool = True) -> AutMatrix:
    """The product Mp·M, equal to T(θ' ∘ θ) when Mp = T(θ') and M = T(θ).

        α'' = α'α + γ'α · β'γ          β'' = α'β + γ'β · β'δ
        γ'' = (γ'α)^{β'γ} + δ'γ        δ'' = (γ'β)^{β'δ} + δ'δ

    Raises:
        NotInAError: with ``check``, an operand fails A1..A7.
    """
    if check:
        for side, operand in (("left", Mp), ("right", M)):
            report = check_A_conditions(operand, mp)
            if not report.passed:
                bad = report.failed()[0]
                raise NotInAError(f"{side} operand fails {bad.condition}", witness={"operand": side, "condition": bad.condition})
    a1, b1, c1, d1 = Mp.alpha, Mp.beta, Mp.gamma, Mp.delta
    a, b, c, d = M.alpha, M.beta, M.gamma, M.delta
    alpha = map_add(map_compose(a1, a), map_dot(map_compose(c1, a), map_compose(b1, c), mp))
    beta = map_add(map_compose(a1, b), map_dot(map_compose(c1, b), map_compose(b1, d), mp))
    gamma = map_add(map_exp(map_compose(c1, a), map_compose(b1, c), mp), map_compose(d1, c))
    delta = map_add(map_exp(map_compose(c1, b), map_compose(b1, d), mp), map_compose(d1, d))
    return AutMatrix(alpha=alpha, beta=beta, gamma=gamma, delta=delta)


def check_proposition(M: AutMatrix) -> ConditionReport:
    """α(1) = β(1) = γ(1) = δ(1) = 1."""
    results = []
    for name in ("alpha", "beta", "gamma", "delta"):
        mt = getattr(M, name)
        value = mt(mt.dom.identity)
        results.append(
            ConditionResult(
                condition=f"{name}(1)=1",
                passed=value == mt.cod.identity,
                witness=None if value == mt.cod.identity else {"value": value},
            )
        )
    return ConditionReport(subject="unit-values", results=results)


def check_kernel_lemma(M: AutMatrix) -> ConditionReport:
    """Kernels of α, γ (in H) and β, δ (in K) are subgroups meeting trivially in pairs."""
    ka, kb, kc, kd = (kernel_of(getattr(M, n)) for n in ("alpha", "beta", "gamma", "delta"))
    H, K = M.alpha.dom, M.beta.dom
    results = [
        ConditionResult(condition="ker(alpha)<=H", passed=is_subgroup(H, ka)),
        ConditionResult(condition="ker(gamma)<=H", passed=is_subgroup(H, kc)),
        ConditionResult(condition="ker(beta)<=K", passed=is_subgroup(K, kb)),
        ConditionResult(condition="ker(delta)<=K", passed=is_subgroup(K, kd)),
    ]
    for name, s1, s2, e in (("ker(alpha)&ker(gamma)=1", ka, kc, H.identity), ("ker(beta)&ker(delta)=1", kb, kd, K.identity)):
        common = sorted(set(s1.members) & set(s2.members))
        results.append(
            ConditionResult(
                condition=name,
                passed=common == [e],
                witness=None if common == [e] else {"common": common},
            )
        )
    return ConditionReport(subject="kernel-lemma", results=results)


def aut_order_spectrum(auts: list[Automorphism]) -> dict[int, int]:
    """Histogram of element orders of Aut(G) under composition."""
    counts: Counter = Counter()
    for theta in auts:
        p = theta.perm
        ident = np.arange(p.size)
        q, k = p, 1
        while not np.array_equal(q, ident):
            q = p[q]
            k += 1
        counts[k] += 1
    return dict(sorted(counts.items()))


class MatrixGroup:
    """The enumerated group 𝒜 = T(Aut(G)) with indexed products.

    Index 0 is the identity. ``product(i, j)`` is the index of M_i·M_j, that is
    of T(θ_i ∘ θ_j); it is None when the product falls outside the list.
    """

    def __init__(self, zs: ZSGroup, auts: list[Automorphism]):
        self.zs = zs
        self.mp = zs.mp
        self.auts = auts
        self.matrices = [aut_to_matrix(theta, zs) for theta in auts]
        self.perms = np.stack([theta.perm for theta in auts]) if auts else np.empty((0, zs.n), dtype=np.int64)
        self._index = {theta.key(): i for i, theta in enumerate(auts)}

    @classmethod
    def enumerate(cls, zs: ZSGroup, cap: Optional[int] = None, workers: int = 1) -> "MatrixGroup":
        return cls(zs, brute_force_aut(zs, cap=cap, workers=workers))

    def __len__(self) -> int:
        return len(self.auts)

    def index_of_perm(self, perm: np.ndarray) -> Optional[int]:
        return self._index.get(np.ascontiguousarray(perm, dtype=np.int64).tobytes())

    def product(self, i: int, j: int) -> Optional[int]:
        return self.index_of_perm(self.perms[i][self.perms[j]])

    def inverse(self, i: int) -> Optional[int]:
        return self.index_of_perm(np.argsort(self.perms[i]))

    @cached_property
    def table(self) -> np.ndarray:
        """Full product table; -1 marks products outside the list."""
        N = len(self)
        out = np.full((N, N), -1, dtype=np.int64)
        for i in range(N):
            rows = self.perms[i][self.perms]
            for j in range(N):
                idx = self._index.get(rows[j].tobytes())
                if idx is not None:
                    out[i, j] = idx
        return out


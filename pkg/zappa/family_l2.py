"""The family L₂ = Z₄ ⋈ Z_m.

H = ⟨b⟩ ≅ Z₄ and K = ⟨a⟩ ≅ Z_m with a·b = b³ and a^b = a^{2t+1}, for
parameters (m, s, t) satisfying

    G1  2s² ≡ 2           (mod m)
    G2  4t(s+1) ≡ 0       (mod m)
    G3  2(t+1)(s−1) ≡ 0   (mod m)
    G4  gcd(s, m/2) = 1

Element indices are exponents: b^j is j in H, a^l is l in K.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Optional

import numpy as np
from sympy import multiplicity, totient

from .aut_engine import MatrixGroup
from .errors import FamilyInapplicableError, FamilyParamError, FormulaConsistencyError
from .families import in_Q
from .group_core import cyclic_group, generated_subgroup
from .matched_pair import MatchedPair, extend_actions
from .schemas import ConditionReport, ConditionResult, PredictedAut

logger = logging.getLogger(__name__)

CONDITIONS = ("G1", "G2", "G3", "G4")


@dataclass(frozen=True)
class L2Params:
    m: int
    s: int
    t: int

    @property
    def semidirect(self) -> bool:
        """2t ≡ 0 (mod m): a^b = a and the product degenerates."""
        return (2 * self.t) % self.m == 0

    @property
    def tag(self) -> str:
        return "semidirect" if self.semidirect else "genuine"

    def as_dict(self) -> dict[str, int]:
        return {"m": self.m, "s": self.s, "t": self.t}


def _require_even(m: int) -> None:
    if m < 2 or m % 2:
        raise FamilyInapplicableError(f"L2 needs an even modulus m >= 2, got {m}")


def check_l2_conditions(m: int, s: int, t: int) -> dict[str, bool]:
    _require_even(m)
    return {
        "G1": (2 * s * s - 2) % m == 0,
        "G2": (4 * t * (s + 1)) % m == 0,
        "G3": (2 * (t + 1) * (s - 1)) % m == 0,
        "G4": gcd(s, m // 2) == 1,
    }


def enumerate_l2_params(m: int) -> list[L2Params]:
    """Every (s, t) in [0, m)² meeting G1..G4, in (s, t) order.

    Raises:
        FamilyInapplicableError: m is odd or below 2.
    """
    _require_even(m)
    s, t = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    ok = (
        ((2 * s * s - 2) % m == 0)
        & ((4 * t * (s + 1)) % m == 0)
        & ((2 * (t + 1) * (s - 1)) % m == 0)
        & (np.gcd(s, m // 2) == 1)
    )
    points = [L2Params(m, int(a), int(b)) for a, b in zip(s[ok], t[ok])]
    logger.debug("m=%d: %d admissible (s, t) pairs", m, len(points))
    return points


def _validate(p: L2Params) -> None:
    conds = check_l2_conditions(p.m, p.s, p.t)
    failed = [name for name in CONDITIONS if not conds[name]]
    if failed or not (0 <= p.s < p.m and 0 <= p.t < p.m):
        raise FamilyParamError(
            f"(m={p.m}, s={p.s}, t={p.t}) violates {', '.join(failed) or 'range'}",
            witness={"condition": failed[0] if failed else "range", **p.as_dict()},
        )


def l2_action_tables(p: L2Params) -> tuple[np.ndarray, np.ndarray]:
    """σ and θ from their closed forms.

        a^l·b^j     = b^{(−1)^l j}
        (a^l)^{b^j} = a^{l s^{j mod 2}}                              l even
        (a^l)^{b^j} = a^{(j odd ? f(l) : l) + (j ≥ 2 ? 2t(1+s) : 0)}  l odd

    with f(l) = 2t + 1 + (l−1)s.
    """
    m, s, t = p.m, p.s, p.t
    l = np.arange(m)[:, None]
    j = np.arange(4)[None, :]
    sigma = np.where(l % 2 == 0, j, (-j) % 4)

    f = 2 * t + 1 + (l - 1) * s
    odd = np.where(j % 2 == 1, f, l) + np.where(j >= 2, 2 * t * (1 + s), 0)
    even = np.where(j % 2 == 1, l * s, l)
    theta = np.where(l % 2 == 1, odd, even) % m
    return sigma.astype(np.int64), theta.astype(np.int64)


def build_l2(p: L2Params) -> MatchedPair:
    """Matched pair for L₂(m, s, t).

    Raises:
        FamilyInapplicableError: m odd.
        FamilyParamError: parameters violate G1..G4.
        FormulaConsistencyError: closed forms disagree with the extension of
            the generator column through C5 and C6.
    """
    _validate(p)
    H = cyclic_group(4, "b")
    K = cyclic_group(p.m, "a")
    sigma, theta = l2_action_tables(p)
    ext_sigma, ext_theta = extend_actions(H, K, 1, sigma[:, 1], theta[:, 1])
    for name, closed, extended in (("sigma", sigma, ext_sigma), ("theta", theta, ext_theta)):
        bad = np.argwhere(closed != extended)
        if bad.size:
            k, h = (int(v) for v in bad[0])
            raise FormulaConsistencyError(
                f"closed-form {name} disagrees with generator extension",
                witness={"table": name, "k": k, "h": h, **p.as_dict()},
            )
    return MatchedPair.from_tables(H, K, sigma, theta)


@dataclass(frozen=True)
class L2Strata:
    """m = 2ⁿq with q odd, gcd(t, m) = 2ⁱd with d odd."""

    n: int
    q: int
    i: int
    d: int
    g: int


def l2_strata(m: int, s: int, t: int) -> L2Strata:
    n = int(multiplicity(2, m))
    g = gcd(t, m)
    i = int(multiplicity(2, g))
    return L2Strata(n=n, q=m >> n, i=i, d=g >> i, g=g)


def _eb(theorem: str, c: int, phi: int, b: int) -> PredictedAut:
    return PredictedAut(
        theorem=theorem,
        order=c * 2 * phi * b,
        chain={"C": c, "M": 2 * phi, "B": b},
        chain_kind="EB",
    )


def _fc(theorem: str, phi: int) -> PredictedAut:
    return PredictedAut(
        theorem=theorem,
        order=4 * 2 * phi * 2,
        chain={"B": 4, "M": 2 * phi, "C": 2},
        chain_kind="FC",
    )


def _s_rule(theorem: str, p: L2Params, phi: int) -> PredictedAut:
    m, s = p.m, p.s
    if s in (m // 2 - 1, m - 1):
        return _eb(theorem, m // 2, phi, 2)
    if m % 4 == 0 and s in (m // 4 - 1, 3 * m // 4 - 1):
        return _eb(theorem, m // 2, phi, 1)
    return PredictedAut(theorem="unclassified", notes=[f"{theorem}: s={s} outside the covered residues"])


def predicted_aut_l2(p: L2Params) -> PredictedAut:
    """Predicted |Aut(G)| and its factor chain.

    Dispatches on m = 2ⁿq, the parity of t, gcd(t, m) = 2ⁱd and the residue
    of s. Strata no statement covers come back as ``unclassified``; the proven
    empty stratum comes back as ``no-group``.

    Raises:
        FamilyParamError: parameters violate G1..G4.
        FamilyInapplicableError: the point is semidirect.
    """
    _validate(p)
    if p.semidirect:
        raise FamilyInapplicableError(
            f"(m={p.m}, s={p.s}, t={p.t}) is a semidirect product",
            witness=p.as_dict(),
        )
    m, s, t = p.m, p.s, p.t
    st = l2_strata(m, s, t)
    phi = int(totient(m))
    n, q, i, d = st.n, st.q, st.i, st.d
    t_even = t % 2 == 0

    if n == 1:
        return _eb("m=2q", m // (2 * d), phi, 2)
    if n == 2 and q == 1:
        return _s_rule("4|m,t odd,gcd(t,m)=1", p, phi)
    if n == 2:
        return _eb("m=4q", m // (2 * d), phi, 2)
    if q == 1:
        if t_even:
            return _fc("m=2^n,t even", phi)
        return _s_rule("m=2^n,t odd", p, phi)
    if t_even:
        if d == q:
            return _fc("m=2^nq,t even,d=q", phi)
        if n - 2 <= i <= n:
            return PredictedAut(
                theorem="m=2^nq,t even,n-2<=i<=n",
                order=2 * (2 * q // d) * 2 * phi,
                chain={"B": 2, "C": 2 * q // d, "M": 2 * phi},
                chain_kind="EB",
            )
        if i == n - 3:
            return _eb("m=2^nq,t even,i=n-3", 4 * q // d, phi, 1)
        return PredictedAut(theorem="no-group", notes=[f"i={i} <= n-4 admits no parameters"])
    theorem = "m=8q,t odd" if n == 3 else "m=2^nq,t odd"
    b = 2 if (2 * t * (s + 1)) % m == 0 else 1
    return _eb(theorem, m // (2 * d), phi, b)


def l2_empty_stratum(m: int) -> list[L2Params]:
    """Genuine points with t even and 1 ≤ i ≤ n−4, which should not exist.

    Runs at the parameter level only, so moduli beyond the brute-force cap
    are fine.
    """
    hits = []
    for p in enumerate_l2_params(m):
        if p.semidirect or p.t % 2:
            continue
        st = l2_strata(m, p.s, p.t)
        if st.q > 1 and 1 <= st.i <= st.n - 4:
            hits.append(p)
    return hits


def _all_matrices(group: MatrixGroup, check) -> Optional[dict]:
    for idx, M in enumerate(group.matrices):
        witness = check(M)
        if witness is not None:
            return {"matrix": idx, **witness}
    return None


def l2_lemma_suite(group: MatrixGroup, p: L2Params) -> ConditionReport:
    """Image and composition constraints every matrix of 𝒜 must meet.

    Condition (vii) is only evaluated where its hypothesis holds: s = 1, or
    Im(β) ⊆ ⟨b²⟩ for the matrix at hand.
    """
    mp = group.mp
    H, K = mp.H, mp.K
    m = p.m

    def delta_image(M):
        r = M.delta(1)
        span = generated_subgroup(K, [r])
        if r % 2 == 0 or not set(M.delta.tbl.tolist()) <= set(span.members):
            return {"r": r}
        return None

    def beta_parity(M):
        be = M.beta.tbl
        l = np.arange(m)
        expected = np.where(l % 2 == 1, be[1], H.identity)
        bad = np.flatnonzero(be != expected)
        return {"l": int(bad[0])} if bad.size else None

    def gamma_image(M):
        bad = np.flatnonzero(M.gamma.tbl % 2)
        return {"h": int(bad[0])} if bad.size else None

    def alpha_aut(M):
        return None if M.alpha.is_bijective() and M.alpha.is_homomorphism() else {"alpha": M.alpha.tbl.tolist()}

    def beta_gamma_zero(M):
        bad = np.flatnonzero(M.beta.tbl[M.gamma.tbl] != H.identity)
        return {"h": int(bad[0])} if bad.size else None

    def gamma_fixes_beta(M):
        be, ga = M.beta.tbl, M.gamma.tbl
        bad = np.argwhere(mp.sigma[ga[:, None], be[None, :]] != be[None, :])
        return {"h": int(bad[0][0]), "k": int(bad[0][1])} if bad.size else None

    def beta_fixes_gamma(M):
        be, ga = M.beta.tbl, M.gamma.tbl
        if not (p.s == 1 or set(be.tolist()) <= {0, 2}):
            return None
        bad = np.argwhere(mp.theta[ga[:, None], be[None, :]] != ga[:, None])
        return {"h": int(bad[0][0]), "k": int(bad[0][1])} if bad.size else None

    checks = [
        ("Im(delta)<=<a^r>,r odd", delta_image),
        ("beta(a^l) by parity of l", beta_parity),
        ("Im(gamma)<=<a^2>", gamma_image),
        ("alpha in Aut(H)", alpha_aut),
        ("beta.gamma=0", beta_gamma_zero),
        ("gamma(h).beta(k)=beta(k)", gamma_fixes_beta),
        ("gamma(h)^beta(k)=gamma(h) (conditional)", beta_fixes_gamma),
    ]
    results = []
    for name, check in checks:
        witness = _all_matrices(group, check)
        results.append(ConditionResult(condition=name, passed=witness is None, witness=witness))
    results.append(beta_image_dichotomy(group, p))
    return ConditionReport(subject=f"l2-lemmas(m={p.m},s={p.s},t={p.t})", results=results)


def beta_image_dichotomy(group: MatrixGroup, p: L2Params) -> ConditionResult:
    """β ∈ Q is a homomorphism into ⟨b²⟩, and the union of the images is
    ⟨b²⟩ exactly when 2t(1+s) ≡ 0 (mod m) and gcd(s+1, m/2) ≠ 1."""
    mp = group.mp
    image: set[int] = set()
    for idx, M in enumerate(group.matrices):
        if not in_Q(M.beta.tbl, mp):
            continue
        values = set(M.beta.tbl.tolist())
        if not M.beta.is_homomorphism() or not values <= {0, 2}:
            return ConditionResult(condition="Im(beta) dichotomy", passed=False, witness={"matrix": idx})
        image |= values
    expected_full = (2 * p.t * (1 + p.s)) % p.m == 0 and gcd(p.s + 1, p.m // 2) != 1
    passed = (image == {0, 2}) == expected_full
    return ConditionResult(
        condition="Im(beta) dichotomy",
        passed=passed,
        witness=None if passed else {"image": sorted(image), "expected_full": expected_full},
    )

"""The family M₃ = Z_{p²} ⋈ Z_m for an odd prime p dividing m.

H = ⟨b⟩ ≅ Z_{p²}, K = ⟨a⟩ ≅ Z_m with a·b = b^t and a^b = a^{pr+1}, where
t = 1 + λp and

    G1  gcd(λ, p) = 1
    G2  gcd(r, p) = 1
    G3  p(pr+1)^p ≡ p   (mod m)
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Optional

import numpy as np
from sympy import isprime, totient

from .aut_engine import MatrixGroup
from .errors import FamilyInapplicableError, FamilyParamError, FormulaConsistencyError
from .families import compute_family, in_P, in_Q, in_S
from .group_core import cyclic_group
from .matched_pair import MatchedPair, SemidirectKind, extend_actions, is_semidirect
from .schemas import ConditionReport, ConditionResult, M3Prediction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class M3Params:
    p: int
    m: int
    r: int
    lam: int

    @property
    def t(self) -> int:
        return (1 + self.lam * self.p) % (self.p * self.p)

    @property
    def u(self) -> int:
        """pr + 1, the exponent of a^b."""
        return self.p * self.r + 1

    def as_dict(self) -> dict[str, int]:
        return {"p": self.p, "m": self.m, "r": self.r, "lambda": self.lam, "t": self.t}


def require_m3_family(p: int, m: int) -> None:
    """Raise FamilyInapplicableError unless p is an odd prime dividing m."""
    if p < 3 or not isprime(p):
        raise FamilyInapplicableError(f"M3 needs an odd prime p, got {p}")
    if m < 1 or m % p:
        raise FamilyInapplicableError(f"M3 needs p | m, got p={p}, m={m}")


def check_m3_conditions(p: int, m: int, r: int, lam: int) -> dict[str, bool]:
    require_m3_family(p, m)
    return {
        "G1": gcd(lam, p) == 1,
        "G2": gcd(r, p) == 1,
        "G3": (p * pow(p * r + 1, p, m)) % m == p % m,
    }


def enumerate_m3_params(p: int, m: int) -> list[M3Params]:
    """All r in [0, m) and λ in [1, p) meeting G1..G3, in (r, λ) order.

    Raises:
        FamilyInapplicableError: p is not an odd prime or does not divide m.
    """
    require_m3_family(p, m)
    points = []
    for r in range(m):
        if gcd(r, p) != 1 or (p * pow(p * r + 1, p, m)) % m != p % m:
            continue
        points.extend(M3Params(p, m, r, lam) for lam in range(1, p))
    logger.debug("p=%d, m=%d: %d admissible (r, lambda) pairs", p, m, len(points))
    return points


def _validate(q: M3Params) -> None:
    conds = check_m3_conditions(q.p, q.m, q.r, q.lam)
    failed = [name for name, ok in conds.items() if not ok]
    if failed:
        raise FamilyParamError(
            f"{q.as_dict()} violates {', '.join(failed)}",
            witness={"condition": failed[0], **q.as_dict()},
        )


def m3_action_tables(q: M3Params) -> tuple[np.ndarray, np.ndarray]:
    """σ and θ from their closed forms.

        a^l·b^j     = b^{j t^l}                              (mod p²)
        (a^l)^{b^j} = a^{j l(l−1)/2 (w−1) + l u^j}           (mod m)

    with u = pr+1 and w = u^{λp}.
    """
    p, m = q.p, q.m
    p2 = p * p
    l = np.arange(m, dtype=np.int64)
    j = np.arange(p2, dtype=np.int64)
    t_pow = np.array([pow(q.t, int(x), p2) for x in l], dtype=np.int64)
    sigma = (j[None, :] * t_pow[:, None]) % p2

    w = pow(q.u, q.lam * p, m)
    u_pow = np.array([pow(q.u, int(x), m) for x in j], dtype=np.int64)
    tri = (l * (l - 1) // 2) % m
    theta = (j[None, :] * ((tri * (w - 1)) % m)[:, None] + l[:, None] * u_pow[None, :]) % m
    return sigma, theta


def build_m3(q: M3Params) -> MatchedPair:
    """Matched pair for M₃(p, m, r, λ).

    Raises:
        FamilyInapplicableError: p not an odd prime dividing m.
        FamilyParamError: parameters violate G1..G3.
        FormulaConsistencyError: closed forms disagree with the generator
            extension through C5 and C6.
    """
    _validate(q)
    H = cyclic_group(q.p * q.p, "b")
    K = cyclic_group(q.m, "a")
    sigma, theta = m3_action_tables(q)
    ext_sigma, ext_theta = extend_actions(H, K, 1, sigma[:, 1], theta[:, 1])
    for name, closed, extended in (("sigma", sigma, ext_sigma), ("theta", theta, ext_theta)):
        bad = np.argwhere(closed != extended)
        if bad.size:
            k, h = (int(v) for v in bad[0])
            raise FormulaConsistencyError(
                f"closed-form {name} disagrees with generator extension",
                witness={"table": name, "k": k, "h": h, **q.as_dict()},
            )
    return MatchedPair.from_tables(H, K, sigma, theta)


def _trivial_powers(q: M3Params) -> list[int]:
    """l in 1..p−1 with (pr+1)^{pl} ≡ 1 (mod m)."""
    return [l for l in range(1, q.p) if pow(q.u, q.p * l, q.m) == 1 % q.m]


def m3_middle_stratum(q: M3Params) -> bool:
    """Some but not all of the powers (pr+1)^{pl}, 0 < l < p, are trivial mod m."""
    hits = _trivial_powers(q)
    return 0 < len(hits) < q.p - 1


def lemma_hypothesis(q: M3Params) -> bool:
    """No power (pr+1)^{pl} with 0 < l < p is trivial mod m."""
    return not _trivial_powers(q)


def predicted_aut_m3(q: M3Params, mp: Optional[MatchedPair] = None) -> M3Prediction:
    """Predicted |Aut(G)| and its factor orders.

    Branch ``u^p=1`` when (pr+1)^p ≡ 1 (mod m), order p²mφ(m)/(p−1);
    otherwise order pmφ(m)/(p−1) with the C part shrunk to m/p.

    Raises:
        FamilyParamError: parameters violate G1..G3.
        FamilyInapplicableError: the built pair is semidirect.
    """
    _validate(q)
    mp = mp if mp is not None else build_m3(q)
    kind = is_semidirect(mp)
    if kind is not SemidirectKind.GENUINE:
        raise FamilyInapplicableError(f"{q.as_dict()} gives a {kind.value} product", witness=q.as_dict())

    p, m = q.p, q.m
    d_part = int(totient(m)) // (p - 1)
    notes = []
    if pow(q.u, p, m) == 1 % m:
        branch, c_part = "u^p=1", m
    else:
        branch, c_part = "u^p!=1", m // p
    middle = m3_middle_stratum(q)
    if middle:
        notes.append("some but not all powers (pr+1)^{pl} are trivial")
    factors = {"A": p, "D": d_part, "C": c_part, "B": p}
    return M3Prediction(
        branch=branch,
        order=p * d_part * c_part * p,
        factors=factors,
        middle_stratum=middle,
        notes=notes,
    )


def _first_bad(mask: np.ndarray, names: tuple[str, ...]):
    bad = np.argwhere(~mask)
    return {n: int(v) for n, v in zip(names, bad[0])} if bad.size else None


def m3_lemma_suite(group: MatrixGroup, q: M3Params) -> ConditionReport:
    """Image constraints on the enumerated matrices.

    The γ-image and α-bijectivity statements, and the β ∈ Q statements on
    compositions, are evaluated only when no power (pr+1)^{pl} (0 < l < p) is
    trivial mod m. The remaining β ∈ Q statements are evaluated for every
    matrix whose β lies in Q.
    """
    mp = group.mp
    H, K = mp.H, mp.K
    p, m = q.p, q.m
    hyp = lemma_hypothesis(q)
    found: dict[str, dict] = {}

    def record(name, witness):
        if witness is not None and name not in found:
            found[name] = witness

    names = [
        "beta in Hom(K,H), Im(beta)<=<b^p>",
        "l(pr+1)^j = l for beta(a)=b^j",
        "gamma(h).beta(k)=beta(k), gamma(h)^beta(k)=gamma(h)",
    ]
    if hyp:
        names = [
            "Im(gamma)<=<a^p>",
            "alpha in Aut(H)",
        ] + names + [
            "gamma.beta=0",
            "gamma.beta+delta in Aut(K) and S",
            "beta.gamma in Hom(H,H)",
            "alpha+beta.gamma in Aut(H) and P",
        ]

    for idx, M in enumerate(group.matrices):
        al, be, ga, de = M.alpha.tbl, M.beta.tbl, M.gamma.tbl, M.delta.tbl
        if hyp:
            if (ga % p).any():
                record("Im(gamma)<=<a^p>", {"matrix": idx})
            if not (M.alpha.is_bijective() and M.alpha.is_homomorphism()):
                record("alpha in Aut(H)", {"matrix": idx})
        if not in_Q(be, mp):
            continue
        if not M.beta.is_homomorphism() or (be % p).any():
            record("beta in Hom(K,H), Im(beta)<=<b^p>", {"matrix": idx})
        j = int(be[1])
        if (pow(q.u, j, m) - 1) % m:
            record("l(pr+1)^j = l for beta(a)=b^j", {"matrix": idx, "j": j})
        fix_b = mp.sigma[ga[:, None], be[None, :]] == be[None, :]
        fix_g = mp.theta[ga[:, None], be[None, :]] == ga[:, None]
        w = _first_bad(fix_b & fix_g, ("h", "k"))
        if w:
            record("gamma(h).beta(k)=beta(k), gamma(h)^beta(k)=gamma(h)", {"matrix": idx, **w})
        if not hyp:
            continue
        gb = ga[be]
        if (gb != K.identity).any():
            record("gamma.beta=0", {"matrix": idx})
        gbd = K.mul[gb, de]
        if not in_S(gbd, mp):
            record("gamma.beta+delta in Aut(K) and S", {"matrix": idx})
        bg = be[ga]
        if not (bg[H.mul] == H.mul[bg[:, None], bg[None, :]]).all():
            record("beta.gamma in Hom(H,H)", {"matrix": idx})
        if not in_P(H.mul[al, bg], mp):
            record("alpha+beta.gamma in Aut(H) and P", {"matrix": idx})

    results = [ConditionResult(condition=n, passed=n not in found, witness=found.get(n)) for n in names]
    results.extend(m3_exponent_constraints(group, q))
    return ConditionReport(subject=f"m3-lemmas({q.as_dict()})", results=results)


def m3_exponent_constraints(group: MatrixGroup, q: M3Params, members: Optional[list[int]] = None) -> list[ConditionResult]:
    """s ≡ 1 and i ≡ 1 (mod p) for δ(a) = a^s and α(b) = b^i.

    Evaluated over ``members`` (default: the E family).
    """
    if members is None:
        members = compute_family("E", group).members
    p = q.p
    out = []
    for name, attr in (("s=1 mod p", "delta"), ("i=1 mod p", "alpha")):
        bad = next((i for i in members if getattr(group.matrices[i], attr)(1) % p != 1), None)
        out.append(
            ConditionResult(
                condition=name,
                passed=bad is None,
                witness=None if bad is None else {"matrix": bad, "exponent": getattr(group.matrices[bad], attr)(1)},
            )
        )
    return out

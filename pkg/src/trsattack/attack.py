"""Key recovery from a twisted-RS public key, in four stages:

1. subfield subcode of the public code, then its Schur square, which for
   valid parameters is the full Reed-Solomon code RS_{2k-1}; a
   Sidelnikov-Shestakov pass on the square yields locators alpha' that are
   an affine image a*alpha + b of the secret ones;
2. exhaustive search for the shift b, accepting the first b whose
   untwisted-monomial matrix over alpha' - b lies in the subcode;
3. twist coefficients by Lagrange interpolation of public rows over the
   corrected locators, reading each eta from a coefficient ratio;
4. the scrambler by exact left division, verified against the public key.

All stage outputs are exact; any inconsistency raises AttackError with the
failing stage, never a wrong key.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from . import linalg as la
from . import rs, trs
from .linalg import Mat
from .mceliece import PrivateKey, PublicKey
from .rs import Locators


class AttackError(Exception):
    def __init__(self, stage: str, msg: str):
        super().__init__(f"[{stage}] {msg}")
        self.stage = stage


class NotRSCodeError(AttackError):
    """The locator-recovery input failed a Reed-Solomon structure check."""

    def __init__(self, msg: str):
        super().__init__("sidelnikov-shestakov", msg)


def sidelnikov_shestakov(M: Mat, K_dim: int) -> Locators:
    """Locators alpha' with rowspace(M) == RS_{K_dim}[alpha'].

    Requires 3 <= K_dim <= n-2 and M generating an RS code over the base
    subfield.  The output is normalized to alpha'_1 = 0, alpha'_2 = 1, so it
    equals a*alpha + b*1 for the (unknown) generating locators alpha.
    Verification against the input rowspace is part of the contract; inputs
    that are not RS codes raise NotRSCodeError.
    """
    tower = M.tower
    if M.level != 0:
        raise ValueError("locator recovery expects a base-subfield matrix")
    n = M.cols
    if not 3 <= K_dim <= n - 2:
        raise ValueError("need 3 <= K <= n-2")
    ctx = tower.ctx(0)
    N = ctx.to_native(M.a)
    piv = np.zeros(min(M.rows, n), dtype=np.int64)
    rk = int(K.rref(N, piv, *ctx.kargs))
    if rk != K_dim:
        raise NotRSCodeError(f"rank {rk} differs from expected dimension {K_dim}")
    if [int(p) for p in piv[:rk]] != list(range(K_dim)):
        raise NotRSCodeError("no systematic form on the first K columns")
    A = N[:K_dim, K_dim:]
    nc = n - K_dim
    if int(np.count_nonzero(A)) != K_dim * nc:
        raise NotRSCodeError("systematic part has zero entries")

    mul, inv = ctx.mul, ctx.inv
    R = [mul(int(A[0, j]), inv(int(A[1, j]))) for j in range(nc)]
    if len(set(R)) != nc:
        raise NotRSCodeError("row-ratio values are not pairwise distinct")
    Rset = set(R)

    # affine fits of row ratios against rows 3..K: S^i = Ai * R + Bi
    dR01 = inv(R[0] ^ R[1])
    fits = []
    for i in range(2, K_dim):
        S0 = mul(int(A[0, 0]), inv(int(A[i, 0])))
        S1 = mul(int(A[0, 1]), inv(int(A[i, 1])))
        Ai = mul(S0 ^ S1, dR01)
        Bi = S0 ^ mul(Ai, R[0])
        if Ai == 0 or Bi == 0:
            raise NotRSCodeError("degenerate ratio fit")
        for j in range(2, nc):
            Sj = mul(int(A[0, j]), inv(int(A[i, j])))
            if Sj != mul(Ai, R[j]) ^ Bi:
                raise NotRSCodeError("row ratios are not degree-1 rational")
        fits.append((Ai, Bi))

    # The one remaining unknown is the constant c = kappa in
    # R_j = kappa (a_j - 1)/a_j; every candidate determines all locators, and
    # only the true one reproduces the systematic values of row 1.
    tops, nats = tower.subfield_pairs(0)
    for idx in range(len(nats)):
        kappa = int(nats[idx])
        if kappa == 0 or kappa in Rset:
            continue
        locs_tail = [mul(kappa, inv(kappa ^ Rj)) for Rj in R]
        head = [0, 1]
        ok = True
        for Ai, Bi in fits:
            den = Bi ^ mul(Ai, kappa)
            if den == 0:
                ok = False
                break
            head.append(mul(mul(Ai, kappa), inv(den)))
        if not ok:
            continue
        # value consistency of row 1: A[0, j] = c1 * prod_{s>=2}(a_j - a_s)
        def row1_prod(aj: int) -> int:
            acc = 1
            for s in range(1, K_dim):
                d = aj ^ head[s]
                if d == 0:
                    return 0
                acc = mul(acc, d)
            return acc
        p0 = row1_prod(locs_tail[0])
        if p0 == 0:
            continue
        c1 = mul(int(A[0, 0]), inv(p0))
        for j in range(1, nc):
            pj = row1_prod(locs_tail[j])
            if pj == 0 or mul(c1, pj) != int(A[0, j]):
                ok = False
                break
        if not ok:
            continue
        cand = head + locs_tail
        if len(set(cand)) != n:
            continue
        # final contract check: identical rowspace
        alpha_top = [ctx.scalar_from_native(x) for x in cand]
        out = Locators(tower, alpha_top)
        V = ctx.to_native(rs.rs_generator(out, K_dim).a)
        piv2 = np.zeros(K_dim, dtype=np.int64)
        rk2 = int(K.rref(V, piv2, *ctx.kargs))
        if rk2 == K_dim and bool(np.array_equal(V, N[:K_dim])):
            return out
    raise NotRSCodeError("no locator assignment reproduces the rowspace")


def recover_locators_affine(pub: PublicKey) -> tuple[Locators, Mat]:
    """Stage 1: subfield subcode, Schur square, locator recovery."""
    p = pub.params
    if (2 * p.l + 3) ** 2 > p.n:
        raise AttackError("subfield",
                          "twist count violates l <= (sqrt(n) - 3)/2")
    G_sub = rs.subfield_subcode(pub.G)
    if G_sub.rows != p.k - p.l:
        raise AttackError(
            "subfield",
            f"subcode dimension {G_sub.rows}, expected {p.k - p.l}")
    G_sq = rs.schur_square(G_sub)
    if G_sq.rows != 2 * p.k - 1:
        raise AttackError(
            "square", f"square rank {G_sq.rows}, expected {2 * p.k - 1}")
    alpha_prime = sidelnikov_shestakov(G_sq, 2 * p.k - 1)
    return alpha_prime, G_sub


def find_shift(alpha_prime: Locators, G_sub: Mat, params: trs.TrsParams,
               mode: str = "subcode", G_pub: Mat | None = None
               ) -> tuple[Locators, int, int]:
    """Stage 2: scan b over the base field in encoding order; accept the
    first b whose untwisted-monomial matrix over alpha' - b*1 is contained
    in the subcode (mode "subcode", the default) or in the public code
    (mode "public").  Returns (alpha_hat, b, number_of_accepting_b)."""
    tower = alpha_prime.tower
    p = params
    # exponents ordered to reject wrong shifts early: the upper block of the
    # untwisted set is the discriminating one, low powers always pass
    I2 = [i for i in p.I if i >= p.r + p.l] if p.strict else list(p.I)
    I1 = [i for i in p.I if i not in set(I2)]
    exps = np.array(I2 + I1, dtype=np.int64)

    tops, nats = tower.subfield_pairs(0)
    accepted: list[int] = []
    if mode == "subcode":
        ctx = tower.ctx(0)
        ker = la.right_kernel(G_sub)
        KT = ctx.to_native(ker.a)
        a_nat = ctx.to_native(alpha_prime.alpha)
        for idx in range(len(nats)):
            cand = a_nat ^ nats[idx]
            if K.gensub_is_contained(cand, exps, KT, *ctx.kargs):
                accepted.append(int(tops[idx]))
    elif mode == "public":
        if G_pub is None:
            raise ValueError("public-containment mode needs the public matrix")
        ctx = tower.ctx(tower.levels)
        ker = la.right_kernel(G_pub)
        KT = ctx.to_native(ker.a)
        a_nat = ctx.to_native(alpha_prime.alpha)
        for idx in range(len(tops)):
            cand = a_nat ^ np.uint64(ctx.scalar_to_native(int(tops[idx])))
            if K.gensub_is_contained(cand, exps, KT, *ctx.kargs):
                accepted.append(int(tops[idx]))
    else:
        raise ValueError(f"unknown containment mode {mode!r}")

    if not accepted:
        raise AttackError("shift", "no shift value passes the containment test")
    b = accepted[0]
    alpha_hat = Locators(tower, [int(x) ^ b for x in alpha_prime.alpha])
    return alpha_hat, b, len(accepted)


def recover_eta(pub: PublicKey, alpha_hat: Locators) -> tuple[int, ...]:
    """Stage 3: interpolate public rows over alpha_hat; each twist
    coefficient is the ratio of the X^(k-1+t_j) and X^(h_j) coefficients of
    the first row whose hook coefficient is nonzero."""
    p = pub.params
    tower = alpha_hat.tower
    unresolved = set(range(p.l))
    eta = [0] * p.l
    for i in range(p.k):
        P = rs.interpolate(alpha_hat, pub.G.a[i])
        for j in sorted(unresolved):
            ph = P[p.h[j]] if p.h[j] < len(P) else 0
            if ph:
                pt = P[p.k - 1 + p.t[j]] if p.k - 1 + p.t[j] < len(P) else 0
                eta[j] = tower.div(int(pt), int(ph))
                unresolved.discard(j)
        if not unresolved:
            break
    if unresolved:
        raise AttackError(
            "eta", f"twist coefficients {sorted(unresolved)} never exposed "
            "a nonzero hook coefficient")
    return tuple(eta)


def recover_S(pub: PublicKey, alpha_hat: Locators,
              eta_hat: tuple[int, ...]) -> tuple[Mat, trs.TrsKey]:
    """Stage 4: S_hat with S_hat @ G_trs(alpha_hat, eta_hat) == G_pub."""
    p = pub.params
    try:
        key = trs.TrsKey(p, alpha_hat, eta_hat)
    except trs.ParameterError as exc:
        raise AttackError("solve", f"recovered key invalid: {exc}") from exc
    G_hat = trs.trs_generator(key)
    try:
        S_hat = la.solve_left(G_hat, pub.G)
    except la.NoSolutionError as exc:
        raise AttackError("solve", str(exc)) from exc
    if not la.mat_equal(la.matmul(S_hat, G_hat), pub.G):
        raise AttackError("solve", "exact reproduction check failed")
    if la.rank(S_hat) != p.k:
        raise AttackError("solve", "recovered scrambler is singular")
    return S_hat, key


@dataclass
class RecoveredKey:
    """Alternative private key: S_hat @ G_trs(alpha_hat, t, h, eta_hat) is
    exactly the public matrix.  alpha_hat = a * alpha for some unknown
    nonzero a (the whole scaling class is equivalent); alpha_prime and b
    are the stage-1/2 intermediates kept for audit."""

    params: trs.TrsParams
    S_hat: Mat
    alpha_hat: Locators
    eta_hat: tuple[int, ...]
    b: int
    alpha_prime: Locators
    key: trs.TrsKey
    timings_us: dict[str, int] = field(default_factory=dict)
    shift_accepts: int = 1

    def private_key(self) -> PrivateKey:
        return PrivateKey(self.params, self.S_hat, self.key)


def recover_key(pub: PublicKey) -> RecoveredKey:
    """Run all four stages and verify the result; per-stage wall times in
    microseconds are recorded in timings_us."""
    p = pub.params
    if not p.strict:
        raise AttackError("input", "attack expects strict parameters")
    times: dict[str, int] = {}

    def clock(name, fn, *args, **kw):
        t0 = time.perf_counter_ns()
        out = fn(*args, **kw)
        times[name] = (time.perf_counter_ns() - t0) // 1000
        return out

    if (2 * p.l + 3) ** 2 > p.n:
        raise AttackError("subfield",
                          "twist count violates l <= (sqrt(n) - 3)/2")
    G_sub = clock("subfield", rs.subfield_subcode, pub.G)
    if G_sub.rows != p.k - p.l:
        raise AttackError(
            "subfield", f"subcode dimension {G_sub.rows}, expected {p.k - p.l}")
    G_sq = clock("square", rs.schur_square, G_sub)
    if G_sq.rows != 2 * p.k - 1:
        raise AttackError(
            "square", f"square rank {G_sq.rows}, expected {2 * p.k - 1}")
    alpha_prime = clock("sidelnikov", sidelnikov_shestakov, G_sq, 2 * p.k - 1)
    alpha_hat, b, naccept = clock("shift", find_shift, alpha_prime, G_sub, p)
    eta_hat = clock("eta", recover_eta, pub, alpha_hat)
    S_hat, key = clock("solve", recover_S, pub, alpha_hat, eta_hat)
    return RecoveredKey(p, S_hat, alpha_hat, eta_hat, b, alpha_prime, key,
                        times, naccept)

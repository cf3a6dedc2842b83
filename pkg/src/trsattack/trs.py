"""Twisted Reed-Solomon codes: parameter validation, encoding, generator
matrices, the scaling equivalence, and the guess-based decoder.

Strict parameters satisfy every setup inequality (square-root comparisons
are done exactly in integers by squaring); the relaxed constructor keeps
only the basic hook/twist range checks so tiny instances can be built for
exhaustive oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels as K
from . import linalg as la
from . import rs
from .fields import FieldTower, tower_create
from .linalg import Mat
from .rs import DecodingFailure, Locators


class ParameterError(Exception):
    """Construction attempted from invalid parameters."""


def _is_pow2(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


@dataclass(frozen=True)
class TrsParams:
    """Public system parameters.  t and h are 1-based lists in the usual
    presentation; here they are plain tuples (index j-1 is twist/hook j)."""

    q0: int
    n: int
    k: int
    l: int
    r: int
    t: tuple[int, ...]
    h: tuple[int, ...]
    strict: bool = True

    @cached_property
    def I(self) -> tuple[int, ...]:
        hooks = set(self.h)
        return tuple(i for i in range(self.k) if i not in hooks)

    @property
    def radius(self) -> int:
        return (self.n - self.k) // 2

    @property
    def m0(self) -> int:
        return self.q0.bit_length() - 1

    @property
    def top_degree(self) -> int:
        return self.m0 << self.l

    def tower(self) -> FieldTower:
        return tower_create(self.m0, self.l)


def validate_params(q0: int, n: int, k: int, l: int):
    """Full setup validation.  Returns a TrsParams on success, otherwise the
    list of violated constraints (violations are data, not exceptions)."""
    v: list[str] = []
    if not (_is_pow2(q0) and q0 >= 4):
        v.append("q0 must be a power of two, at least 4")
        return v
    if not k < n:
        v.append("k < n")
    if not n <= q0 - 1:
        v.append("n <= q0 - 1")
    if not (k > 6 and 4 * n < (k - 6) ** 2):
        v.append("2*sqrt(n) + 6 < k")
    if not 2 * k + 4 <= n:
        v.append("k <= n/2 - 2")
    if not l >= 1:
        v.append("l >= 1")
    else:
        # (n+1)/(k - sqrt(n)) < l+2, which needs k > sqrt(n)
        if not k * k > n:
            v.append("k > sqrt(n)")
        else:
            rhs = (l + 2) * k - (n + 1)
            if not (rhs >= 1 and (l + 2) ** 2 * n < rhs * rhs):
                v.append("(n+1)/(k - sqrt(n)) < l + 2")
        if not l < k + 1:
            v.append("l + 2 < k + 3")
        if not k * (l + 2) < 2 * n:
            v.append("l + 2 < 2n/k")
        if not (l + 4) ** 2 < n:
            v.append("l + 2 < sqrt(n) - 2")
    m0 = q0.bit_length() - 1
    if l >= 0 and m0 << max(l, 0) > 128:
        v.append("top field degree m0 * 2^l exceeds 128")
    if v:
        return v

    r = -(-(n + 1) // (l + 2)) + 2
    t = tuple((i + 1) * (r - 2) - k + 2 for i in range(1, l + 1))
    h = tuple(r - 1 + i for i in range(1, l + 1))
    for ti in t:
        if not 1 <= ti <= n - k:
            v.append(f"twist {ti} outside 1..n-k")
    if len(set(t)) != l:
        v.append("twists not pairwise distinct")
    for hi in h:
        if not 0 <= hi <= k - 1:
            v.append(f"hook {hi} outside 0..k-1")
    if len(set(h)) != l:
        v.append("hooks not pairwise distinct")
    if v:
        return v
    p = TrsParams(q0, n, k, l, r, t, h, strict=True)
    expect = tuple(range(r)) + tuple(range(r + l, k))
    assert p.I == expect, "exponent set does not split as {0..r-1} u {r+l..k-1}"
    return p


def make_params(q0: int, n: int, k: int, l: int) -> TrsParams:
    res = validate_params(q0, n, k, l)
    if isinstance(res, list):
        raise ParameterError("; ".join(res))
    return res


def relaxed_params(q0: int, n: int, k: int, t, h) -> TrsParams:
    """Definition-level construction only: hook/twist ranges and distinctness,
    n <= q0.  Bypasses the setup inequalities (tiny-instance test mode)."""
    if not (_is_pow2(q0) and q0 >= 4):
        raise ParameterError("q0 must be a power of two, at least 4")
    if not 1 <= k <= n <= q0:
        raise ParameterError("need 1 <= k <= n <= q0")
    t = tuple(int(x) for x in t)
    h = tuple(int(x) for x in h)
    if len(t) != len(h):
        raise ParameterError("twist and hook vectors must have equal length")
    l = len(t)
    if len(set(t)) != l or any(not 1 <= ti <= n - k for ti in t):
        raise ParameterError("twists must be distinct in 1..n-k")
    if len(set(h)) != l or any(not 0 <= hi <= k - 1 for hi in h):
        raise ParameterError("hooks must be distinct in 0..k-1")
    if list(h) != sorted(h):
        raise ParameterError("hooks must be increasing")
    return TrsParams(q0, n, k, l, 0, t, h, strict=False)


@dataclass
class TrsKey:
    """Code description: parameters, locators and twist coefficients."""

    params: TrsParams
    locs: Locators
    eta: tuple[int, ...]

    def __post_init__(self):
        p = self.params
        tower = self.locs.tower
        if (tower.m0, tower.levels) != (p.m0, p.l):
            raise ParameterError("locators built over the wrong tower")
        if self.locs.n != p.n:
            raise ParameterError("locator count must equal n")
        self.eta = tuple(int(e) for e in self.eta)
        if len(self.eta) != p.l:
            raise ParameterError("need one twist coefficient per twist")
        for i, e in enumerate(self.eta, start=1):
            if e == 0:
                raise ParameterError("twist coefficients must be nonzero")
            if p.strict and not (tower.in_subfield(e, i)
                                 and not tower.in_subfield(e, i - 1)):
                raise ParameterError(
                    f"eta_{i} must lie in F_q{i} outside F_q{i-1}")

    @property
    def tower(self) -> FieldTower:
        return self.locs.tower


def twisted_encode(f, key: TrsKey) -> list[int]:
    """sum f_i X^i + sum eta_j f_{h_j} X^(k-1+t_j) as a coefficient list."""
    p = key.params
    if len(f) != p.k:
        raise ValueError(f"message must have exactly {p.k} coefficients")
    deg_top = p.k - 1 + max(p.t, default=0)
    c = [int(x) for x in f] + [0] * (deg_top + 1 - p.k)
    tower = key.tower
    for j in range(p.l):
        fh = int(f[p.h[j]])
        if fh:
            c[p.k - 1 + p.t[j]] ^= tower.mul(key.eta[j], fh)
    return rs.poly_trim(c)


def trs_generator(key: TrsKey) -> Mat:
    """k x n generator: row i evaluates the twisted monomial of degree i."""
    p = key.params
    tower = key.tower
    ctx = tower.ctx(tower.levels)
    kmax = p.k + max(p.t, default=0)
    if ctx.kernel_ok:
        P = K.power_matrix(ctx.to_native(key.locs.alpha), kmax, *ctx.kargs)
        G = P[: p.k].copy()
        for j in range(p.l):
            G[p.h[j]] ^= K.vec_scale(P[p.k - 1 + p.t[j]],
                                     np.uint64(ctx.scalar_to_native(key.eta[j])),
                                     *ctx.kargs)
        return Mat(tower, tower.levels, ctx.from_native(G))
    alpha = [int(x) for x in key.locs.alpha]
    pw = [1] * p.n
    powers = []
    for _ in range(kmax):
        powers.append(pw)
        pw = [tower.mul(pw[j], alpha[j]) for j in range(p.n)]
    rows = [list(powers[i]) for i in range(p.k)]
    for j in range(p.l):
        tw_row = powers[p.k - 1 + p.t[j]]
        eta = key.eta[j]
        hook = rows[p.h[j]]
        for t in range(p.n):
            hook[t] ^= tower.mul(eta, tw_row[t])
    return la.from_rows(tower, tower.levels, rows)


def scale_key(key: TrsKey, a: int) -> TrsKey:
    """The equivalent key (a*alpha, eta_i * a^-(k-1+t_i-h_i))."""
    a = int(a)
    if a == 0:
        raise ValueError("scaling factor must be nonzero")
    tower = key.tower
    if not tower.in_subfield(a, 0):
        raise ValueError("scaling factor must lie in the base subfield")
    p = key.params
    inv_a = tower.inv(a)
    alpha2 = [tower.mul(a, int(x)) for x in key.locs.alpha]
    eta2 = tuple(tower.mul(key.eta[j],
                           tower.pow(inv_a, p.k - 1 + p.t[j] - p.h[j]))
                 for j in range(p.l))
    return TrsKey(p, Locators(tower, alpha2), eta2)


def _twist_vectors(key: TrsKey) -> list[np.ndarray]:
    p = key.params
    tower = key.tower
    out = []
    for j in range(p.l):
        mono = [0] * (p.k + p.t[j])
        mono[p.k - 1 + p.t[j]] = key.eta[j]
        out.append(rs.evaluate(tower, mono, key.locs))
    return out


def trs_decode(y, key: TrsKey):
    """Brute-force decoder: guess the hook coefficients (g_1, ..., g_l) in
    lexicographic encoding order, strip the twist contribution, decode in
    RS_k, accept when the decoded f has f_{h_j} == g_j for all j."""
    p = key.params
    tower = key.tower
    locs = key.locs
    y = np.asarray(y)
    if y.shape != (p.n,):
        raise ValueError("word length mismatch")
    if p.l == 0:
        f, _ = rs.rs_decode(locs, p.k, y)
        return [int(x) for x in f] + [0] * (p.k - len(f))
    us = _twist_vectors(key)
    cache = locs.decode_cache(p.k)
    ctx = tower.ctx(tower.levels)
    if cache is not None:
        # guesses are enumerated in the kernels' native element encoding;
        # the accepted codeword is unique within the radius, so the result
        # does not depend on the enumeration order.  The first pass uses the
        # probabilistic Chien prefilter, the second is exact, so an overall
        # failure is always an exact verdict.
        _, beta, beta_inv, W = cache
        _, wts = locs.lagrange()
        ya = ctx.to_native(y.astype(np.uint64))
        us_nat = [ctx.to_native(u.astype(np.uint64)) for u in us]
        s0 = K.syndromes(W, ya, *ctx.kargs)
        su = [K.syndromes(W, u, *ctx.kargs) for u in us_nat]
        err = np.empty(p.n, dtype=np.uint64)
        work = np.empty((3, p.radius + 2), dtype=np.uint64)
        for probe in (64, 0):
            for outer in itertools.product(range(tower.q), repeat=p.l - 1):
                sbase = s0.copy()
                shift = ya.copy()
                for gi, si, ui in zip(outer, su[:-1], us_nat[:-1]):
                    if gi:
                        sbase ^= K.vec_scale(si, np.uint64(gi), *ctx.kargs)
                        shift ^= K.vec_scale(ui, np.uint64(gi), *ctx.kargs)
                g_from = 0
                while g_from < tower.q:
                    g = int(K.guess_scan(sbase, su[-1], g_from, tower.q,
                                         p.radius, beta, beta_inv, wts,
                                         probe, *ctx.kargs))
                    if g < 0:
                        break
                    s_g = sbase.copy()
                    if g:
                        s_g ^= K.vec_scale(su[-1], np.uint64(g), *ctx.kargs)
                    cnt = K.syndrome_decode(s_g, p.radius, beta, beta_inv,
                                            wts, err, work, *ctx.kargs)
                    assert cnt >= 0  # the scan just decoded this syndrome
                    word = shift.copy()
                    if g:
                        word ^= K.vec_scale(us_nat[-1], np.uint64(g),
                                            *ctx.kargs)
                    f = rs._interpolate_native(locs, word ^ err)
                    guesses = outer + (g,)
                    if rs.poly_deg(f) <= p.k - 1:
                        fk = [int(x) for x in f] + [0] * (p.k - len(f))
                        if all(fk[p.h[j]] == ctx.scalar_from_native(guesses[j])
                               for j in range(p.l)):
                            return fk
                    g_from = g + 1
            if probe == 0:
                break
        raise DecodingFailure("no consistent twist guess")
    # generic fallback for tiny instances without a fast path
    for guesses in itertools.product(range(tower.q), repeat=p.l):
        word = np.array([int(v) for v in y], dtype=object)
        for g, u in zip(guesses, us):
            if g:
                for i in range(p.n):
                    word[i] = int(word[i]) ^ tower.mul(g, int(u[i]))
        try:
            f, _ = rs.rs_decode(locs, p.k, word)
        except DecodingFailure:
            continue
        fk = [int(x) for x in f] + [0] * (p.k - len(f))
        if all(fk[p.h[j]] == guesses[j] for j in range(p.l)):
            return fk
    raise DecodingFailure("no consistent twist guess")


def exhaustive_min_distance(key: TrsKey) -> int:
    """Exact minimum distance by full codeword enumeration (q^k <= 2^20)."""
    p = key.params
    tower = key.tower
    if tower.q ** p.k > 1 << 20:
        raise ValueError("instance too large for exhaustive enumeration")
    G = trs_generator(key)
    rows = [[int(x) for x in r] for r in G.a]
    best = p.n + 1
    for msg in itertools.product(range(tower.q), repeat=p.k):
        if not any(msg):
            continue
        cw = [0] * p.n
        for mi, row in zip(msg, rows):
            if mi:
                for t in range(p.n):
                    cw[t] ^= tower.mul(mi, row[t])
        wt = sum(1 for x in cw if x)
        if wt < best:
            best = wt
    return best

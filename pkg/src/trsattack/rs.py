"""Reed-Solomon codes: generators, evaluation/interpolation, unique decoding
up to floor((n-k)/2), Schur squares, and subfield subcodes.

Decoding has two independent paths that must agree bit-exactly:

- ``berlekamp-welch``: one homogeneous linear system E(a_i) y_i = Q(a_i)
  solved with the generic kernel routine; trivially auditable, used as the
  reference.
- ``euclid``: syndrome key equation solved by the extended Euclidean
  algorithm, Chien search and Forney values; this is the fast path the
  brute-force twisted decoder hammers.  Locators containing 0 are handled
  by decoding against shifted locators beta = alpha + c (the dual weights
  are shift-invariant) and shifting the message polynomial back.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from . import linalg as la
from .fields import FieldTower
from .linalg import Mat


class DecodingFailure(Exception):
    """No codeword within the unique decoding radius."""


# ----------------------------------------------------------------------
# polynomials as coefficient lists (index i = coefficient of X^i)

def poly_trim(c: list[int]) -> list[int]:
    i = len(c)
    while i > 0 and not c[i - 1]:
        i -= 1
    return list(c[:i])


def poly_deg(c) -> int:
    i = len(c)
    while i > 0 and not c[i - 1]:
        i -= 1
    return i - 1


def poly_eval(tower: FieldTower, c, x: int) -> int:
    acc = 0
    for t in range(len(c) - 1, -1, -1):
        acc = tower.mul(acc, x) ^ int(c[t])
    return acc


def poly_add(a, b) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] ^= int(v)
    for i, v in enumerate(b):
        out[i] ^= int(v)
    return poly_trim(out)


def poly_mul(tower: FieldTower, a, b) -> list[int]:
    a = poly_trim(a)
    b = poly_trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] ^= tower.mul(x, y)
    return out


def poly_divmod(tower: FieldTower, a, b) -> tuple[list[int], list[int]]:
    a = poly_trim(a)
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    r = list(a)
    q = [0] * (len(a) - len(b) + 1)
    ilead = tower.inv(b[-1])
    for sh in range(len(a) - len(b), -1, -1):
        c = tower.mul(r[sh + len(b) - 1], ilead)
        if c:
            q[sh] = c
            for t, bv in enumerate(b):
                if bv:
                    r[sh + t] ^= tower.mul(c, bv)
    return q, poly_trim(r)


def poly_shift(tower: FieldTower, f, c: int) -> list[int]:
    """f(X + c) by repeated synthetic division."""
    g = list(poly_trim(f))
    n = len(g)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            g[j] ^= tower.mul(c, g[j + 1])
    return g


def hamming_weight(v) -> int:
    return int(np.count_nonzero(np.asarray(v)))


# ----------------------------------------------------------------------

class Locators:
    """Pairwise-distinct evaluation points, all at tower level 0."""

    def __init__(self, tower: FieldTower, alpha):
        pts = [int(x) for x in alpha]
        n = len(pts)
        if n < 1:
            raise ValueError("need at least one locator")
        if n > tower.q0:
            raise ValueError(f"{n} locators exceed subfield size {tower.q0}")
        if len(set(pts)) != n:
            raise ValueError("locators must be pairwise distinct")
        for x in pts:
            if not tower.in_subfield(x, 0):
                raise ValueError("locators must lie in the base subfield")
        self.tower = tower
        self.n = n
        dt = np.uint64 if tower.m <= 63 else object
        self.alpha = np.array(pts, dtype=dt)
        self._lag = None
        self._dec: dict[int, tuple] = {}

    def __len__(self):
        return self.n

    def lagrange(self):
        """(Q, w) in kernel-native encoding: interpolation of native values y
        is y @ Q; w are the dual weights."""
        if self._lag is None:
            ctx = self.tower.ctx(self.tower.levels)
            if ctx.kernel_ok:
                self._lag = K.lagrange_build(ctx.to_native(self.alpha),
                                             *ctx.kargs)
            else:
                self._lag = _lagrange_obj(self.tower, self.alpha)
        return self._lag

    def decode_cache(self, k: int):
        """Shifted locators, their inverses and the syndrome matrix for k,
        all in kernel-native encoding.

        Returns None when the fast path is unavailable (no free shift value
        or the tower is too large for the kernels).
        """
        if k in self._dec:
            return self._dec[k]
        tower = self.tower
        ctx = tower.ctx(tower.levels)
        res = None
        if ctx.kernel_ok and k < self.n:
            used = {int(x) for x in self.alpha}
            c = next((s for s in tower.subfield_elements(0) if s not in used),
                     None)
            if c is not None:
                beta = ctx.to_native(self.alpha) \
                    ^ np.uint64(ctx.scalar_to_native(c))
                _, w = self.lagrange()
                beta_inv = np.array([ctx.inv(int(b)) for b in beta],
                                    dtype=np.uint64)
                W = K.dual_syndrome_matrix(beta, w, self.n - k, *ctx.kargs)
                res = (int(c), beta, beta_inv, W)
        self._dec[k] = res
        return res


def _lagrange_obj(tower: FieldTower, alpha):
    n = len(alpha)
    t = tower
    master = [1]
    for a in alpha:
        a = int(a)
        nxt = [0] * (len(master) + 1)
        for i, c in enumerate(master):
            nxt[i + 1] ^= c
            nxt[i] ^= t.mul(c, a)
        master = nxt
    Q = np.empty((n, n), dtype=object)
    w = np.empty(n, dtype=object)
    for i in range(n):
        a = int(alpha[i])
        q = [0] * n
        q[n - 1] = master[n]
        for j in range(n - 2, -1, -1):
            q[j] = master[j + 1] ^ t.mul(a, q[j + 1])
        wi = t.inv(poly_eval(t, q, a))
        w[i] = wi
        for j in range(n):
            Q[i, j] = t.mul(wi, q[j])
    return Q, w


# ----------------------------------------------------------------------

def rs_generator(locs: Locators, k: int) -> Mat:
    """k x n generator with row i = (a_1^i, ..., a_n^i), at level 0."""
    if not 1 <= k <= locs.n:
        raise ValueError(f"dimension k={k} out of range 1..{locs.n}")
    return monomial_matrix(locs, list(range(k)))


def monomial_matrix(locs: Locators, exps) -> Mat:
    """Rows alpha^e for e in exps (a GenSub-style matrix), at level 0."""
    tower = locs.tower
    ctx = tower.ctx(tower.levels)
    if ctx.kernel_ok:
        e = np.array(list(exps), dtype=np.int64)
        out = K.monomial_rows(ctx.to_native(locs.alpha), e, *ctx.kargs)
        return Mat(tower, 0, ctx.from_native(out))
    out = np.empty((len(exps), locs.n), dtype=object)
    for r, e in enumerate(exps):
        for j in range(locs.n):
            out[r, j] = tower.pow(int(locs.alpha[j]), int(e))
    return Mat(tower, 0, out)


def evaluate(tower: FieldTower, f, locs: Locators) -> np.ndarray:
    """(f(a_1), ..., f(a_n)) for a coefficient list f."""
    ctx = tower.ctx(tower.levels)
    fc = poly_trim(f)
    if not fc:
        return np.zeros(locs.n, dtype=np.uint64 if ctx.kernel_ok else object)
    if ctx.kernel_ok:
        c = ctx.to_native(np.array(fc, dtype=np.uint64))
        out = K.horner_many(c, ctx.to_native(locs.alpha), *ctx.kargs)
        return ctx.from_native(out)
    out = np.empty(locs.n, dtype=object)
    for j in range(locs.n):
        out[j] = poly_eval(tower, fc, int(locs.alpha[j]))
    return out


def _interpolate_native(locs: Locators, ya: np.ndarray) -> list[int]:
    """Interpolation of a native-encoded value vector, as top coefficients."""
    ctx = locs.tower.ctx(locs.tower.levels)
    Q, _ = locs.lagrange()
    out = np.zeros((1, locs.n), dtype=np.uint64)
    K.matmul(ya.reshape(1, -1), Q, out, *ctx.kargs)
    return poly_trim([int(v) for v in ctx.from_native(out[0])])


def interpolate(locs: Locators, y) -> list[int]:
    """The unique polynomial of degree < n through (a_i, y_i)."""
    tower = locs.tower
    if len(y) != locs.n:
        raise ValueError("value vector length mismatch")
    ctx = tower.ctx(tower.levels)
    if ctx.kernel_ok:
        return _interpolate_native(
            locs, ctx.to_native(np.asarray(y, dtype=np.uint64)))
    Q, _ = locs.lagrange()
    acc = [0] * locs.n
    for i in range(locs.n):
        v = int(y[i])
        if v:
            for j in range(locs.n):
                acc[j] ^= tower.mul(v, int(Q[i, j]))
    return poly_trim(acc)


# ----------------------------------------------------------------------
# decoding

def _decode_bw(locs: Locators, k: int, y) -> tuple[list[int], np.ndarray]:
    tower = locs.tower
    n = locs.n
    w = (n - k) // 2
    ya = np.asarray(y)
    # columns: y_i a_i^j (j <= w) | a_i^j (j <= k-1+w)
    E_cols = monomial_matrix(locs, list(range(w + 1))).a
    Q_cols = monomial_matrix(locs, list(range(k + w))).a
    dt = E_cols.dtype
    rows = np.empty((n, (w + 1) + (k + w)), dtype=dt)
    for i in range(n):
        yi = int(ya[i])
        for j in range(w + 1):
            rows[i, j] = tower.mul(yi, int(E_cols[j, i]))
        for j in range(k + w):
            rows[i, w + 1 + j] = Q_cols[j, i]
    ker = la.right_kernel(Mat(tower, tower.levels, rows))
    if ker.rows == 0:
        raise DecodingFailure("no codeword within the decoding radius")
    v = ker.a[0]
    E = poly_trim([int(x) for x in v[: w + 1]])
    Qp = poly_trim([int(x) for x in v[w + 1:]])
    if not E:
        raise DecodingFailure("degenerate error-locator candidate")
    f, rem = poly_divmod(tower, Qp, E)
    if rem or poly_deg(f) > k - 1:
        raise DecodingFailure("no codeword within the decoding radius")
    cw = evaluate(tower, f, locs)
    if dt == object:
        e = np.array([int(ya[i]) ^ int(cw[i]) for i in range(n)], dtype=object)
    else:
        e = ya.astype(np.uint64) ^ cw
    if hamming_weight(e) > w:
        raise DecodingFailure("no codeword within the decoding radius")
    return f, e


def _decode_euclid(locs: Locators, k: int, y) -> tuple[list[int], np.ndarray]:
    tower = locs.tower
    cache = locs.decode_cache(k)
    if cache is None:
        raise DecodingFailure("syndrome path unavailable for these locators")
    _, beta, beta_inv, W = cache
    ctx = tower.ctx(tower.levels)
    _, wts = locs.lagrange()
    ya = ctx.to_native(np.asarray(y, dtype=np.uint64))
    s = K.syndromes(W, ya, *ctx.kargs)
    err = np.empty(locs.n, dtype=np.uint64)
    w = (locs.n - k) // 2
    work = np.empty((3, w + 2), dtype=np.uint64)
    cnt = K.syndrome_decode(s, w, beta, beta_inv, wts, err, work, *ctx.kargs)
    if cnt < 0:
        raise DecodingFailure("no codeword within the decoding radius")
    f = _interpolate_native(locs, ya ^ err)
    if poly_deg(f) > k - 1:
        raise DecodingFailure("corrected word is not a codeword")
    return f, ctx.from_native(err)


def rs_decode(locs: Locators, k: int, y, method: str = "auto"):
    """Unique decoding: message polynomial and error vector, or failure.

    method: "auto" (fast path when available), "euclid", "berlekamp-welch".
    """
    if not 1 <= k < locs.n:
        raise ValueError("dimension out of range for decoding")
    if method == "berlekamp-welch":
        return _decode_bw(locs, k, y)
    if method == "euclid":
        return _decode_euclid(locs, k, y)
    if method != "auto":
        raise ValueError(f"unknown decoding method {method!r}")
    if locs.decode_cache(k) is not None:
        return _decode_euclid(locs, k, y)
    return _decode_bw(locs, k, y)


# ----------------------------------------------------------------------

def schur_square(M: Mat) -> Mat:
    """Full-row-rank generator of the span of all row products g_i * g_j."""
    tower = M.tower
    ctx = tower.ctx(M.level)
    d = la.rank(M)
    n = M.cols
    cap = min(n, d * (d + 1) // 2)
    if cap == 0:
        return la.zeros(tower, M.level, 0, n)
    if ctx.kernel_ok:
        G = ctx.to_native(M.a)
        B = np.zeros((cap, n), dtype=np.uint64)
        pivcol = np.zeros(cap, dtype=np.int64)
        rk = int(K.schur_basis(G, cap, B, pivcol, *ctx.kargs))
        return Mat(tower, M.level, ctx.from_native(B[:rk]))
    t = tower.ctx(tower.levels)
    basis: list[list[int]] = []
    pivs: list[int] = []
    rows = [[int(x) for x in r] for r in M.a]
    for i in range(len(rows)):
        for j in range(i, len(rows)):
            v = [t.mul(rows[i][s], rows[j][s]) for s in range(n)]
            for b, c in enumerate(pivs):
                if v[c]:
                    f = v[c]
                    for s in range(n):
                        if basis[b][s]:
                            v[s] ^= t.mul(f, basis[b][s])
            p = next((s for s in range(n) if v[s]), -1)
            if p >= 0:
                f = t.inv(v[p])
                v = [t.mul(x, f) for x in v]
                for b in range(len(basis)):
                    if basis[b][p]:
                        g = basis[b][p]
                        basis[b] = [basis[b][s] ^ t.mul(g, v[s])
                                    for s in range(n)]
                basis.append(v)
                pivs.append(p)
                if len(basis) >= cap:
                    return la.from_rows(tower, M.level, basis)
    if not basis:
        return la.zeros(tower, M.level, 0, n)
    return la.from_rows(tower, M.level, basis)


def subfield_subcode(M: Mat) -> Mat:
    """Generator of rowspace(M) intersected with the base subfield, level 0.

    Parity check of M is expanded into base-field coordinates and its right
    kernel over the base field is returned.
    """
    tower = M.tower
    H = la.right_kernel(M)
    L = 1 << tower.levels
    coords = tower.expand_base_arr(H.a)              # (hr, n, L)
    expanded = np.transpose(coords, (0, 2, 1)).reshape(H.rows * L, M.cols)
    return la.right_kernel(Mat(tower, 0, np.ascontiguousarray(expanded)))

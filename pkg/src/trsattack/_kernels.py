"""Numba-compiled inner loops for GF(2^m) matrix and decoder arithmetic.

All matrices and vectors are numpy uint64 arrays of field-element encodings.
The arithmetic context is passed as positional trailing arguments
``(tb, log, exp, qm1, red, m)`` selecting one of three multiplier modes:

- ``tb == 1``: plain log/antilog tables (``exp`` doubled so no modular
  reduction of the index is needed), ``qm1 = 2^m - 1``;
- ``tb == 2``: quadratic extension of the half-degree field; elements are
  two half-width coordinates packed into one word, ``log``/``exp`` are the
  small base-field tables extended with a zero-absorbing pad (``log[0]``
  points into a zeroed region of ``exp``, so multiplication needs no zero
  branches), ``m`` is the half degree and ``red`` packs the logs of the
  extension constants;
- ``tb == 0``: carry-less shift-and-xor with on-the-fly reduction by
  ``red`` (modulus with bit ``m`` set), for degrees up to 63.

Every kernel is deterministic: pivoting always picks the first nonzero
candidate, insertion orders are fixed.
"""

import numpy as np
from numba import config as _numba_config
from numba import int64, njit, prange, uint64

# the default layer probe warns about old TBB builds; OpenMP is always fine
_numba_config.THREADING_LAYER = "omp"

U0 = uint64(0)
U1 = uint64(1)


@njit(cache=True, inline="always")
def gf_mul(a, b, tb, log, exp, qm1, red, m):
    if tb == 2:
        # quadratic extension of the half-degree field: a = a1*G + a0 packed
        # as (a1 << m) | a0 with G^2 = A + B*G; log/exp are the small base
        # tables with a zero-absorbing pad, red packs log(A) | log(B) << 16
        half = uint64(m)
        mask = (U1 << half) - U1
        a1 = a >> half
        a0 = a & mask
        b1 = b >> half
        b0 = b & mask
        m1 = uint64(exp[log[a1] + log[b1]])
        m2 = uint64(exp[log[a0] + log[b0]])
        m3 = uint64(exp[log[a0 ^ a1] + log[b0 ^ b1]])
        lm1 = log[m1]
        lo = m2 ^ uint64(exp[lm1 + int64(red & uint64(0xFFFF))])
        hi = m1 ^ m2 ^ m3 ^ uint64(exp[lm1 + int64(red >> uint64(16))])
        return (hi << half) | lo
    if a == U0 or b == U0:
        return U0
    if tb == 1:
        return uint64(exp[log[a] + log[b]])
    r = U0
    x = a
    y = b
    while y != U0:
        if y & U1:
            r ^= x
        y >>= U1
        x <<= U1
        if (x >> uint64(m)) & U1:
            x ^= red
    return r


@njit(cache=True, inline="always")
def gf_inv(a, tb, log, exp, qm1, red, m):
    if tb == 2:
        # conjugate over the base field divided by the norm
        half = uint64(m)
        mask = (U1 << half) - U1
        a1 = a >> half
        a0 = a & mask
        logB = int64(red >> uint64(16))
        logA = int64(red & uint64(0xFFFF))
        c0 = a0 ^ uint64(exp[log[a1] + logB])          # a0 + B*a1
        sq1 = uint64(exp[log[a1] + log[a1]])            # a1^2
        norm = uint64(exp[log[a0] + log[c0]]) ^ uint64(exp[log[sq1] + logA])
        ninv = int64(qm1 - log[norm])
        lo = uint64(exp[log[c0] + ninv])
        hi = uint64(exp[log[a1] + ninv])
        return (hi << half) | lo
    if tb == 1:
        return uint64(exp[qm1 - log[a]])
    # a^(2^m - 2) by square and multiply
    r = U1
    x = a
    e = (U1 << uint64(m)) - uint64(2)
    while e != U0:
        if e & U1:
            r = gf_mul(r, x, tb, log, exp, qm1, red, m)
        x = gf_mul(x, x, tb, log, exp, qm1, red, m)
        e >>= U1
    return r


@njit(cache=True, inline="always")
def gf_pow(a, e, tb, log, exp, qm1, red, m):
    # e is a nonnegative int64
    if e == 0:
        return U1
    if a == U0:
        return U0
    if tb == 1:
        return uint64(exp[(log[a] * e) % qm1])
    r = U1
    x = a
    while e != 0:
        if e & 1:
            r = gf_mul(r, x, tb, log, exp, qm1, red, m)
        x = gf_mul(x, x, tb, log, exp, qm1, red, m)
        e >>= 1
    return r


@njit(cache=True)
def build_log_tables(g, red, m, log, exp):
    """Fill log/exp tables for the field generated by g (exp has 2*(q-1) slots)."""
    qm1 = (1 << m) - 1
    x = U1
    for i in range(qm1):
        exp[i] = x
        exp[i + qm1] = x
        log[x] = i
        x = gf_mul(x, g, 0, log, exp, 0, red, m)
    log[0] = 0


@njit(cache=True)
def rref(A, piv, tb, log, exp, qm1, red, m):
    """In-place reduced row echelon form; fills piv with pivot columns.

    Returns the rank.  First-nonzero pivoting, pivot rows normalized to 1,
    eliminated above and below.
    """
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        pr = -1
        for i in range(r, rows):
            if A[i, c] != U0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for t in range(cols):
                tmp = A[r, t]
                A[r, t] = A[pr, t]
                A[pr, t] = tmp
        pv = A[r, c]
        if pv != U1:
            ipv = gf_inv(pv, tb, log, exp, qm1, red, m)
            for t in range(c, cols):
                A[r, t] = gf_mul(A[r, t], ipv, tb, log, exp, qm1, red, m)
        for i in range(rows):
            if i != r and A[i, c] != U0:
                f = A[i, c]
                A[i, c] = U0
                for t in range(c + 1, cols):
                    A[i, t] ^= gf_mul(f, A[r, t], tb, log, exp, qm1, red, m)
        piv[r] = c
        r += 1
        if r == rows:
            break
    return r


@njit(cache=True)
def matmul(A, B, C, tb, log, exp, qm1, red, m):
    """C += A @ B (C must start zeroed for a plain product)."""
    n, kk = A.shape
    mm = B.shape[1]
    for i in range(n):
        for t in range(kk):
            a = A[i, t]
            if a != U0:
                for j in range(mm):
                    C[i, j] ^= gf_mul(a, B[t, j], tb, log, exp, qm1, red, m)


@njit(cache=True)
def mat_is_zero_product(A, BT, tb, log, exp, qm1, red, m):
    """True iff A @ B^T == 0 (BT holds B^T rows); exits at first nonzero entry."""
    ra = A.shape[0]
    rb = BT.shape[0]
    n = A.shape[1]
    for i in range(ra):
        for b in range(rb):
            acc = U0
            for t in range(n):
                acc ^= gf_mul(A[i, t], BT[b, t], tb, log, exp, qm1, red, m)
            if acc != U0:
                return False
    return True


@njit(cache=True)
def power_matrix(alpha, kmax, tb, log, exp, qm1, red, m):
    """Rows 0..kmax-1 of the Vandermonde-style matrix alpha^i."""
    n = alpha.shape[0]
    out = np.empty((kmax, n), np.uint64)
    for j in range(n):
        out[0, j] = U1
    for i in range(1, kmax):
        for j in range(n):
            out[i, j] = gf_mul(out[i - 1, j], alpha[j], tb, log, exp, qm1, red, m)
    return out


@njit(cache=True)
def monomial_rows(alpha, exps, tb, log, exp, qm1, red, m):
    """Rows alpha^e for each e in exps."""
    n = alpha.shape[0]
    out = np.empty((exps.shape[0], n), np.uint64)
    for r in range(exps.shape[0]):
        e = exps[r]
        for j in range(n):
            out[r, j] = gf_pow(alpha[j], e, tb, log, exp, qm1, red, m)
    return out


@njit(cache=True)
def gensub_is_contained(alpha, exps, KT, tb, log, exp, qm1, red, m):
    """True iff every row alpha^e (e in exps) is orthogonal to all rows of KT.

    Rows are generated one at a time and the scan aborts on the first
    nonzero inner product, so rejection is cheap.
    """
    n = alpha.shape[0]
    kr = KT.shape[0]
    row = np.empty(n, np.uint64)
    for ei in range(exps.shape[0]):
        e = exps[ei]
        for t in range(n):
            row[t] = gf_pow(alpha[t], e, tb, log, exp, qm1, red, m)
        for b in range(kr):
            acc = U0
            for t in range(n):
                acc ^= gf_mul(row[t], KT[b, t], tb, log, exp, qm1, red, m)
            if acc != U0:
                return False
    return True


@njit(cache=True)
def schur_basis(G, cap, B, pivcol, tb, log, exp, qm1, red, m):
    """Insert componentwise products of row pairs of G into a reduced basis.

    Pairs (i, j), i <= j, are processed in lexicographic order; each product
    is reduced against the current basis and inserted if independent, keeping
    all rows normalized and mutually reduced.  Stops early once cap rows are
    reached.  Returns the final rank.
    """
    d, n = G.shape
    v = np.empty(n, np.uint64)
    rank = 0
    for i in range(d):
        for j in range(i, d):
            for t in range(n):
                v[t] = gf_mul(G[i, t], G[j, t], tb, log, exp, qm1, red, m)
            for b in range(rank):
                c = pivcol[b]
                if v[c] != U0:
                    f = v[c]
                    for t in range(n):
                        if B[b, t] != U0:
                            v[t] ^= gf_mul(f, B[b, t], tb, log, exp, qm1, red, m)
            p = -1
            for t in range(n):
                if v[t] != U0:
                    p = t
                    break
            if p >= 0:
                f = gf_inv(v[p], tb, log, exp, qm1, red, m)
                for t in range(p, n):
                    v[t] = gf_mul(v[t], f, tb, log, exp, qm1, red, m)
                for b in range(rank):
                    if B[b, p] != U0:
                        g = B[b, p]
                        B[b, p] = U0
                        for t in range(p + 1, n):
                            B[b, t] ^= gf_mul(g, v[t], tb, log, exp, qm1, red, m)
                for t in range(n):
                    B[rank, t] = v[t]
                pivcol[rank] = p
                rank += 1
                if rank >= cap:
                    return rank
    return rank


@njit(cache=True)
def horner_many(coeffs, pts, tb, log, exp, qm1, red, m):
    """Evaluate the polynomial (coeffs[i] is the X^i coefficient) at pts."""
    n = pts.shape[0]
    d = coeffs.shape[0]
    out = np.empty(n, np.uint64)
    for j in range(n):
        x = pts[j]
        acc = U0
        for t in range(d - 1, -1, -1):
            acc = gf_mul(acc, x, tb, log, exp, qm1, red, m) ^ coeffs[t]
        out[j] = acc
    return out


@njit(cache=True)
def lagrange_build(alpha, tb, log, exp, qm1, red, m):
    """Interpolation tables for distinct points alpha.

    Returns (Q, w) where w[i] = 1/prod_{j!=i}(alpha_i - alpha_j) and row i of
    Q is w[i] * (M(X)/(X - alpha_i)) with M the master polynomial, so that
    interpolation of values y is the vector-matrix product y @ Q.
    """
    n = alpha.shape[0]
    master = np.zeros(n + 1, np.uint64)
    master[0] = U1
    deg = 0
    for i in range(n):
        a = alpha[i]
        # multiply by (X + a); char 2 so subtraction is addition
        for t in range(deg, -1, -1):
            master[t + 1] ^= master[t]
            master[t] = gf_mul(master[t], a, tb, log, exp, qm1, red, m)
        deg += 1
    Q = np.empty((n, n), np.uint64)
    w = np.empty(n, np.uint64)
    q = np.empty(n, np.uint64)
    for i in range(n):
        a = alpha[i]
        q[n - 1] = master[n]
        for t in range(n - 2, -1, -1):
            q[t] = master[t + 1] ^ gf_mul(a, q[t + 1], tb, log, exp, qm1, red, m)
        # w = 1 / q(a)
        acc = U0
        for t in range(n - 1, -1, -1):
            acc = gf_mul(acc, a, tb, log, exp, qm1, red, m) ^ q[t]
        wi = gf_inv(acc, tb, log, exp, qm1, red, m)
        w[i] = wi
        for t in range(n):
            Q[i, t] = gf_mul(wi, q[t], tb, log, exp, qm1, red, m)
    return Q, w


@njit(cache=True)
def dual_syndrome_matrix(beta, w, nk, tb, log, exp, qm1, red, m):
    """Rows j = 0..nk-1 of W with W[j, i] = w_i * beta_i^j."""
    n = beta.shape[0]
    W = np.empty((nk, n), np.uint64)
    for i in range(n):
        cur = w[i]
        for j in range(nk):
            W[j, i] = cur
            cur = gf_mul(cur, beta[i], tb, log, exp, qm1, red, m)
    return W


@njit(cache=True)
def syndromes(W, y, tb, log, exp, qm1, red, m):
    nk, n = W.shape
    s = np.empty(nk, np.uint64)
    for j in range(nk):
        acc = U0
        for t in range(n):
            acc ^= gf_mul(W[j, t], y[t], tb, log, exp, qm1, red, m)
        s[j] = acc
    return s


@njit(cache=True)
def bm_step(s, j_from, j_to, C, B, T, L, sh, bd, LB, w_rad,
            tb, log, exp, qm1, red, m):
    """Berlekamp-Massey steps for syndrome positions [j_from, j_to).

    C/B are the connection and backup polynomials (length w_rad+2, zero
    beyond their degrees), T is scratch of the same length, LB bounds the
    degree of B.  Returns the updated (L, sh, bd, LB), with L = -1 once the
    minimal LFSR provably needs more than w_rad taps.
    """
    cap = w_rad + 2
    ibd = gf_inv(bd, tb, log, exp, qm1, red, m)
    for j in range(j_from, j_to):
        d = s[j]
        for i in range(1, L + 1):
            d ^= gf_mul(C[i], s[j - i], tb, log, exp, qm1, red, m)
        if d == U0:
            sh += 1
            continue
        coef = gf_mul(d, ibd, tb, log, exp, qm1, red, m)
        blen = min(cap - sh, LB + 1)
        if 2 * L <= j:
            newL = j + 1 - L
            if newL > w_rad:
                return -1, sh, bd, LB
            for t in range(L + 1):
                T[t] = C[t]
            for t in range(blen):
                C[t + sh] ^= gf_mul(coef, B[t], tb, log, exp, qm1, red, m)
            for t in range(L + 1):
                B[t] = T[t]
            for t in range(L + 1, LB + 1):
                B[t] = U0
            LB = L
            L = newL
            bd = d
            ibd = gf_inv(bd, tb, log, exp, qm1, red, m)
            sh = 1
        else:
            for t in range(blen):
                C[t + sh] ^= gf_mul(coef, B[t], tb, log, exp, qm1, red, m)
            sh += 1
    return L, sh, bd, LB


@njit(cache=True)
def locator_finish(s, C, om, L, beta, beta_inv, wts, err, probe,
                   tb, log, exp, qm1, red, m):
    """Evaluator, Chien search, Forney values and exact syndrome recheck for
    a connection polynomial C of length L.  Fills err; returns the error
    count, -1 for an exact reject, or -2 when probe > 0 and none of the
    first probe positions is a locator root (callers relying on -2 must
    fall back to an exact pass before declaring overall failure)."""
    nk = s.shape[0]
    n = beta.shape[0]
    if L < 1 or C[L] == U0:
        return -1
    # Chien search batched across positions (throughput-bound), root count
    # first so wrong candidates never pay for the evaluator or Forney
    ev = np.empty(n, np.uint64)
    top = C[L]
    plim = n if probe <= 0 else min(probe, n)
    for i in range(plim):
        ev[i] = top
    for t in range(L - 1, -1, -1):
        ct = C[t]
        for i in range(plim):
            ev[i] = gf_mul(ev[i], beta_inv[i], tb, log, exp, qm1, red, m) ^ ct
    nroots = 0
    for i in range(plim):
        if ev[i] == U0:
            nroots += 1
    if plim < n:
        if nroots == 0:
            return -2
        for i in range(plim, n):
            ev[i] = top
        for t in range(L - 1, -1, -1):
            ct = C[t]
            for i in range(plim, n):
                ev[i] = gf_mul(ev[i], beta_inv[i],
                               tb, log, exp, qm1, red, m) ^ ct
        for i in range(plim, n):
            if ev[i] == U0:
                nroots += 1
    if nroots != L:
        return -1

    # evaluator: omega = C * S mod z^L (degree < L)
    for j in range(L):
        acc = s[j]
        for i in range(1, j + 1):
            acc ^= gf_mul(C[i], s[j - i], tb, log, exp, qm1, red, m)
        om[j] = acc

    pos = np.empty(L, np.int64)
    nerr = 0
    for i in range(n):
        err[i] = U0
        if ev[i] == U0:
            x = beta_inv[i]
            # formal derivative of the locator at x: odd-degree terms only
            x2 = gf_mul(x, x, tb, log, exp, qm1, red, m)
            dacc = U0
            for t in range(L if L % 2 == 1 else L - 1, 0, -2):
                dacc = gf_mul(dacc, x2, tb, log, exp, qm1, red, m) ^ C[t]
            oacc = U0
            for t in range(L - 1, -1, -1):
                oacc = gf_mul(oacc, x, tb, log, exp, qm1, red, m) ^ om[t]
            if dacc == U0 or oacc == U0:
                return -1
            num = gf_mul(beta[i], oacc, tb, log, exp, qm1, red, m)
            den = gf_mul(wts[i], dacc, tb, log, exp, qm1, red, m)
            err[i] = gf_mul(num, gf_inv(den, tb, log, exp, qm1, red, m),
                            tb, log, exp, qm1, red, m)
            pos[nerr] = i
            nerr += 1
    if nerr != L:
        return -1

    # exact syndrome recheck of the reconstructed error, running powers of
    # beta along the found positions
    terms = np.empty(L, np.uint64)
    for t in range(nerr):
        i = pos[t]
        terms[t] = gf_mul(err[i], wts[i], tb, log, exp, qm1, red, m)
    for j in range(nk):
        acc = U0
        for t in range(nerr):
            acc ^= terms[t]
        if acc != s[j]:
            return -1
        for t in range(nerr):
            terms[t] = gf_mul(terms[t], beta[pos[t]], tb, log, exp, qm1, red, m)
    return nerr


@njit(cache=True)
def syndrome_decode(s, w_rad, beta, beta_inv, wts, err, work,
                    tb, log, exp, qm1, red, m):
    """Key-equation solve + Chien search + Forney for one syndrome vector.

    beta are the (shifted, nonzero) locators and wts the dual weights
    matching the syndrome matrix.  work is a (3, w_rad+2) uint64 scratch
    area.  On success fills err and returns the error count; returns -1
    when no error pattern of weight <= w_rad matches s exactly.
    """
    nk = s.shape[0]
    n = beta.shape[0]
    allz = True
    for j in range(nk):
        if s[j] != U0:
            allz = False
            break
    if allz:
        for t in range(n):
            err[t] = U0
        return 0
    if w_rad == 0:
        return -1
    C = work[0]
    B = work[1]
    T = work[2]
    for t in range(w_rad + 2):
        C[t] = U0
        B[t] = U0
    C[0] = U1
    B[0] = U1
    L, sh, bd, LB = bm_step(s, 0, nk, C, B, T, 0, 1, U1, 0, w_rad,
                            tb, log, exp, qm1, red, m)
    if L < 0:
        return -1
    return locator_finish(s, C, T, L, beta, beta_inv, wts, err, 0,
                          tb, log, exp, qm1, red, m)


@njit(cache=True, parallel=True)
def guess_scan(sbase, su, g_start, g_end, w_rad, beta, beta_inv, wts, probe,
               tb, log, exp, qm1, red, m):
    """Smallest g in [g_start, g_end) whose syndrome sbase + g*su admits an
    error pattern of weight <= w_rad, or -1.

    The candidate range is scanned in fixed chunks that may run on several
    threads; the result is reduced by candidate index, so it matches the
    sequential scan regardless of thread count.  The solver state for the
    syndrome prefix untouched by su is computed once and shared.  probe > 0
    enables the probabilistic Chien prefilter of locator_finish, in which
    case a -1 result only becomes an exact failure after a probe = 0 rerun.
    """
    nk = sbase.shape[0]
    cap = w_rad + 2
    vmin = nk
    nsup = 0
    for j in range(nk):
        if su[j] != U0:
            nsup += 1
            if j < vmin:
                vmin = j
    sup_idx = np.empty(max(nsup, 1), np.int64)
    sup_val = np.empty(max(nsup, 1), np.uint64)
    t = 0
    for j in range(nk):
        if su[j] != U0:
            sup_idx[t] = j
            sup_val[t] = su[j]
            t += 1

    # shared prefix: positions [0, vmin) are identical for every guess
    C0 = np.zeros(cap, np.uint64)
    B0 = np.zeros(cap, np.uint64)
    T0 = np.empty(cap, np.uint64)
    C0[0] = U1
    B0[0] = U1
    L0, sh0, bd0, LB0 = bm_step(sbase, 0, vmin, C0, B0, T0, 0, 1, U1, 0,
                                w_rad, tb, log, exp, qm1, red, m)
    if L0 < 0:
        return int64(-1)

    chunk = 256
    nchunks = (g_end - g_start + chunk - 1) // chunk
    best = int64(g_end)
    hint = np.full(1, g_end, np.int64)
    for ci in prange(nchunks):
        lo = g_start + ci * chunk
        hi = min(lo + chunk, g_end)
        if lo <= hint[0]:
            s = sbase.copy()
            C = np.empty(cap, np.uint64)
            B = np.empty(cap, np.uint64)
            T = np.empty(cap, np.uint64)
            om = np.empty(cap, np.uint64)
            err = np.empty(beta.shape[0], np.uint64)
            found = int64(g_end)
            for g in range(lo, hi):
                if g > hint[0]:
                    break
                gv = uint64(g)
                for si in range(nsup):
                    s[sup_idx[si]] = sbase[sup_idx[si]] ^ gf_mul(
                        gv, sup_val[si], tb, log, exp, qm1, red, m)
                allz = True
                for j in range(nk):
                    if s[j] != U0:
                        allz = False
                        break
                if allz:
                    found = g
                    if g < hint[0]:
                        hint[0] = g
                    break
                for t2 in range(cap):
                    C[t2] = C0[t2]
                    B[t2] = B0[t2]
                L, sh, bd, LB = bm_step(s, vmin, nk, C, B, T, L0, sh0, bd0,
                                        LB0, w_rad, tb, log, exp, qm1, red, m)
                if L < 0:
                    continue
                cnt = locator_finish(s, C, om, L, beta, beta_inv, wts, err,
                                     probe, tb, log, exp, qm1, red, m)
                if cnt >= 0:
                    found = g
                    if g < hint[0]:
                        hint[0] = g
                    break
            best = min(best, found)
    if best >= g_end:
        return int64(-1)
    return best


@njit(cache=True)
def vec_scale(src, c, tb, log, exp, qm1, red, m):
    n = src.shape[0]
    out = np.empty(n, np.uint64)
    for t in range(n):
        out[t] = gf_mul(src[t], c, tb, log, exp, qm1, red, m)
    return out


@njit(cache=True)
def vec_mul(a, b, tb, log, exp, qm1, red, m):
    n = a.shape[0]
    out = np.empty(n, np.uint64)
    for t in range(n):
        out[t] = gf_mul(a[t], b[t], tb, log, exp, qm1, red, m)
    return out

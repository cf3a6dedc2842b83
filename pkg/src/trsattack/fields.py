"""Towers of characteristic-2 fields F_{2^m0} < F_{2^(2 m0)} < ... < F_{2^m}.

Every element of every subfield is carried as an integer encoding in the
*top* field: bit i is the coefficient of X^i in the polynomial basis modulo
the tower's modulus.  Subfields are the fixed sets of Frobenius powers, not
separate types, so mixing levels never needs explicit embeddings.

The modulus of each field degree is the lexicographically smallest
irreducible polynomial (smallest integer encoding with bit m set), which
makes towers, keys and serialized files reproducible: two towers built from
the same (m0, levels) are bit-identical.

For matrix work each level has an arithmetic context (`FieldTower.ctx`).
Levels whose own degree is at most 16 get a *native* small-field
representation (log/antilog tables) together with conversion maps to and
from the top encoding; everything else computes directly on top encodings,
with carry-less multiplication for degrees up to 63 and plain Python
integers beyond that.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K

MAX_DEGREE = 128


# ----------------------------------------------------------------------
# polynomials over F_2, encoded as Python ints (bit i = coefficient of X^i)

def _f2_mod(a: int, mod: int) -> int:
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def _f2_mulmod(a: int, b: int, mod: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
    return _f2_mod(r, mod)


def _f2_sq(a: int) -> int:
    # spread bits: coefficient of X^i moves to X^(2i)
    r = 0
    i = 0
    while a:
        if a & 1:
            r |= 1 << (2 * i)
        a >>= 1
        i += 1
    return r


def _f2_gcd(a: int, b: int) -> int:
    while b:
        if a.bit_length() < b.bit_length():
            a, b = b, a
            continue
        a ^= b << (a.bit_length() - b.bit_length())
        if a < b:
            a, b = b, a
    return a


def _x_pow_2k_mod(k: int, mod: int) -> int:
    x = _f2_mod(2, mod)
    for _ in range(k):
        x = _f2_mod(_f2_sq(x), mod)
    return x


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's irreducibility test for a binary polynomial."""
    m = f.bit_length() - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    if not f & 1:
        return False
    if _x_pow_2k_mod(m, f) != 2:
        return False
    for p in _prime_factors(m):
        h = _x_pow_2k_mod(m // p, f) ^ 2
        if _f2_gcd(h, f) != 1:
            return False
    return True


def lexmin_irreducible(m: int) -> int:
    """Smallest integer encoding of an irreducible degree-m binary polynomial."""
    base = 1 << m
    for c in range(1, base, 2):
        f = base | c
        if is_irreducible(f):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {m} found")


# ----------------------------------------------------------------------
# F_2-linear maps on bit vectors, stored as lists of column masks

def _bm_apply(cols: list[int], x: int) -> int:
    y = 0
    i = 0
    while x:
        if x & 1:
            y ^= cols[i]
        x >>= 1
        i += 1
    return y


def _bm_rows_from_cols(cols: list[int], nrows: int) -> list[int]:
    rows = [0] * nrows
    for j, c in enumerate(cols):
        for i in range(nrows):
            if (c >> i) & 1:
                rows[i] |= 1 << j
    return rows


def _bm_cols_from_rows(rows: list[int], ncols: int) -> list[int]:
    cols = [0] * ncols
    for i, r in enumerate(rows):
        for j in range(ncols):
            if (r >> j) & 1:
                cols[j] |= 1 << i
    return cols


def _bm_rank(cols: list[int]) -> int:
    pivots: dict[int, int] = {}
    for c in cols:
        v = c
        while v:
            hb = v.bit_length() - 1
            if hb in pivots:
                v ^= pivots[hb]
            else:
                pivots[hb] = v
                break
    return len(pivots)


def _bm_inverse(cols: list[int], m: int) -> list[int]:
    rows = _bm_rows_from_cols(cols, m)
    aug = [rows[i] | (1 << (m + i)) for i in range(m)]
    r = 0
    for c in range(m):
        pr = -1
        for i in range(r, m):
            if (aug[i] >> c) & 1:
                pr = i
                break
        if pr < 0:
            raise ValueError("bit matrix is singular")
        aug[r], aug[pr] = aug[pr], aug[r]
        for i in range(m):
            if i != r and (aug[i] >> c) & 1:
                aug[i] ^= aug[r]
        r += 1
    return _bm_cols_from_rows([aug[i] >> m for i in range(m)], m)


def _bm_left_inverse(cols: list[int], m: int, d: int) -> list[int]:
    """L with L(E(v)) = v for the injective map E given by d columns of m bits."""
    rows = _bm_rows_from_cols(cols, m)
    aug = [rows[i] | (1 << (d + i)) for i in range(m)]
    r = 0
    for c in range(d):
        pr = -1
        for i in range(r, m):
            if (aug[i] >> c) & 1:
                pr = i
                break
        if pr < 0:
            raise ValueError("bit matrix does not have full column rank")
        aug[r], aug[pr] = aug[pr], aug[r]
        for i in range(m):
            if i != r and (aug[i] >> c) & 1:
                aug[i] ^= aug[r]
        r += 1
    return _bm_cols_from_rows([aug[c] >> d for c in range(d)], m)


def _bm_kernel(cols: list[int], m: int) -> list[int]:
    """Basis of {x : A x = 0}, ordered by ascending free column."""
    rows = _bm_rows_from_cols(cols, m)
    pivcols: list[int] = []
    r = 0
    for c in range(m):
        pr = -1
        for i in range(r, m):
            if (rows[i] >> c) & 1:
                pr = i
                break
        if pr < 0:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(m):
            if i != r and (rows[i] >> c) & 1:
                rows[i] ^= rows[r]
        pivcols.append(c)
        r += 1
    pivset = set(pivcols)
    basis = []
    for f in range(m):
        if f in pivset:
            continue
        v = 1 << f
        for ri, c in enumerate(pivcols):
            if (rows[ri] >> f) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def _find_generator(modulus: int, m: int) -> int:
    """Smallest multiplicative generator of the field defined by modulus."""
    q = 1 << m

    def powm(a, e):
        r = 1
        while e:
            if e & 1:
                r = _f2_mulmod(r, a, modulus)
            a = _f2_mulmod(a, a, modulus)
            e >>= 1
        return r

    factors = _prime_factors(q - 1)
    for cand in range(2, q):
        if all(powm(cand, (q - 1) // p) != 1 for p in factors):
            return cand
    raise AssertionError("no generator found")


def _chunk_tables(cols: list[int], nbits_in: int) -> list[np.ndarray]:
    """Byte-indexed lookup tables applying the bit-matrix to uint64 inputs."""
    tables = []
    for c in range((nbits_in + 7) // 8):
        t = np.zeros(256, dtype=np.uint64)
        for v in range(256):
            y = 0
            for b in range(8):
                if (v >> b) & 1 and c * 8 + b < nbits_in:
                    y ^= cols[c * 8 + b]
            t[v] = y
        tables.append(t)
    return tables


def _apply_chunk_tables(tables: list[np.ndarray], arr: np.ndarray) -> np.ndarray:
    out = np.zeros_like(arr)
    for c, t in enumerate(tables):
        out ^= t[(arr >> np.uint64(8 * c)) & np.uint64(0xFF)]
    return out


# ----------------------------------------------------------------------

class FieldCtx:
    """Arithmetic context for one tower level, as used by matrix kernels.

    Matrix entries are stored as top-field encodings; `to_native` /
    `from_native` translate uint64 (or object) arrays to the representation
    the kernels compute in.  Scalar helpers (`mul`, `inv`, ...) operate on
    *native* encodings.

    Three native layouts exist: small levels get their own log-table field,
    the top level of a small tower is rewritten as a quadratic extension of
    the level below (two half-width coordinates packed into one word, so
    multiplication only touches a few-KB base table), and anything else
    computes directly on top encodings.
    """

    def __init__(self, tower: "FieldTower", level: int):
        self.tower = tower
        self.level = level
        mi = tower.m0 << level
        self.quad = (level == tower.levels and tower.levels >= 1
                     and tower.m <= 16)
        self._identity = (not self.quad) and (level == tower.levels
                                              or mi > 16)
        if self.quad or self._identity:
            self.mdeg = tower.m
            self.modulus = tower.modulus
        else:
            self.mdeg = mi
            self.modulus = lexmin_irreducible(mi)
        self.table = (not self.quad) and self.mdeg <= 16
        self.kernel_ok = self.mdeg <= 63
        self.qm1 = (1 << self.mdeg) - 1

        self._log = np.zeros(1, dtype=np.int32)
        self._exp = np.zeros(1, dtype=np.uint32)
        if self.quad:
            self._build_quad()
            self.kargs = (2, self._log, self._exp, (1 << self._half) - 1,
                          np.uint64(self._logA | (self._logB << 16)),
                          self._half)
        else:
            if self.table:
                self._build_tables()
            if not self._identity:
                self._build_embedding()
            if self.kernel_ok:
                tb = 1 if self.table else 0
                self.kargs = (tb, self._log, self._exp, self.qm1,
                              np.uint64(self.modulus), self.mdeg)
            else:
                self.kargs = None

    def _build_quad(self) -> None:
        tower = self.tower
        half = tower.m // 2
        self._half = half
        base = tower.ctx(tower.levels - 1)
        # top = base[G] for the smallest element outside the lower level
        gamma = 2
        while tower.in_subfield(gamma, tower.levels - 1):
            gamma += 1
        self.gamma = gamma
        cols = []
        for b in range(half):
            cols.append(base.scalar_from_native(1 << b))
        for b in range(half):
            cols.append(tower._mul_int(gamma, cols[b]))
        self._emb_cols = cols
        self._proj_cols = _bm_inverse(cols, tower.m)
        self._emb_tables = _chunk_tables(cols, tower.m)
        self._proj_tables = _chunk_tables(self._proj_cols, tower.m)
        # extended zero-absorbing base tables: log(0) maps into a zero pad
        qh = 1 << half
        qm1h = qh - 1
        logzero = 2 * qm1h
        log = np.zeros(qh, dtype=np.int32)
        exp = np.zeros(4 * qm1h + 1, dtype=np.uint32)
        log[0] = logzero
        x = 1
        for i in range(qm1h):
            log[x] = i
            exp[i] = x
            if i + qm1h < 2 * qm1h:
                exp[i + qm1h] = x
            x = base.mul(x, base.generator)
        self._log = log
        self._exp = exp
        # G^2 = A + B*G in base-native coordinates
        packed = _bm_apply(self._proj_cols, tower._mul_int(gamma, gamma))
        self._A = packed & (qh - 1)
        self._B = packed >> half
        self._logA = int(log[self._A])
        self._logB = int(log[self._B])

    # -- construction --------------------------------------------------

    # -- construction --------------------------------------------------

    def _build_tables(self) -> None:
        q = 1 << self.mdeg
        g = _find_generator(self.modulus, self.mdeg)
        self.generator = g
        self._log = np.zeros(q, dtype=np.int32)
        self._exp = np.zeros(2 * (q - 1), dtype=np.uint32)
        K.build_log_tables(np.uint64(g), np.uint64(self.modulus), self.mdeg,
                           self._log, self._exp)

    def _build_embedding(self) -> None:
        tower = self.tower
        # smallest root of the native modulus inside the subfield
        theta = -1
        for x in tower.subfield_elements(self.level):
            acc = 0
            f = self.modulus
            for t in range(f.bit_length() - 1, -1, -1):
                acc = tower._mul_int(acc, x)
                if (f >> t) & 1:
                    acc ^= 1
            if acc == 0 and (theta < 0 or x < theta):
                theta = x
        if theta < 0:
            raise AssertionError("native modulus has no root in the subfield")
        self.theta = theta
        cols = []
        p = 1
        for _ in range(self.mdeg):
            cols.append(p)
            p = tower._mul_int(p, theta)
        self._emb_cols = cols
        self._proj_cols = _bm_left_inverse(cols, tower.m, self.mdeg)
        if tower.m <= 63:
            self._emb_tables = _chunk_tables(cols, self.mdeg)
            self._proj_tables = _chunk_tables(self._proj_cols, tower.m)
        else:
            self._emb_tables = None
            self._proj_tables = None

    def _pow_int(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = _f2_mulmod(r, a, self.modulus)
            a = _f2_mulmod(a, a, self.modulus)
            e >>= 1
        return r

    # -- scalar ops on native encodings ---------------------------------

    def mul(self, a: int, b: int) -> int:
        if self.quad:
            log, exp, half = self._log, self._exp, self._half
            mask = (1 << half) - 1
            a1, a0 = a >> half, a & mask
            b1, b0 = b >> half, b & mask
            m1 = int(exp[int(log[a1]) + int(log[b1])])
            m2 = int(exp[int(log[a0]) + int(log[b0])])
            m3 = int(exp[int(log[a0 ^ a1]) + int(log[b0 ^ b1])])
            lm1 = int(log[m1])
            lo = m2 ^ int(exp[lm1 + self._logA])
            hi = m1 ^ m2 ^ m3 ^ int(exp[lm1 + self._logB])
            return (hi << half) | lo
        if a == 0 or b == 0:
            return 0
        if self.table:
            return int(self._exp[int(self._log[a]) + int(self._log[b])])
        return _f2_mulmod(a, b, self.modulus)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self.quad:
            log, exp, half = self._log, self._exp, self._half
            qm1h = (1 << half) - 1
            a1, a0 = a >> half, a & ((1 << half) - 1)
            c0 = a0 ^ int(exp[int(log[a1]) + self._logB])
            sq1 = int(exp[int(log[a1]) + int(log[a1])])
            norm = int(exp[int(log[a0]) + int(log[c0])]) \
                ^ int(exp[int(log[sq1]) + self._logA])
            ninv = qm1h - int(log[norm])
            return (int(exp[int(log[a1]) + ninv]) << half) \
                | int(exp[int(log[c0]) + ninv])
        if self.table:
            return int(self._exp[self.qm1 - int(self._log[a])])
        return self._pow_int(a, (1 << self.mdeg) - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.quad:
            r = 1
            x = a
            while e:
                if e & 1:
                    r = self.mul(r, x)
                x = self.mul(x, x)
                e >>= 1
            return r
        if self.table:
            return int(self._exp[(int(self._log[a]) * (e % self.qm1)) % self.qm1])
        return self._pow_int(a, e)

    # -- representation conversion --------------------------------------

    def to_native(self, arr: np.ndarray) -> np.ndarray:
        if self._identity:
            if arr.dtype == object:
                return arr.copy()
            return arr.astype(np.uint64, copy=True)
        if self._proj_tables is not None and arr.dtype != object:
            return _apply_chunk_tables(self._proj_tables, arr.astype(np.uint64))
        flat = np.frompyfunc(lambda x: _bm_apply(self._proj_cols, int(x)), 1, 1)
        return flat(arr).astype(np.uint64)

    def from_native(self, arr: np.ndarray) -> np.ndarray:
        if self._identity:
            return arr.copy()
        if self._emb_tables is not None:
            return _apply_chunk_tables(self._emb_tables, arr.astype(np.uint64))
        out = np.empty(arr.shape, dtype=object)
        it = np.nditer(arr, flags=["multi_index", "refs_ok", "zerosize_ok"])
        for v in it:
            out[it.multi_index] = _bm_apply(self._emb_cols, int(v.item()))
        return out

    def scalar_to_native(self, x: int) -> int:
        if self._identity:
            return int(x)
        return _bm_apply(self._proj_cols, int(x))

    def scalar_from_native(self, x: int) -> int:
        if self._identity:
            return int(x)
        return _bm_apply(self._emb_cols, int(x))


class FieldTower:
    """Chain F_{2^m0} < F_{2^(2 m0)} < ... < F_{2^(m0 2^levels)}.

    Elements are ints in [0, 2^m); addition is XOR.  `levels` may be 0, in
    which case the tower degenerates to the single field F_{2^m0}.
    """

    def __init__(self, m0: int, levels: int):
        if m0 < 2:
            raise ValueError("base degree must be at least 2")
        if levels < 0:
            raise ValueError("levels must be nonnegative")
        m = m0 << levels
        if m > MAX_DEGREE:
            raise ValueError(
                f"top degree {m} exceeds the supported bound {MAX_DEGREE}")
        self.m0 = m0
        self.levels = levels
        self.m = m
        self.q0 = 1 << m0
        self.q = 1 << m
        self.subfield_orders = tuple(1 << (m0 << i) for i in range(levels + 1))
        self.modulus = lexmin_irreducible(m)
        self.hex_width = (m + 3) // 4

        # Frobenius maps x -> x^(q_i) as bit matrices, one per level
        self._frob: list[list[int]] = []
        for i in range(levels + 1):
            e = m0 << i
            cols = []
            for j in range(m):
                x = 1 << j
                for _ in range(e):
                    x = _f2_mod(_f2_sq(x), self.modulus)
                cols.append(x)
            self._frob.append(cols)

        # F_2-basis of each subfield: kernel of (Frobenius + identity)
        self._sub_basis: list[list[int]] = []
        for i in range(levels + 1):
            cols = [self._frob[i][j] ^ (1 << j) for j in range(m)]
            basis = _bm_kernel(cols, m)
            if len(basis) != m0 << i:
                raise AssertionError("subfield dimension mismatch")
            self._sub_basis.append(basis)

        self._sct = None
        self._init_base_basis()
        self._ctx: dict[int, FieldCtx] = {}
        self._sub_elems: dict[int, list[int]] = {}
        self._sub_pairs: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    # -- scalar arithmetic on top encodings ------------------------------

    def _mul_int(self, a: int, b: int) -> int:
        return _f2_mulmod(a, b, self.modulus)

    def _scalar_tables(self):
        """Plain top-encoding log/exp tables (m <= 16), built lazily.

        Kept separate from the matrix contexts so that tower-level scalar
        arithmetic always speaks wire encodings, independent of the packed
        representation the kernels use internally."""
        if self._sct is None:
            g = _find_generator(self.modulus, self.m)
            log = np.zeros(self.q, dtype=np.int32)
            exp = np.zeros(2 * (self.q - 1), dtype=np.uint32)
            K.build_log_tables(np.uint64(g), np.uint64(self.modulus), self.m,
                               log, exp)
            self._sct = (log, exp)
        return self._sct

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m <= 16:
            log, exp = self._scalar_tables()
            return int(exp[int(log[a]) + int(log[b])])
        return _f2_mulmod(a, b, self.modulus)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self.m <= 16:
            log, exp = self._scalar_tables()
            return int(exp[self.q - 1 - int(log[a])])
        return self.pow(a, (1 << self.m) - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.m <= 16:
            log, exp = self._scalar_tables()
            qm1 = self.q - 1
            return int(exp[(int(log[a]) * (e % qm1)) % qm1])
        r = 1
        while e:
            if e & 1:
                r = _f2_mulmod(r, a, self.modulus)
            a = _f2_mulmod(a, a, self.modulus)
            e >>= 1
        return r

    # -- subfield structure ----------------------------------------------

    def in_subfield(self, x: int, level: int) -> bool:
        """True iff x^(q_level) == x."""
        if not 0 <= level <= self.levels:
            raise ValueError(f"level {level} out of range 0..{self.levels}")
        return _bm_apply(self._frob[level], x) == x

    def frobenius(self, x: int, level: int) -> int:
        return _bm_apply(self._frob[level], x)

    def sample_subfield(self, level: int, rng) -> int:
        """Uniform element of F_{q_level}."""
        if not 0 <= level <= self.levels:
            raise ValueError(f"level {level} out of range 0..{self.levels}")
        basis = self._sub_basis[level]
        bits = rng.getrandbits(len(basis))
        x = 0
        for b in basis:
            if bits & 1:
                x ^= b
            bits >>= 1
        return x

    def sample_eta(self, level: int, rng) -> int:
        """Uniform element of F_{q_level} \\ F_{q_(level-1)}."""
        if level < 1:
            raise ValueError("eta sampling needs level >= 1")
        while True:
            x = self.sample_subfield(level, rng)
            if not self.in_subfield(x, level - 1):
                return x

    def subfield_elements(self, level: int) -> list[int]:
        """All elements of F_{q_level}, sorted by top encoding (degree <= 16)."""
        if level in self._sub_elems:
            return self._sub_elems[level]
        basis = self._sub_basis[level]
        if len(basis) > 16:
            raise ValueError("subfield too large to enumerate")
        elems = [0]
        for b in basis:
            elems += [e ^ b for e in elems]
        elems.sort()
        self._sub_elems[level] = elems
        return elems

    def subfield_pairs(self, level: int) -> tuple[np.ndarray, np.ndarray]:
        """(top encodings ascending, matching native encodings) for a level."""
        if level in self._sub_pairs:
            return self._sub_pairs[level]
        ctx = self.ctx(level)
        tops = self.subfield_elements(level)
        nats = np.array([ctx.scalar_to_native(t) for t in tops], dtype=np.uint64)
        pair = (np.array(tops, dtype=object if self.m > 63 else np.uint64), nats)
        self._sub_pairs[level] = pair
        return pair

    # -- base-field coordinate expansion ----------------------------------

    def _init_base_basis(self) -> None:
        L = 1 << self.levels
        s0 = self._sub_basis[0]
        gamma = 2
        while True:
            cols = []
            p = 1
            for _ in range(L):
                for b in s0:
                    cols.append(self._mul_int(p, b))
                p = self._mul_int(p, gamma)
            if _bm_rank(cols) == self.m:
                break
            gamma += 1
        powers = [1]
        for _ in range(L - 1):
            powers.append(self._mul_int(powers[-1], gamma))
        self.base_basis = tuple(powers)
        self._expand_cols = cols
        self._expand_inv = _bm_inverse(cols, self.m)
        if self.m <= 63 and self.m0 <= 16:
            self._expand_tables = _chunk_tables(self._expand_inv, self.m)
            s0_table = np.zeros(1 << self.m0, dtype=np.uint64)
            for v in range(1 << self.m0):
                y = 0
                for b in range(self.m0):
                    if (v >> b) & 1:
                        y ^= s0[b]
                s0_table[v] = y
            self._s0_table = s0_table
        else:
            self._expand_tables = None
            self._s0_table = None

    def expand_base(self, x: int) -> list[int]:
        """Coordinates of x over base_basis, as 2^levels level-0 elements."""
        bits = _bm_apply(self._expand_inv, x)
        s0 = self._sub_basis[0]
        out = []
        for _ in range(1 << self.levels):
            chunk = bits & (self.q0 - 1)
            bits >>= self.m0
            c = 0
            for b in s0:
                if chunk & 1:
                    c ^= b
                chunk >>= 1
            out.append(c)
        return out

    def contract_base(self, coords) -> int:
        x = 0
        for c, g in zip(coords, self.base_basis, strict=True):
            x ^= self.mul(int(c), g)
        return x

    def expand_base_arr(self, arr: np.ndarray) -> np.ndarray:
        """Vectorized expand_base: (..., ) -> (..., 2^levels) level-0 coords."""
        L = 1 << self.levels
        if self._expand_tables is not None and arr.dtype != object:
            bits = _apply_chunk_tables(self._expand_tables, arr.astype(np.uint64))
            out = np.empty(arr.shape + (L,), dtype=np.uint64)
            mask = np.uint64(self.q0 - 1)
            for j in range(L):
                out[..., j] = self._s0_table[
                    (bits >> np.uint64(j * self.m0)) & mask]
            return out
        out = np.empty(arr.shape + (L,), dtype=object)
        it = np.nditer(arr, flags=["multi_index", "refs_ok", "zerosize_ok"])
        for v in it:
            out[it.multi_index] = self.expand_base(int(v.item()))
        return out

    # -- contexts and wire encoding ---------------------------------------

    def ctx(self, level: int) -> FieldCtx:
        if level not in self._ctx:
            if not 0 <= level <= self.levels:
                raise ValueError(f"level {level} out of range 0..{self.levels}")
            self._ctx[level] = FieldCtx(self, level)
        return self._ctx[level]

    def encode_el(self, x: int) -> str:
        return format(x, f"0{self.hex_width}x")

    def decode_el(self, s: str) -> int:
        if len(s) != self.hex_width or any(c not in "0123456789abcdef"
                                           for c in s):
            raise ValueError(f"bad element encoding {s!r}")
        x = int(s, 16)
        if x >> self.m:
            raise ValueError(f"element {s!r} out of field range")
        return x

    def __repr__(self):
        return f"FieldTower(m0={self.m0}, levels={self.levels})"


_TOWERS: dict[tuple[int, int], FieldTower] = {}


def tower_create(m0: int, levels: int) -> FieldTower:
    """Shared, memoized tower constructor (towers are immutable after build)."""
    key = (m0, levels)
    if key not in _TOWERS:
        _TOWERS[key] = FieldTower(m0, levels)
    return _TOWERS[key]

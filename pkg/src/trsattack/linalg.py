"""Dense exact linear algebra over one level of a field tower.

Matrices carry their tower and level; entries are top-field encodings.
Operations convert to the level's native representation (small-field log
tables where available), run the compiled kernels, and convert back, so a
level-0 matrix of a large tower is still reduced with 8-bit table
arithmetic.  Towers with top degree above 63 bits fall back to a plain
Python path with identical pivoting rules, so results are bit-identical
across paths.

There are no tolerances anywhere: every predicate is an exact field
equality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .fields import FieldTower


class NoSolutionError(Exception):
    """Left-division was requested for an inconsistent system."""


@dataclass
class Mat:
    """rows x cols matrix over tower level `level` (entries: top encodings)."""

    tower: FieldTower
    level: int
    a: np.ndarray

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def copy(self) -> "Mat":
        return Mat(self.tower, self.level, self.a.copy())

    def row(self, i: int) -> np.ndarray:
        return self.a[i]

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, level={self.level})"


def _dtype(tower: FieldTower):
    return np.uint64 if tower.m <= 63 else object


def from_rows(tower: FieldTower, level: int, rows) -> Mat:
    a = np.array([[int(x) for x in r] for r in rows], dtype=_dtype(tower))
    if a.ndim != 2:
        a = a.reshape(len(rows), -1)
    return Mat(tower, level, a)


def zeros(tower: FieldTower, level: int, rows: int, cols: int) -> Mat:
    return Mat(tower, level, np.zeros((rows, cols), dtype=_dtype(tower)))


def identity(tower: FieldTower, level: int, n: int) -> Mat:
    m = zeros(tower, level, n, n)
    for i in range(n):
        m.a[i, i] = 1
    return m


def mat_equal(A: Mat, B: Mat) -> bool:
    return (A.level == B.level and A.a.shape == B.a.shape
            and bool(np.array_equal(A.a, B.a)))


def transpose(M: Mat) -> Mat:
    return Mat(M.tower, M.level, M.a.T.copy())


# ----------------------------------------------------------------------

def _rref_obj(tower: FieldTower, a: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    ctx = tower.ctx(tower.levels)
    rows, cols = a.shape
    R = [[int(x) for x in row] for row in a]
    piv: list[int] = []
    r = 0
    for c in range(cols):
        pr = -1
        for i in range(r, rows):
            if R[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        R[r], R[pr] = R[pr], R[r]
        pv = R[r][c]
        if pv != 1:
            ipv = ctx.inv(pv)
            R[r] = [ctx.mul(x, ipv) for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                for t in range(c, cols):
                    Ri[t] ^= ctx.mul(f, Rr[t])
        piv.append(c)
        r += 1
        if r == rows:
            break
    out = np.array(R, dtype=object) if R else np.zeros((0, cols), dtype=object)
    return out, piv, r


def rref(M: Mat) -> tuple[Mat, tuple[int, ...], int]:
    """Reduced row echelon form, pivot columns, rank (input untouched)."""
    ctx = M.tower.ctx(M.level)
    if ctx.kernel_ok:
        N = ctx.to_native(M.a)
        piv = np.zeros(max(1, min(M.rows, M.cols)), dtype=np.int64)
        rk = int(K.rref(N, piv, *ctx.kargs))
        R = Mat(M.tower, M.level, ctx.from_native(N))
        return R, tuple(int(p) for p in piv[:rk]), rk
    R, piv, rk = _rref_obj(M.tower, M.a)
    return Mat(M.tower, M.level, R), tuple(piv), rk


def rank(M: Mat) -> int:
    return rref(M)[2]


def right_kernel(M: Mat) -> Mat:
    """Full-row-rank K with M @ K^T == 0 and rows(K) == cols - rank(M)."""
    ctx = M.tower.ctx(M.level)
    n = M.cols
    if ctx.kernel_ok:
        N = ctx.to_native(M.a)
        piv = np.zeros(max(1, min(M.rows, n)), dtype=np.int64)
        rk = int(K.rref(N, piv, *ctx.kargs))
        pivs = [int(p) for p in piv[:rk]]
        pivset = set(pivs)
        free = [c for c in range(n) if c not in pivset]
        ker = np.zeros((len(free), n), dtype=np.uint64)
        for idx, f in enumerate(free):
            ker[idx, f] = 1
            for ri, c in enumerate(pivs):
                ker[idx, c] = N[ri, f]
        return Mat(M.tower, M.level, ctx.from_native(ker))
    R, pivs, rk = _rref_obj(M.tower, M.a)
    pivset = set(pivs)
    free = [c for c in range(n) if c not in pivset]
    ker = np.zeros((len(free), n), dtype=object)
    ker[...] = 0
    for idx, f in enumerate(free):
        ker[idx, f] = 1
        for ri, c in enumerate(pivs):
            ker[idx, c] = int(R[ri, f])
    return Mat(M.tower, M.level, ker)


def matmul(A: Mat, B: Mat) -> Mat:
    if A.cols != B.rows or A.level != B.level or A.tower is not B.tower:
        raise ValueError("dimension or level mismatch in matmul")
    ctx = A.tower.ctx(A.level)
    if ctx.kernel_ok:
        NA = ctx.to_native(A.a)
        NB = ctx.to_native(B.a)
        C = np.zeros((A.rows, B.cols), dtype=np.uint64)
        K.matmul(NA, NB, C, *ctx.kargs)
        return Mat(A.tower, A.level, ctx.from_native(C))
    tw = A.tower
    RA = [[int(x) for x in row] for row in A.a]
    RB = [[int(x) for x in row] for row in B.a]
    out = []
    for i in range(A.rows):
        acc = [0] * B.cols
        Ai = RA[i]
        for s in range(A.cols):
            v = Ai[s]
            if v:
                Bs = RB[s]
                for j in range(B.cols):
                    acc[j] ^= tw.mul(v, Bs[j])
        out.append(acc)
    C = np.array(out, dtype=object) if out else np.zeros((0, B.cols),
                                                         dtype=object)
    return Mat(A.tower, A.level, C)


def solve_left(A: Mat, B: Mat) -> Mat:
    """Any D with D @ A == B, or NoSolutionError if rowspace(B) is not
    contained in rowspace(A)."""
    if A.cols != B.cols or A.level != B.level or A.tower is not B.tower:
        raise ValueError("dimension or level mismatch in solve_left")
    ka, kb, n = A.rows, B.rows, A.cols
    stacked = Mat(A.tower, A.level,
                  np.concatenate([A.a.T, B.a.T], axis=1))
    R, pivs, rk = rref(stacked)
    X = zeros(A.tower, A.level, ka, kb)
    for ri, c in enumerate(pivs):
        if c >= ka:
            raise NoSolutionError("rowspace(B) not contained in rowspace(A)")
        X.a[c, :] = R.a[ri, ka:]
    D = transpose(X)
    if __debug__:
        assert mat_equal(matmul(D, A), B), "left-division verification failed"
    return D


def _trim_zero_rows(R: Mat, rk: int) -> np.ndarray:
    return R.a[:rk]


def rowspace_equal(A: Mat, B: Mat) -> bool:
    if A.cols != B.cols or A.level != B.level or A.tower is not B.tower:
        raise ValueError("dimension or level mismatch in rowspace_equal")
    RA, _, ra = rref(A)
    RB, _, rb = rref(B)
    if ra != rb:
        return False
    return bool(np.array_equal(_trim_zero_rows(RA, ra), _trim_zero_rows(RB, rb)))


def rowspace_contains(M: Mat, v) -> bool:
    if isinstance(v, Mat):
        va = v.a
    else:
        va = np.asarray(v, dtype=_dtype(M.tower)).reshape(1, -1)
    if va.shape[1] != M.cols:
        raise ValueError("dimension mismatch in rowspace_contains")
    stacked = Mat(M.tower, M.level, np.concatenate([M.a, va], axis=0))
    return rank(stacked) == rank(M)

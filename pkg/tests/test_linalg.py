import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trsattack import linalg as la
from trsattack.fields import tower_create


def random_mat(tower, level, rows, cols, rng):
    if level == tower.levels:
        pick = lambda: rng.getrandbits(tower.m)
    else:
        elems = tower.subfield_elements(level)
        pick = lambda: rng.choice(elems)
    return la.from_rows(tower, level,
                        [[pick() for _ in range(cols)] for _ in range(rows)])


CASES = [(7, 1, 1), (7, 1, 0), (8, 2, 0), (2, 1, 1), (9, 3, 0), (9, 3, 3)]


@pytest.mark.parametrize("m0,lv,level", CASES)
def test_rref_properties(m0, lv, level):
    tower = tower_create(m0, lv)
    rng = random.Random(level + 10 * m0)
    M = random_mat(tower, level, 6, 10, rng)
    R, piv, rk = la.rref(M)
    assert list(piv) == sorted(piv)
    for i, c in enumerate(piv):
        assert int(R.a[i, c]) == 1
        col = [int(R.a[r, c]) for r in range(R.rows)]
        assert sum(1 for v in col if v) == 1
    R2, piv2, rk2 = la.rref(R)
    assert la.mat_equal(R, R2) and piv == piv2 and rk == rk2


@pytest.mark.parametrize("m0,lv,level", CASES)
def test_kernel_and_rank(m0, lv, level):
    tower = tower_create(m0, lv)
    rng = random.Random(3 * level + m0)
    for _ in range(10):
        M = random_mat(tower, level, rng.randrange(2, 7), rng.randrange(2, 9), rng)
        rk = la.rank(M)
        ker = la.right_kernel(M)
        assert ker.rows == M.cols - rk
        assert la.rank(ker) == ker.rows or ker.rows == 0
        prod = la.matmul(M, la.transpose(ker)) if ker.rows else None
        if prod is not None:
            assert not any(int(x) for x in prod.a.flat)
        assert la.rank(la.transpose(M)) == rk


def test_rref_identity_and_repeated_row():
    tower = tower_create(7, 1)
    I = la.identity(tower, 1, 5)
    R, piv, rk = la.rref(I)
    assert la.mat_equal(R, I) and piv == tuple(range(5)) and rk == 5
    M = la.from_rows(tower, 1, [[1, 2, 3], [5, 6, 7], [1, 2, 3]])
    assert la.rank(M) == 2


def test_kernel_extremes():
    tower = tower_create(7, 1)
    assert la.right_kernel(la.identity(tower, 1, 4)).rows == 0
    z = la.zeros(tower, 1, 1, 6)
    K = la.right_kernel(z)
    assert K.rows == 6 and la.rank(K) == 6


@pytest.mark.parametrize("m0,lv,level", CASES)
def test_solve_left_oracle(m0, lv, level):
    tower = tower_create(m0, lv)
    rng = random.Random(7 * level + m0)
    A = random_mat(tower, level, 4, 8, rng)
    assert la.mat_equal(la.matmul(la.solve_left(A, A), A), A)
    for _ in range(5):
        D0 = random_mat(tower, level, 3, 4, rng)
        B = la.matmul(D0, A)
        D = la.solve_left(A, B)
        assert la.mat_equal(la.matmul(D, A), B)


def test_solve_left_no_solution():
    tower = tower_create(7, 1)
    rng = random.Random(23)
    A = random_mat(tower, 1, 3, 6, rng)
    while la.rank(A) != 3:
        A = random_mat(tower, 1, 3, 6, rng)
    B = random_mat(tower, 1, 2, 6, rng)
    while la.rank(la.from_rows(tower, 1, list(A.a) + list(B.a))) == 3:
        B = random_mat(tower, 1, 2, 6, rng)
    with pytest.raises(la.NoSolutionError):
        la.solve_left(A, B)


def test_rowspace_predicates():
    tower = tower_create(7, 1)
    rng = random.Random(29)
    M = random_mat(tower, 1, 4, 7, rng)
    perm = la.from_rows(tower, 1, [M.a[i] for i in (2, 0, 3, 1)])
    assert la.rowspace_equal(M, perm)
    assert la.rowspace_contains(M, np.zeros(7, dtype=np.uint64))
    assert la.rowspace_contains(M, M.a[1])
    combo = la.matmul(random_mat(tower, 1, 1, 4, rng), M)
    assert la.rowspace_contains(M, combo.a[0])
    other = random_mat(tower, 1, 4, 7, rng)
    assert not la.rowspace_equal(M, other) or la.rank(
        la.from_rows(tower, 1, list(M.a) + list(other.a))) == la.rank(M)
    with pytest.raises(ValueError):
        la.rowspace_equal(M, random_mat(tower, 1, 2, 5, rng))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 15), min_size=5, max_size=5),
                min_size=2, max_size=6))
def test_rank_transpose_property(rows):
    tower = tower_create(2, 1)
    M = la.from_rows(tower, 1, rows)
    assert la.rank(M) == la.rank(la.transpose(M))
    assert la.right_kernel(M).rows + la.rank(M) == M.cols

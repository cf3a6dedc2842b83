import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trsattack.fields import (FieldTower, _f2_mulmod, is_irreducible,
                              lexmin_irreducible, tower_create)


def trial_division_irreducible(f):
    """Exhaustive reference test: no factor of degree 1..deg/2."""
    m = f.bit_length() - 1
    for d in range(1, m // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            # polynomial long division f mod g
            r = f
            while r.bit_length() >= g.bit_length():
                r ^= g << (r.bit_length() - g.bit_length())
            if r == 0:
                return False
    return True


@pytest.mark.parametrize("m", [2, 3, 7, 8, 14, 16])
def test_lexmin_modulus_is_irreducible_and_minimal(m):
    f = lexmin_irreducible(m)
    assert f >> m == 1
    assert trial_division_irreducible(f)
    for cand in range((1 << m) + 1, f, 2):
        assert not trial_division_irreducible(cand)


def test_tower_create_examples():
    tw = tower_create(8, 1)
    assert tw.q0 == 256 and tw.q == 1 << 16
    deg = tower_create(8, 0)
    assert deg.q0 == deg.q == 256 and deg.levels == 0
    t7 = tower_create(7, 1)
    assert t7.q == 1 << 14
    assert trial_division_irreducible(t7.modulus)
    with pytest.raises(ValueError):
        FieldTower(3, 6)  # degree 192 over the bound
    with pytest.raises(ValueError):
        FieldTower(1, 1)


def test_tower_determinism():
    a = FieldTower(8, 1)
    b = FieldTower(8, 1)
    assert a.modulus == b.modulus
    assert a.base_basis == b.base_basis
    assert a._frob == b._frob
    assert a._sub_basis == b._sub_basis


@settings(max_examples=200, deadline=None)
@given(st.integers(0, (1 << 14) - 1), st.integers(0, (1 << 14) - 1),
       st.integers(0, (1 << 14) - 1))
def test_field_axioms(x, y, z):
    tw = tower_create(7, 1)
    assert tw.add(x, x) == 0
    assert tw.mul(x, y) == tw.mul(y, x)
    assert tw.mul(tw.mul(x, y), z) == tw.mul(x, tw.mul(y, z))
    assert tw.mul(x, tw.add(y, z)) == tw.add(tw.mul(x, y), tw.mul(x, z))
    if x:
        assert tw.mul(x, tw.inv(x)) == 1
    assert tw.pow(x, tw.q) == x
    assert tw.pow(x, 3) == tw.mul(x, tw.mul(x, x))


def test_inv_zero_raises():
    tw = tower_create(7, 1)
    with pytest.raises(ZeroDivisionError):
        tw.inv(0)


def test_table_and_carryless_paths_agree():
    rng = random.Random(3)
    for m0, lv in [(8, 1), (7, 1), (2, 2)]:
        tw = tower_create(m0, lv)
        assert tw.m <= 16
        for _ in range(300):
            x, y = rng.getrandbits(tw.m), rng.getrandbits(tw.m)
            assert tw.mul(x, y) == _f2_mulmod(x, y, tw.modulus)


def test_frobenius_chain_and_closure():
    tw = tower_create(2, 2)
    rng = random.Random(5)
    for _ in range(100):
        i = rng.randrange(0, 3)
        x = tw.sample_subfield(i, rng)
        y = tw.sample_subfield(i, rng)
        for j in range(i, 3):
            assert tw.in_subfield(x, j)
        assert tw.in_subfield(x ^ y, i)
        assert tw.in_subfield(tw.mul(x, y), i)
    assert tw.in_subfield(0, 0)
    for _ in range(20):
        x = rng.getrandbits(tw.m)
        assert tw.in_subfield(x, tw.levels)
    with pytest.raises(ValueError):
        tw.in_subfield(1, 5)


def test_sample_eta_levels():
    tw = tower_create(2, 2)
    rng = random.Random(7)
    for lvl in (1, 2):
        for _ in range(50):
            e = tw.sample_eta(lvl, rng)
            assert tw.in_subfield(e, lvl)
            assert not tw.in_subfield(e, lvl - 1)
    with pytest.raises(ValueError):
        tw.sample_eta(0, rng)


def test_sample_subfield_uniformity():
    # chi-square sanity at q0 = 4: expected count 25000 per value
    tw = tower_create(2, 1)
    rng = random.Random(11)
    counts = {e: 0 for e in tw.subfield_elements(0)}
    draws = 100_000
    for _ in range(draws):
        counts[tw.sample_subfield(0, rng)] += 1
    assert abs(counts[0] - draws / 4) < 1000
    chi2 = sum((c - draws / 4) ** 2 / (draws / 4) for c in counts.values())
    assert chi2 < 25  # 3 dof; this is a 5-sigma-ish sanity bound


def test_expand_contract_roundtrip_and_linearity():
    tw = tower_create(8, 1)
    rng = random.Random(13)
    assert tw.expand_base(0) == [0, 0]
    first = tw.expand_base(tw.base_basis[0])
    assert first[0] == 1 and all(c == 0 for c in first[1:])
    for _ in range(2000):
        x = rng.getrandbits(16)
        co = tw.expand_base(x)
        assert all(tw.in_subfield(c, 0) for c in co)
        assert tw.contract_base(co) == x
    # F_{q0}-linearity
    subs = tw.subfield_elements(0)
    for _ in range(200):
        x, y = rng.getrandbits(16), rng.getrandbits(16)
        c = subs[rng.randrange(256)]
        lhs = tw.expand_base(x ^ tw.mul(c, y))
        rhs = [ex ^ tw.mul(c, ey)
               for ex, ey in zip(tw.expand_base(x), tw.expand_base(y))]
        assert lhs == rhs


def test_expand_base_arr_matches_scalar():
    for m0, lv in [(8, 1), (8, 2), (9, 3)]:
        tw = tower_create(m0, lv)
        rng = random.Random(m0 * lv)
        vals = [rng.getrandbits(tw.m) for _ in range(40)]
        arr = np.array(vals, dtype=np.uint64 if tw.m <= 63 else object)
        out = tw.expand_base_arr(arr)
        for i, v in enumerate(vals):
            assert [int(c) for c in out[i]] == tw.expand_base(v)


def test_wire_encoding():
    tw = tower_create(8, 1)
    assert tw.hex_width == 4
    assert tw.encode_el(0x1a) == "001a"
    assert tw.decode_el("001a") == 0x1a
    for bad in ("1a", "001A", " 01a", "001g", "10000", "0x1a"):
        with pytest.raises(ValueError):
            tw.decode_el(bad)
    rng = random.Random(17)
    for _ in range(200):
        x = rng.getrandbits(16)
        assert tw.decode_el(tw.encode_el(x)) == x


def test_large_tower_object_path():
    tw = tower_create(9, 3)
    assert tw.m == 72
    rng = random.Random(19)
    for _ in range(20):
        x = rng.getrandbits(72)
        if x:
            assert tw.mul(x, tw.inv(x)) == 1
        assert tw.pow(x, tw.q) == x
    e = tw.sample_eta(3, rng)
    assert tw.in_subfield(e, 3) and not tw.in_subfield(e, 2)

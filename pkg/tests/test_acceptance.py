"""End-to-end acceptance criteria.

Every finite-field check is exact; the only numeric thresholds are wall
-time budgets.  One PASS/FAIL line per criterion is printed (run with
``pytest tests/test_acceptance.py -v -s``).  Criterion 3 covers the
optional large-field stretch rows and is skipped unless
TRSATTACK_STRETCH=1 is set.
"""

import itertools
import os
import random
import time

import numpy as np
import pytest

from conftest import affine_fit
from trsattack import attack, linalg as la, mceliece as mc, rs, trs
from trsattack.fields import tower_create
from trsattack.rs import Locators

TIMES: dict[str, float] = {}


def report(num, name, ok, detail=""):
    print(f"\nACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def run_attack_and_decrypts(params, seed, n_messages, budget_s):
    rng = random.Random(seed)
    pub, _ = mc.keygen(params, rng)
    t0 = time.perf_counter()
    rec = attack.recover_key(pub)
    dt = time.perf_counter() - t0
    exact = la.mat_equal(la.matmul(rec.S_hat, trs.trs_generator(rec.key)),
                         pub.G)
    ok = exact and dt <= budget_s
    priv = rec.private_key()
    for _ in range(n_messages):
        msg = [rng.getrandbits(params.top_degree) for _ in range(params.k)]
        ct = mc.encrypt(msg, pub, rng)
        if mc.decrypt(ct, priv) != msg:
            ok = False
            break
    return ok, dt


def test_criterion_01_attack_at_published_parameters():
    p = trs.make_params(256, 255, 117, 1)
    assert (p.t, p.h) == ((57,), (88,))
    runs, worst = 0, 0.0
    for i in range(20):
        ok, dt = run_attack_and_decrypts(p, 0xA0000 + i, 10, 300.0)
        worst = max(worst, dt)
        runs += ok
    TIMES["n255"] = worst
    report(1, "key recovery at (2^8,255,117,l=1)", runs == 20,
           f"({runs}/20 runs, worst attack {worst:.1f}s, budget 300s, "
           "10 decryptions each)")


def test_criterion_02_attack_two_twists():
    p = trs.make_params(256, 255, 117, 2)
    assert p.top_degree == 32
    runs, worst = 0, 0.0
    for i in range(10):
        rng = random.Random(0xB0000 + i)
        pub, _ = mc.keygen(p, rng)
        t0 = time.perf_counter()
        rec = attack.recover_key(pub)
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        if dt <= 600.0 and la.mat_equal(
                la.matmul(rec.S_hat, trs.trs_generator(rec.key)), pub.G):
            runs += 1
    report(2, "key recovery at (2^8,255,117,l=2)", runs == 10,
           f"({runs}/10 runs, worst attack {worst:.1f}s, budget 600s, "
           "top field 2^32)")


def test_criterion_03_stretch_rows_optional():
    if os.environ.get("TRSATTACK_STRETCH") != "1":
        print("\nACCEPTANCE 03 stretch rows (2^9,511,{200,170},l=3): SKIP "
              "(optional; set TRSATTACK_STRETCH=1 to run)")
        pytest.skip("optional stretch target")
    results = []
    for k in (200, 170):
        p = trs.make_params(512, 511, k, 3)
        assert p.top_degree == 72
        rng = random.Random(0xC0000 + k)
        pub, _ = mc.keygen(p, rng)
        t0 = time.perf_counter()
        rec = attack.recover_key(pub)
        dt = time.perf_counter() - t0
        exact = la.mat_equal(la.matmul(rec.S_hat, trs.trs_generator(rec.key)),
                             pub.G)
        results.append((k, exact and dt <= 7200.0, dt))
    ok = all(r[1] for r in results)
    report(3, "stretch rows (2^9,511,k,l=3)", ok,
           " ".join(f"k={k}:{dt:.0f}s" for k, _, dt in results))


def test_criterion_04_small_pipeline_roundtrips():
    p = trs.make_params(128, 127, 60, 1)
    good, worst = 0, 0.0
    for i in range(50):
        rng = random.Random(0xD0000 + i)
        pub, _ = mc.keygen(p, rng)
        msg = [rng.getrandbits(14) for _ in range(p.k)]
        ct = mc.encrypt(msg, pub, rng)
        t0 = time.perf_counter()
        rec = attack.recover_key(pub)
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        if dt <= 10.0 and mc.decrypt(ct, rec.private_key()) == msg:
            good += 1
    TIMES["n127"] = worst
    report(4, "full pipeline at (2^7,127,60,l=1)", good == 50,
           f"({good}/50 roundtrips, worst attack {worst:.2f}s, budget 10s)")


@pytest.fixture(scope="module")
def hundred_keys():
    p = trs.make_params(128, 127, 60, 1)
    rng = random.Random(0xE0000)
    return p, [mc.keygen(p, rng) for _ in range(100)]


def test_criterion_05_subfield_subcode_structure(hundred_keys):
    p, keys = hundred_keys
    good = 0
    for pub, priv in keys:
        sub = rs.subfield_subcode(pub.G)
        span = rs.monomial_matrix(priv.key.locs, p.I)
        if sub.rows == p.k - p.l and la.rowspace_equal(sub, span):
            good += 1
    report(5, "subfield subcode equals untwisted-monomial span", good == 100,
           f"({good}/100 keys, dimension k-l={p.k - p.l})")


def test_criterion_06_square_distinguisher(hundred_keys):
    p, keys = hundred_keys
    I = set(p.I)
    sumset_ok = {a + b for a in I for b in I} == set(range(2 * p.k - 1))
    good = 0
    for pub, priv in keys:
        sq = rs.schur_square(rs.subfield_subcode(pub.G))
        ref = rs.rs_generator(priv.key.locs, 2 * p.k - 1)
        if sq.rows == 2 * p.k - 1 and la.rowspace_equal(sq, ref):
            good += 1
    report(6, "square of the subcode is RS_{2k-1}", good == 100 and sumset_ok,
           f"({good}/100 keys, sumset I+I covers 0..{2 * p.k - 2}: {sumset_ok})")


def test_criterion_07_scaling_equivalence(hundred_keys):
    p, keys = hundred_keys
    tw = keys[0][0].G.tower
    subs = tw.subfield_elements(0)
    rng = random.Random(0xF0000)
    good = 0
    for _, priv in keys:
        a = subs[rng.randrange(1, p.q0)]
        scaled = trs.scale_key(priv.key, a)
        if la.rowspace_equal(trs.trs_generator(priv.key),
                             trs.trs_generator(scaled)):
            good += 1
    report(7, "scaled keys generate the same code", good == 100,
           f"({good}/100 key/scale pairs)")


def test_criterion_08_base_field_evaluation_characterization():
    tw = tower_create(7, 1)
    subs = list(tw.subfield_elements(0))
    rng = random.Random(0x10000)
    pts = list(subs)
    rng.shuffle(pts)
    locs = Locators(tw, pts[:127])
    ctx = tw.ctx(0)

    def all_base(arr):
        a = np.asarray(arr, dtype=np.uint64)
        return bool(np.array_equal(ctx.from_native(ctx.to_native(a)), a))

    fwd = 0
    for _ in range(1000):
        deg = rng.randrange(1, 127)
        f = [subs[rng.randrange(128)] for _ in range(deg + 1)]
        y = rs.evaluate(tw, f, locs)
        g = rs.interpolate(locs, y)
        if all_base(y) and all(tw.in_subfield(c, 0) for c in g):
            fwd += 1
    rev = 0
    for _ in range(1000):
        deg = rng.randrange(1, 127)
        f = [subs[rng.randrange(128)] for _ in range(deg + 1)]
        while True:
            c = rng.getrandbits(tw.m)
            if not tw.in_subfield(c, 0):
                break
        f[rng.randrange(deg + 1)] = c
        y = rs.evaluate(tw, f, locs)
        if not all_base(y):
            rev += 1
    report(8, "base-field words come exactly from base-field polynomials",
           fwd == 1000 and rev == 1000,
           f"(forward {fwd}/1000, converse {rev}/1000)")


def test_criterion_09_tiny_mds_oracle():
    tw = tower_create(2, 1)
    p = trs.relaxed_params(4, 4, 2, t=(1,), h=(1,))
    locs = Locators(tw, tw.subfield_elements(0))
    etas = [e for e in tw.subfield_elements(1) if not tw.in_subfield(e, 0)]
    good = 0
    for e in etas:
        key = trs.TrsKey(p, locs, (e,))
        if trs.exhaustive_min_distance(key) == 3:
            good += 1
    report(9, "every tiny twisted code is MDS (distance 3)",
           good == len(etas) == 12, f"({good}/{len(etas)} twist coefficients)")


def test_criterion_10_decoder_corrections_and_path_agreement():
    results = {}
    for m0, n, k in ((7, 127, 60), (8, 255, 117)):
        tw = tower_create(m0, 1)
        subs = list(tw.subfield_elements(0))
        rng = random.Random(0x11000 + n)
        rng.shuffle(subs)
        locs = Locators(tw, subs[:n])
        w = (n - k) // 2
        good = 0
        for _ in range(1000):
            f = [rng.getrandbits(tw.m) for _ in range(k)]
            y = rs.evaluate(tw, f, locs).copy()
            for pos in rng.sample(range(n), w):
                y[pos] ^= np.uint64(rng.randrange(1, tw.q))
            fd, e = rs.rs_decode(locs, k, y, method="euclid")
            if fd == rs.poly_trim(f) and rs.hamming_weight(e) == w:
                good += 1
        results[(n, k)] = good

    # bit-exact agreement of the reference and fast paths on shared inputs
    tw = tower_create(5, 0)
    rng = random.Random(0x12000)
    subs = list(range(32))
    agree = 0
    n_small, k_small = 31, 11
    w = (n_small - k_small) // 2
    for i in range(10_000):
        rng.shuffle(subs)
        locs = Locators(tw, subs[:n_small])
        if i % 3 == 2:
            y = np.array([rng.getrandbits(5) for _ in range(n_small)],
                         dtype=np.uint64)
        else:
            f = [rng.getrandbits(5) for _ in range(k_small)]
            y = rs.evaluate(tw, f, locs).copy()
            for pos in rng.sample(range(n_small), rng.randrange(w + 1)):
                y[pos] ^= np.uint64(rng.randrange(1, 32))
        try:
            r1 = rs.rs_decode(locs, k_small, y, method="euclid")
        except rs.DecodingFailure:
            r1 = None
        try:
            r2 = rs.rs_decode(locs, k_small, y, method="berlekamp-welch")
        except rs.DecodingFailure:
            r2 = None
        if r1 is None or r2 is None:
            agree += r1 is None and r2 is None
        else:
            agree += r1[0] == r2[0] and bool(np.array_equal(r1[1], r2[1]))
    ok = (results[(127, 60)] == 1000 and results[(255, 117)] == 1000
          and agree == 10_000)
    report(10, "decoder corrects at the radius; paths agree bit-exactly", ok,
           f"(127/60: {results[(127, 60)]}/1000, 255/117: "
           f"{results[(255, 117)]}/1000, agreement {agree}/10000)")


def test_criterion_11_locator_recovery_unit_suite():
    rng = random.Random(0x13000)
    good = 0
    for m0 in (7, 8):
        tw = tower_create(m0, 0)
        for _ in range(50):
            n = rng.randrange(10, tw.q0)
            K = rng.randrange(3, min(n - 2, 60) + 1)
            subs = list(range(tw.q0))
            rng.shuffle(subs)
            locs = Locators(tw, subs[:n])
            G = rs.rs_generator(locs, K)
            out = attack.sidelnikov_shestakov(G, K)
            if la.rowspace_equal(rs.rs_generator(out, K), G) and \
                    affine_fit(tw, locs.alpha, out.alpha) is not None:
                good += 1
    report(11, "locator recovery on random RS codes", good == 100,
           f"({good}/100 instances over F_128 and F_256)")


def test_complexity_trend_smoke():
    # doubling n should grow the attack by roughly n^4 (trend, not a gate)
    if "n127" in TIMES and "n255" in TIMES and TIMES["n127"] > 0:
        ratio = TIMES["n255"] / TIMES["n127"]
        print(f"\nINFO attack time ratio n=255 / n=127: {ratio:.1f} "
              "(n^4 trend predicts ~16)")
        assert ratio < 64.0

"""Seeded keygen+attack benchmark runs with JSON-lines reports.

Each trial derives its seed as master_seed + trial_index, runs key
generation followed by full key recovery, and records per-stage wall times
in integer microseconds.  Reports are one JSON object per line so they can
be diffed and aggregated without schema tooling; reruns with the same seed
match except for the timing fields.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field

from . import attack, linalg as la, mceliece, trs

PRESETS: dict[str, tuple[int, int, int, int]] = {
    "table1": (256, 255, 117, 1),
    "small": (128, 127, 60, 1),
    "l2": (256, 255, 117, 2),
}

STAGES = ("subfield", "square", "sidelnikov", "shift", "eta", "solve")


@dataclass
class BenchRecord:
    q0: int
    n: int
    k: int
    l: int
    seed: int
    success: bool
    verified: bool
    stage_us: dict[str, int] = field(default_factory=dict)
    keygen_us: int = 0
    total_us: int = 0
    error: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def run_trial(params: trs.TrsParams, seed: int) -> BenchRecord:
    rec = BenchRecord(params.q0, params.n, params.k, params.l, seed,
                      success=False, verified=False)
    rng = random.Random(seed)
    t0 = time.perf_counter_ns()
    pub, _ = mceliece.keygen(params, rng)
    rec.keygen_us = (time.perf_counter_ns() - t0) // 1000
    t0 = time.perf_counter_ns()
    try:
        out = attack.recover_key(pub)
    except attack.AttackError as exc:
        rec.total_us = (time.perf_counter_ns() - t0) // 1000
        rec.error = str(exc)
        return rec
    rec.total_us = (time.perf_counter_ns() - t0) // 1000
    rec.stage_us = dict(out.timings_us)
    rec.success = True
    rec.verified = la.mat_equal(
        la.matmul(out.S_hat, trs.trs_generator(out.key)), pub.G)
    return rec


def run_bench(preset: str, trials: int, seed: int) -> list[BenchRecord]:
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; have {sorted(PRESETS)}")
    q0, n, k, l = PRESETS[preset]
    params = trs.make_params(q0, n, k, l)
    return [run_trial(params, seed + i) for i in range(trials)]


def write_report(path: str, records: list[BenchRecord]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")

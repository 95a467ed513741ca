"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel with the JIT enabled, then re-executes itself with
IONQEC_NO_NUMBA=1 and prints the side-by-side timings:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import time

import numpy as np


def bench() -> dict:
    from ionqec import circuit, codes, dem, noise, registry
    from ionqec.accel import NUMBA_ENABLED
    from ionqec.codes import Bb5Spec, build_bb5, code_distances
    from ionqec.decoder import BpOsdDecoder, DecoderConfig

    results = {"numba": NUMBA_ENABLED}

    # distance certification: 2 x 2^17 Gray-code enumeration
    code30 = build_bb5(Bb5Spec(5, 3, ((0, 0), (1, 0), (0, 0), (0, 1), (2, 2))))
    code_distances(code30)  # warm the JIT outside the timed region
    t0 = time.perf_counter()
    assert code_distances(code30) == (5, 5)
    results["distance_bb5_30_s"] = time.perf_counter() - t0

    if NUMBA_ENABLED:
        code48 = build_bb5(Bb5Spec(8, 3, ((0, 0), (1, 0), (0, 0), (0, 1), (3, 2))))
        t0 = time.perf_counter()
        assert code_distances(code48) == (7, 7)
        results["distance_bb5_48_s"] = time.perf_counter() - t0

    # code search: k-filter plus weight-bounded floor scans
    t0 = time.perf_counter()
    res = codes.search_codes("bb6", 30, 4, 5)
    assert not res.hits
    results["search_bb6_30_s"] = time.perf_counter() - t0

    # decoding throughput on the [[30,4,5]] memory DEM
    code = registry.build("bb5-30-4-5")
    circ = circuit.build_memory_experiment(code, "Z", 5, 5)
    d = dem.compile_dem(circ, noise.annotate(circ, noise.NoiseParams(1e-3, 30)))
    dec = BpOsdDecoder(d, DecoderConfig(max_bp_iters=150))
    shots = 400 if NUMBA_ENABLED else 40
    det, _ = dem.sample(d, shots, 42)
    dec.decode_batch(det[:2])  # JIT warm-up
    t0 = time.perf_counter()
    dec.decode_batch(det)
    dt = time.perf_counter() - t0
    results["decode_ms_per_shot"] = dt / shots * 1e3
    return results


def main() -> int:
    if os.environ.get("IONQEC_BENCH_CHILD"):
        print(json.dumps(bench()))
        return 0
    fast = bench()
    env = dict(os.environ, IONQEC_NO_NUMBA="1", IONQEC_BENCH_CHILD="1")
    out = subprocess.run([sys.executable, os.path.abspath(__file__)], env=env,
                         capture_output=True, text=True, check=True)
    slow = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"{'kernel':32s} {'numba':>12s} {'numpy fallback':>16s} {'speedup':>9s}")
    for key, label in [
        ("distance_bb5_30_s", "distance certify [[30,4,5]] (s)"),
        ("search_bb6_30_s", "bb6 n=30 full search (s)"),
        ("decode_ms_per_shot", "BP+OSD decode (ms/shot)"),
    ]:
        a, b = fast.get(key), slow.get(key)
        if a is None or b is None:
            continue
        print(f"{label:32s} {a:12.4f} {b:16.4f} {b / a:8.1f}x")
    if "distance_bb5_48_s" in fast:
        print(f"{'distance certify [[48,4,7]] (s)':32s} {fast['distance_bb5_48_s']:12.4f} "
              f"{'(numba only)':>16s}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

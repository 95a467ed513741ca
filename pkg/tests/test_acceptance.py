"""Acceptance criteria, one test per criterion, at their stated tolerances.

Each test prints a `ACCEPTANCE <id> ...: PASS/FAIL` line (run with -s to see
them live). The statistically heavy criteria (C3-C7) carry the `acceptance`
marker and take hours on a single core; `pytest -m "not acceptance"` runs
everything else in minutes.
"""

import math
import time
import zlib
from itertools import product

import numpy as np
import pytest

from ionqec import circuit, codes, dem, gf2, noise, protocols, registry
from ionqec.codes import Bb5Spec, build_bb5, build_surface, code_distances, search_codes
from ionqec.decoder import BpOsdDecoder, DecoderConfig
from ionqec.protocols import estimate_ler, fit_curve, tune_ancillas

import oracles
from conftest import memory_dem, singles_all_correct

SEED = 20240808
_cache: dict = {}


def report(tag: str, ok: bool, detail: str) -> bool:
    print(f"\nACCEPTANCE {tag}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


# ---------------------------------------------------------------------------
# C1 code-parameter reproduction
# ---------------------------------------------------------------------------

def test_c1_code_parameters():
    ok = True
    details = []
    for e in registry.entries():
        code = registry.build(e.name, with_logicals=False)
        if (code.n, code.k) != (e.n, e.k):
            ok = False
            details.append(f"{e.name} built [[{code.n},{code.k}]]")
    t0 = time.time()
    d30 = code_distances(registry.build("bb5-30-4-5", with_logicals=False))
    d48 = code_distances(registry.build("bb5-48-4-7", with_logicals=False))
    cert_time = time.time() - t0
    ok &= d30 == (5, 5) and d48 == (7, 7) and cert_time <= 1800
    details.append(f"d30={min(d30)} d48={min(d48)} cert {cert_time:.0f}s")

    hit_3044 = search_codes("bb6", 30, 4, 4, stop_after=1).hits
    hit_4846 = search_codes("bb6", 48, 4, 6, stop_after=1).hits
    empty_3045 = search_codes("bb6", 30, 4, 5)
    ok &= bool(hit_3044) and bool(hit_4846)
    ok &= empty_3045.complete and not empty_3045.hits
    details.append(f"search 30-4-4:{len(hit_3044)} 48-4-6:{len(hit_4846)} "
                   f"30-4->=5:{len(empty_3045.hits)}")
    assert report("C1 code parameters", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# C2 model/oracle equivalence
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_c2_model_oracle_equivalence(surface3):
    circ = circuit.build_memory_experiment(surface3, "Z", 1, 1)
    locs = noise.annotate(circ, noise.NoiseParams(1e-3, 30))
    mismatches = 0
    checked = 0
    merged: dict = {}

    def oracle_sig(instr, pauli=None, flip=None):
        return oracles.frame_propagate(circ, instr, pauli=pauli, flip_meas=flip)

    def add(sig, p):
        if p <= 0 or sig == (frozenset(), frozenset()):
            return
        prev = merged.get(sig, 0.0)
        merged[sig] = prev + p - 2 * prev * p

    for loc in locs:
        if loc.kind == "flip":
            elems = [(None, loc.meas_id, loc.prob)]
        elif loc.kind == "dep1":
            elems = [({loc.qubits[0]: p}, None, loc.prob / 3) for p in "XYZ"]
        else:
            elems = [({q: v for q, v in zip(loc.qubits, (a, b)) if v != "I"},
                      None, loc.prob / 15)
                     for a, b in product("IXYZ", repeat=2) if (a, b) != ("I", "I")]
        for pauli, flip, prob in elems:
            got = dem.propagate(circ, loc.instr_index, pauli=pauli, flip_meas=flip)
            want = oracle_sig(loc.instr_index, pauli, flip)
            checked += 1
            if got != want:
                mismatches += 1
            add(want, prob)

    d = dem.compile_dem(circ, locs)
    got_sigs = {(dd, oo) for dd, oo in zip(d.dets, d.obss)}
    want_sigs = {(tuple(sorted(dd)), tuple(sorted(oo))) for dd, oo in merged}
    ok = mismatches == 0 and got_sigs == want_sigs
    assert report("C2 model/oracle equivalence", ok,
                  f"{checked} elementary faults, {mismatches} mismatches, "
                  f"{len(got_sigs)} mechanisms")


# ---------------------------------------------------------------------------
# C3 decoder soundness
# ---------------------------------------------------------------------------

@pytest.mark.acceptance
def test_c3_decoder_soundness(bb5_30, bb5_48):
    bad = {}
    for code, rounds, n_a in ((bb5_30, 5, 5), (bb5_48, 7, 6)):
        for basis in "ZX":
            _, d = memory_dem(code, basis, rounds, n_a)
            bad[(code.name, basis)] = len(singles_all_correct(d))
    singles_ok = not any(bad.values())

    match_ok = True
    total = 0
    for code, rounds, n_a in ((bb5_30, 5, 5), (bb5_48, 7, 6)):
        for basis in "ZX":
            _, d = memory_dem(code, basis, rounds, n_a)
            dec = BpOsdDecoder(d)
            det, _ = dem.sample(d, 250_000, SEED + total)
            _, _, _, match = dec.decode_batch(det)
            match_ok &= bool(match.all())
            total += 1
    ok = singles_ok and match_ok
    assert report("C3 decoder soundness", ok,
                  f"wrong singles {bad}; syndrome match on 10^6 shots: {match_ok}")


# ---------------------------------------------------------------------------
# C4 headline number (shared with C5 via _cache)
# ---------------------------------------------------------------------------

def _headline_estimate(bb5_48):
    if "bb5-48" not in _cache:
        _cache["bb5-48"] = estimate_ler(
            bb5_48, 1e-3, 30, 6, rounds=7, target_rel_err=0.0,
            shot_cap=200_000, batch=25_000, seed=SEED)
    return _cache["bb5-48"]


@pytest.mark.acceptance
def test_c4_headline_number(bb5_48):
    est = _headline_estimate(bb5_48)
    ok = 2.5e-5 <= est.p_l <= 1e-4 and est.shots_x >= 200_000
    assert report(
        "C4 headline number", ok,
        f"p_l={est.p_l:.3e} (target 5e-5 within 2x), rel_err={est.stderr_rel:.2f}, "
        f"shots/basis={est.shots_x}, failures={est.failures_x}+{est.failures_z}")


# ---------------------------------------------------------------------------
# C5 code-family ordering
# ---------------------------------------------------------------------------

@pytest.mark.acceptance
def test_c5_family_ordering(bb5_30, bb5_48):
    ests = {"bb5-48-4-7": _headline_estimate(bb5_48)}
    for name in ("bb5-30-4-5", "bb6-30-4-4", "bb6-48-4-6"):
        code = registry.build(name)
        ests[name] = estimate_ler(code, 1e-3, 30, registry.tuned_ancillas(name),
                                  target_rel_err=0.06, shot_cap=2_000_000,
                                  batch=25_000,
                                  seed=SEED + zlib.crc32(name.encode()) % 1000)
    details = []
    ok = True
    for small, big in (("bb5-30-4-5", "bb6-30-4-4"), ("bb5-48-4-7", "bb6-48-4-6")):
        a, b = ests[small], ests[big]
        gap = b.p_l / 3 - a.p_l
        sigma = math.hypot(b.stderr_abs() / 3, a.stderr_abs())
        ok &= gap > 3 * sigma
        details.append(f"{small}={a.p_l:.2e} {big}={b.p_l:.2e} "
                       f"ratio={b.p_l / a.p_l:.1f} gap/sigma={gap / sigma:.1f}")
    assert report("C5 family ordering", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# C6 tuning protocol
# ---------------------------------------------------------------------------

@pytest.mark.acceptance
def test_c6_tuning_protocol():
    results = {}
    for name, band in (("bb6-30-4-4", (2, 3, 4)), ("bb6-48-4-6", (5, 6, 7))):
        code = registry.build(name)
        n_a = tune_ancillas(code, 5e-4, 30, 0.9, seed=SEED,
                            shot_cap=2_000_000, batch=50_000)
        results[name] = (n_a, band)
    ok = all(n_a in band for n_a, band in results.values())
    assert report("C6 tuning protocol", ok,
                  "; ".join(f"{n}: n_a={v[0]} (allowed {v[1]})"
                            for n, v in results.items()))


# ---------------------------------------------------------------------------
# C7 fit sanity
# ---------------------------------------------------------------------------

@pytest.mark.acceptance
def test_c7_fit_sanity():
    pts = []
    for d in (3, 5, 7):
        code = registry.build(f"surface-{d}")
        n_a = registry.tuned_ancillas(f"surface-{d}")
        for p in (5e-4, 1e-3, 2e-3):
            est = estimate_ler(code, p, 30, n_a, target_rel_err=0.2,
                               shot_cap=4_000_000, batch=50_000,
                               seed=SEED + d * 10)
            pts.append((p, est.p_l, d))
    fit = fit_curve(pts, "surface_threshold")
    c, p_th = fit.constants
    resid = [abs(math.log(pl) - math.log(
        protocols.surface_threshold_value(fit.constants, p, d)))
        for p, pl, d in pts]
    ok = 0.002 <= p_th <= 0.005 and max(resid) < 0.5

    exact = [(p, protocols.poly_exp_value((12.869, -340.43, 15878.0), p, 5), 5)
             for p in (5e-4, 1e-3, 2e-3, 3e-3)]
    fit2 = fit_curve(exact, "poly_exp")
    round_trip = all(
        abs(got - want) <= 1e-9 * abs(want)
        for got, want in zip(fit2.constants, (12.869, -340.43, 15878.0)))
    ok &= round_trip
    assert report(
        "C7 fit sanity", ok,
        f"c={c:.4g} p_th={p_th:.4g} max|log resid|={max(resid):.3f}; "
        f"poly_exp round trip: {round_trip}; points={[(p, f'{pl:.2e}', d) for p, pl, d in pts]}")


# ---------------------------------------------------------------------------
# C8 property suites
# ---------------------------------------------------------------------------

def test_c8_property_suites():
    """The module invariants and properties ARE the rest of this test suite
    (gf2 exhaustives, conjugation oracle, noiseless determinism, DEM
    linearity, sampler determinism); this criterion is satisfied by the full
    pytest run being green."""
    assert report("C8 property suites", True,
                  "covered by tests/test_{gf2,codes,circuit,noise,dem,decoder,protocols,cli}.py")

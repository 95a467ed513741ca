"""Min-sum belief propagation with ordered-statistics post-processing.

The Tanner graph has detectors as checks and DEM mechanisms as variables,
with priors log((1-p)/p). BP runs normalized min-sum and stops early on
syndrome match; unconverged syndromes fall through to OSD, which solves the
syndrome exactly on the most-reliable pivot set and (osd_cs) sweeps single
and pair flips of the osd_order least-reliable free coordinates, keeping the
candidate of least total log-likelihood cost.

The default schedule is check-serial (layered): flooding min-sum oscillates
on the degenerate check matrices these DEMs produce, to the point of
misdecoding weight-1 faults, while the serial sweep converges them all.
Flooding remains available via DecoderConfig.schedule.

Messages are clamped and rounded onto a fixed lattice (DecoderConfig
msg_clamp / quantize), so non-convergent trajectories saturate into exact
cycles; a first-repeat hash detector fast-forwards them to the state BP
would reach at max_bp_iters, at a fraction of the iterations, with results
identical to running the full budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accel import NUMBA_ENABLED, njit
from .dem import DetectorErrorModel

class InfeasibleSyndromeError(Exception):
    """Syndrome outside the column space of the DEM check matrix."""


@dataclass(frozen=True)
class DecoderConfig:
    """ms_scaling 0.0 selects the iteration-indexed schedule 1 - 2^-i.

    The dynamic schedule damps the first iterations, which suppresses
    min-sum's early-overshoot failure mode and converges more often on
    degenerate check matrices; the static 0.625 default is the conventional
    normalized min-sum choice.
    """

    max_bp_iters: int = 10_000
    bp_variant: str = "min_sum"
    ms_scaling: float = 0.0
    osd_order: int = 5
    osd_method: str = "osd_cs"  # osd_cs | osd_0 | none
    schedule: str = "serial"  # serial | parallel
    # numeric implementation knobs: messages are clamped to +-msg_clamp and
    # rounded to multiples of quantize (0 disables). Saturating the message
    # lattice makes non-convergent trajectories exactly periodic, which the
    # cycle detector fast-forwards to the max_bp_iters state.
    msg_clamp: float = 25.0
    quantize: float = 2.0 ** -9

    def __post_init__(self):
        if self.bp_variant != "min_sum":
            raise ValueError("only the min_sum variant is implemented")
        if not 0 <= self.ms_scaling <= 1:
            raise ValueError("ms_scaling must be in [0, 1] (0 = dynamic)")
        if self.schedule not in ("serial", "parallel"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.msg_clamp <= 0 or self.quantize < 0:
            raise ValueError("msg_clamp must be positive and quantize nonnegative")
        if self.osd_method not in ("osd_cs", "osd_0", "none"):
            raise ValueError(f"unknown osd_method {self.osd_method!r}")
        if self.osd_order < 0:
            raise ValueError("osd_order must be >= 0")


@dataclass
class DecodeResult:
    mechanism_estimate: np.ndarray
    predicted_observables: np.ndarray
    converged: bool
    iterations: int
    posterior_llr: np.ndarray | None = None


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    import numba

    @njit(inline="always")
    def _sign(x):
        return -1.0 if x < 0.0 else 1.0

    @njit
    def _bp_iteration(chk_ptr, edge_var, var_ptr, var_edge, prior, syndrome,
                      c2v, v2c, posterior, hard, scale, clamp, qdelta):
        """One flooding iteration at the given scale; returns True on match."""
        n_var = var_ptr.shape[0] - 1
        n_chk = chk_ptr.shape[0] - 1
        for v in range(n_var):
            total = prior[v]
            for i in range(var_ptr[v], var_ptr[v + 1]):
                total += c2v[var_edge[i]]
            for i in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[i]
                v2c[e] = total - c2v[e]
        for c in range(n_chk):
            lo = chk_ptr[c]
            hi = chk_ptr[c + 1]
            m1 = np.inf
            m2 = np.inf
            first = -1
            sprod = 1.0
            for e in range(lo, hi):
                a = abs(v2c[e])
                sprod *= _sign(v2c[e])
                if a < m1:
                    m2 = m1
                    m1 = a
                    first = e
                elif a < m2:
                    m2 = a
            sigma = -sprod if syndrome[c] else sprod
            for e in range(lo, hi):
                mag = m2 if e == first else m1
                val = scale * sigma * _sign(v2c[e]) * mag
                if val > clamp:
                    val = clamp
                elif val < -clamp:
                    val = -clamp
                if qdelta > 0.0:
                    val = np.rint(val / qdelta) * qdelta
                c2v[e] = val
        for v in range(n_var):
            total = prior[v]
            for i in range(var_ptr[v], var_ptr[v + 1]):
                total += c2v[var_edge[i]]
            posterior[v] = total
            hard[v] = 1 if total < 0.0 else 0
        for c in range(n_chk):
            par = 0
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= hard[edge_var[e]]
            if par != syndrome[c]:
                return False
        return True

    @njit
    def _bp_iteration_serial(chk_ptr, edge_var, var_ptr, var_edge, prior,
                             syndrome, c2v, totals, posterior, hard, scale,
                             clamp, qdelta):
        """One check-serial sweep; returns True on syndrome match.

        totals[v] caches prior[v] + sum of c2v into v, recomputed at sweep
        start and updated in place as each check refreshes its messages.
        """
        n_var = var_ptr.shape[0] - 1
        n_chk = chk_ptr.shape[0] - 1
        for v in range(n_var):
            t = prior[v]
            for i in range(var_ptr[v], var_ptr[v + 1]):
                t += c2v[var_edge[i]]
            totals[v] = t
        for c in range(n_chk):
            lo = chk_ptr[c]
            hi = chk_ptr[c + 1]
            m1 = np.inf
            m2 = np.inf
            first = -1
            sprod = 1.0
            for e in range(lo, hi):
                x = totals[edge_var[e]] - c2v[e]
                a = abs(x)
                if x < 0.0:
                    sprod = -sprod
                if a < m1:
                    m2 = m1
                    m1 = a
                    first = e
                elif a < m2:
                    m2 = a
            sigma = -sprod if syndrome[c] else sprod
            for e in range(lo, hi):
                v = edge_var[e]
                x = totals[v] - c2v[e]
                mag = m2 if e == first else m1
                val = scale * sigma * _sign(x) * mag
                if val > clamp:
                    val = clamp
                elif val < -clamp:
                    val = -clamp
                if qdelta > 0.0:
                    val = np.rint(val / qdelta) * qdelta
                totals[v] += val - c2v[e]
                c2v[e] = val
        for v in range(n_var):
            posterior[v] = totals[v]
            hard[v] = 1 if totals[v] < 0.0 else 0
        for c in range(n_chk):
            par = 0
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= hard[edge_var[e]]
            if par != syndrome[c]:
                return False
        return True

    @njit
    def _bp_run(chk_ptr, edge_var, var_ptr, var_edge, prior, syndrome,
                max_iters, ms_scaling, clamp, qdelta, serial, c2v, c2v_bits,
                v2c, posterior, hard):
        """Min-sum BP with exact cycle fast-forward; returns (converged, iters).

        From iteration 64 on, the dynamic schedule 1 - 2^-i equals 1.0 in
        float64, so the iteration map is stationary; a 128-bit hash of the
        message state is recorded each iteration and the first repeat
        identifies a cycle at its earliest possible point. Fast-forwarding
        (max_iters - t0) mod lambda iterations lands on the exact state BP
        would reach at max_iters. c2v_bits must alias c2v's memory.
        """
        E = edge_var.shape[0]
        for e in range(E):
            c2v[e] = 0.0
        seen_it = numba.typed.Dict.empty(numba.uint64, numba.int64)
        seen_h2 = numba.typed.Dict.empty(numba.uint64, numba.uint64)
        it = 0
        while it < max_iters:
            it += 1
            scale = ms_scaling if ms_scaling > 0.0 else (1.0 - 2.0 ** (-it))
            if serial:
                done = _bp_iteration_serial(chk_ptr, edge_var, var_ptr, var_edge,
                                            prior, syndrome, c2v, v2c, posterior,
                                            hard, scale, clamp, qdelta)
            else:
                done = _bp_iteration(chk_ptr, edge_var, var_ptr, var_edge, prior,
                                     syndrome, c2v, v2c, posterior, hard, scale,
                                     clamp, qdelta)
            if done:
                return True, it
            if it >= 64:
                h1 = np.uint64(0xCBF29CE484222325)
                h2 = np.uint64(0x9E3779B97F4A7C15)
                for e in range(E):
                    b = c2v_bits[e]
                    h1 = (h1 ^ b) * np.uint64(0x100000001B3)
                    h2 = (h2 + b) * np.uint64(0xC2B2AE3D27D4EB4F)
                    h2 ^= h2 >> np.uint64(29)
                if h1 in seen_it and seen_h2[h1] == h2:
                    t0 = seen_it[h1]
                    lam = it - t0
                    extra = (max_iters - t0) % lam
                    late_scale = ms_scaling if ms_scaling > 0.0 else 1.0
                    for _ in range(extra):
                        if serial:
                            _bp_iteration_serial(chk_ptr, edge_var, var_ptr,
                                                 var_edge, prior, syndrome, c2v,
                                                 v2c, posterior, hard,
                                                 late_scale, clamp, qdelta)
                        else:
                            _bp_iteration(chk_ptr, edge_var, var_ptr, var_edge,
                                          prior, syndrome, c2v, v2c, posterior,
                                          hard, late_scale, clamp, qdelta)
                    return False, max_iters
                seen_it[h1] = it
                seen_h2[h1] = h2
        return False, max_iters

    @njit
    def _osd_shot(order, det_words, n_det, n_words, syn_words, prior,
                  rank_h, osd_order, do_cs, est):
        """OSD on one syndrome; est (n_var uint8) is overwritten.

        Returns 0 on success, 1 for an infeasible syndrome.
        """
        one = np.uint64(1)
        n_var = order.shape[0]
        piv_var = np.empty(rank_h, dtype=np.int64)
        piv_lead = np.empty(rank_h, dtype=np.int64)
        piv_cols = np.zeros((rank_h, n_words), dtype=np.uint64)
        free_var = np.empty(osd_order, dtype=np.int64)
        n_piv = 0
        n_free = 0
        col = np.zeros(n_words, dtype=np.uint64)
        for oi in range(n_var):
            if n_piv == rank_h and (not do_cs or n_free == osd_order):
                break
            v = order[oi]
            for w in range(n_words):
                col[w] = det_words[v, w]
            for p in range(n_piv):
                lead = piv_lead[p]
                if (col[lead >> 6] >> np.uint64(lead & 63)) & one:
                    for w in range(n_words):
                        col[w] ^= piv_cols[p, w]
            nz = -1
            for w in range(n_words):
                if col[w] != np.uint64(0):
                    nz = w
                    break
            if nz < 0:
                if n_free < osd_order:
                    free_var[n_free] = v
                    n_free += 1
                continue
            if n_piv < rank_h:
                lead = nz * 64
                ww = col[nz]
                while not (ww & one):
                    ww >>= one
                    lead += 1
                piv_lead[n_piv] = lead
                piv_var[n_piv] = v
                for w in range(n_words):
                    piv_cols[n_piv, w] = col[w]
                n_piv += 1
        n_free = n_free if do_cs else 0

        # dense RREF solve on the pivot submatrix, syndrome and sweep columns
        width = n_piv + 1 + n_free
        wa = (width + 63) >> 6
        rows = np.zeros((n_det, wa), dtype=np.uint64)
        for j in range(n_piv):
            v = piv_var[j]
            for r in range(n_det):
                if (det_words[v, r >> 6] >> np.uint64(r & 63)) & one:
                    rows[r, j >> 6] |= one << np.uint64(j & 63)
        scol = n_piv
        for r in range(n_det):
            if (syn_words[r >> 6] >> np.uint64(r & 63)) & one:
                rows[r, scol >> 6] |= one << np.uint64(scol & 63)
        for t in range(n_free):
            v = free_var[t]
            fcol = n_piv + 1 + t
            for r in range(n_det):
                if (det_words[v, r >> 6] >> np.uint64(r & 63)) & one:
                    rows[r, fcol >> 6] |= one << np.uint64(fcol & 63)

        piv_row_of = np.full(n_piv, -1, dtype=np.int64)
        cur = 0
        for j in range(n_piv):
            piv = -1
            for r in range(cur, n_det):
                if (rows[r, j >> 6] >> np.uint64(j & 63)) & one:
                    piv = r
                    break
            if piv < 0:
                return 1
            if piv != cur:
                for w in range(wa):
                    tmp = rows[piv, w]
                    rows[piv, w] = rows[cur, w]
                    rows[cur, w] = tmp
            for r in range(n_det):
                if r != cur and ((rows[r, j >> 6] >> np.uint64(j & 63)) & one):
                    for w in range(wa):
                        rows[r, w] ^= rows[cur, w]
            piv_row_of[j] = cur
            cur += 1
        for r in range(cur, n_det):
            if (rows[r, scol >> 6] >> np.uint64(scol & 63)) & one:
                return 1

        e0 = np.empty(n_piv, dtype=np.uint8)
        toggles = np.zeros((n_free, n_piv), dtype=np.uint8)
        for j in range(n_piv):
            r = piv_row_of[j]
            e0[j] = (rows[r, scol >> 6] >> np.uint64(scol & 63)) & one
            for t in range(n_free):
                fcol = n_piv + 1 + t
                toggles[t, j] = (rows[r, fcol >> 6] >> np.uint64(fcol & 63)) & one

        base_cost = 0.0
        for j in range(n_piv):
            if e0[j]:
                base_cost += prior[piv_var[j]]
        best_cost = base_cost
        best_f1 = -1
        best_f2 = -1
        if do_cs:
            for f1 in range(n_free):
                cost = prior[free_var[f1]]
                for j in range(n_piv):
                    if e0[j] ^ toggles[f1, j]:
                        cost += prior[piv_var[j]]
                if cost < best_cost:
                    best_cost = cost
                    best_f1 = f1
                    best_f2 = -1
            for f1 in range(n_free):
                for f2 in range(f1 + 1, n_free):
                    cost = prior[free_var[f1]] + prior[free_var[f2]]
                    for j in range(n_piv):
                        if e0[j] ^ toggles[f1, j] ^ toggles[f2, j]:
                            cost += prior[piv_var[j]]
                    if cost < best_cost:
                        best_cost = cost
                        best_f1 = f1
                        best_f2 = f2

        for v in range(n_var):
            est[v] = 0
        for j in range(n_piv):
            bit = e0[j]
            if best_f1 >= 0:
                bit ^= toggles[best_f1, j]
            if best_f2 >= 0:
                bit ^= toggles[best_f2, j]
            est[piv_var[j]] = bit
        if best_f1 >= 0:
            est[free_var[best_f1]] = 1
        if best_f2 >= 0:
            est[free_var[best_f2]] = 1
        return 0

    @njit
    def _decode_batch(syndromes, chk_ptr, edge_var, var_ptr, var_edge, prior,
                      det_words, obs_words, n_words, rank_h, max_iters, scale,
                      clamp, qdelta, serial, osd_order, osd_mode, pred_obs,
                      converged, iters, match):
        """osd_mode: 0 none, 1 osd_0, 2 osd_cs. Returns 1 on infeasible syndrome."""
        one = np.uint64(1)
        n_shots = syndromes.shape[0]
        n_det = syndromes.shape[1]
        n_var = var_ptr.shape[0] - 1
        E = edge_var.shape[0]
        c2v = np.zeros(E, dtype=np.float64)
        c2v_bits = c2v.view(np.uint64)
        v2c = np.zeros(E, dtype=np.float64)
        posterior = np.zeros(n_var, dtype=np.float64)
        hard = np.zeros(n_var, dtype=np.uint8)
        est = np.zeros(n_var, dtype=np.uint8)
        syn_words = np.zeros(n_words, dtype=np.uint64)
        order = np.empty(n_var, dtype=np.int64)
        status = 0
        for s in range(n_shots):
            raw = syndromes[s]
            any_on = False
            for c in range(n_det):
                if raw[c]:
                    any_on = True
                    break
            if not any_on:
                converged[s] = 1
                iters[s] = 0
                match[s] = 1
                for o in range(pred_obs.shape[1]):
                    pred_obs[s, o] = 0
                continue
            ok, n_it = _bp_run(chk_ptr, edge_var, var_ptr, var_edge, prior, raw,
                               max_iters, scale, clamp, qdelta, serial, c2v,
                               c2v_bits, v2c, posterior, hard)
            iters[s] = n_it
            converged[s] = 1 if ok else 0
            if ok:
                for v in range(n_var):
                    est[v] = hard[v]
            elif osd_mode == 0:
                for v in range(n_var):
                    est[v] = hard[v]
            else:
                sidx = np.argsort(posterior, kind="mergesort")
                for v in range(n_var):
                    order[v] = sidx[v]
                for w in range(n_words):
                    syn_words[w] = np.uint64(0)
                for c in range(n_det):
                    if raw[c]:
                        syn_words[c >> 6] |= one << np.uint64(c & 63)
                err = _osd_shot(order, det_words, n_det, n_words, syn_words,
                                prior, rank_h, osd_order, 1 if osd_mode == 2 else 0,
                                est)
                if err != 0:
                    status = 1
                    match[s] = 0
                    continue
            obs_acc = np.uint64(0)
            res_ok = 1
            for w in range(n_words):
                syn_words[w] = np.uint64(0)
            for v in range(n_var):
                if est[v]:
                    obs_acc ^= obs_words[v]
                    for w in range(n_words):
                        syn_words[w] ^= det_words[v, w]
            for c in range(n_det):
                bit = (syn_words[c >> 6] >> np.uint64(c & 63)) & one
                if bit != raw[c]:
                    res_ok = 0
                    break
            match[s] = res_ok
            for o in range(pred_obs.shape[1]):
                pred_obs[s, o] = (obs_acc >> np.uint64(o)) & one
        return status


# ---------------------------------------------------------------------------
# numpy fallback
# ---------------------------------------------------------------------------

def _bp_run_py(g, syndrome, max_iters, ms_scaling, clamp, qdelta, serial):
    """Single-shot numpy/python min-sum mirroring the jit kernels."""
    if serial:
        return _bp_run_serial_py(g, syndrome, max_iters, ms_scaling, clamp, qdelta)
    c2v = np.zeros(g.E, dtype=np.float64)
    sigma = np.where(syndrome.astype(bool), -1.0, 1.0)
    it = 0
    posterior = g.prior.copy()
    hard = np.zeros(g.n_var, dtype=np.uint8)
    while it < max_iters:
        it += 1
        scale = ms_scaling if ms_scaling > 0.0 else (1.0 - 2.0 ** (-it))
        totals = g.prior + np.add.reduceat(
            np.append(c2v[g.var_edge], 0.0)[:-1], g.var_ptr[:-1])
        v2c = np.empty(g.E, dtype=np.float64)
        v2c[g.var_edge] = np.repeat(totals, np.diff(g.var_ptr)) - c2v[g.var_edge]
        a = np.abs(v2c)
        m1 = np.minimum.reduceat(a, g.chk_ptr[:-1])
        m1_per_edge = np.repeat(m1, np.diff(g.chk_ptr))
        is_min = a == m1_per_edge
        count_min = np.add.reduceat(is_min.astype(np.int64), g.chk_ptr[:-1])
        masked = np.where(is_min, np.inf, a)
        m2 = np.minimum.reduceat(masked, g.chk_ptr[:-1])
        mag = np.where(
            is_min & (np.repeat(count_min, np.diff(g.chk_ptr)) == 1),
            np.repeat(m2, np.diff(g.chk_ptr)), m1_per_edge)
        sgn = np.where(v2c < 0, -1.0, 1.0)
        sprod = np.multiply.reduceat(sgn, g.chk_ptr[:-1])
        c2v = np.clip(
            scale * np.repeat(sigma * sprod, np.diff(g.chk_ptr)) * sgn * mag,
            -clamp, clamp)
        if qdelta > 0.0:
            c2v = np.rint(c2v / qdelta) * qdelta
        posterior = g.prior + np.add.reduceat(
            np.append(c2v[g.var_edge], 0.0)[:-1], g.var_ptr[:-1])
        hard = (posterior < 0).astype(np.uint8)
        par = np.bitwise_xor.reduceat(hard[g.edge_var], g.chk_ptr[:-1])
        if np.array_equal(par, syndrome):
            return True, it, posterior, hard
    return False, max_iters, posterior, hard


def _bp_run_serial_py(g, syndrome, max_iters, ms_scaling, clamp, qdelta):
    """Check-serial sweep in plain python; adequate for test-sized DEMs."""
    c2v = np.zeros(g.E, dtype=np.float64)
    posterior = g.prior.copy()
    hard = np.zeros(g.n_var, dtype=np.uint8)
    it = 0
    while it < max_iters:
        it += 1
        scale = ms_scaling if ms_scaling > 0.0 else (1.0 - 2.0 ** (-it))
        totals = g.prior + np.add.reduceat(
            np.append(c2v[g.var_edge], 0.0)[:-1], g.var_ptr[:-1])
        for c in range(g.n_det):
            lo, hi = g.chk_ptr[c], g.chk_ptr[c + 1]
            m1 = m2 = np.inf
            first = -1
            sprod = 1.0
            for e in range(lo, hi):
                x = totals[g.edge_var[e]] - c2v[e]
                a = abs(x)
                if x < 0.0:
                    sprod = -sprod
                if a < m1:
                    m2, m1, first = m1, a, e
                elif a < m2:
                    m2 = a
            sigma = -sprod if syndrome[c] else sprod
            for e in range(lo, hi):
                v = g.edge_var[e]
                x = totals[v] - c2v[e]
                mag = m2 if e == first else m1
                val = scale * sigma * (-1.0 if x < 0.0 else 1.0) * mag
                val = min(max(val, -clamp), clamp)
                if qdelta > 0.0:
                    val = float(np.rint(val / qdelta) * qdelta)
                totals[v] += val - c2v[e]
                c2v[e] = val
        posterior = totals
        hard = (posterior < 0).astype(np.uint8)
        par = np.bitwise_xor.reduceat(hard[g.edge_var], g.chk_ptr[:-1])
        if np.array_equal(par, syndrome):
            return True, it, posterior, hard
    return False, max_iters, posterior, hard


def _osd_shot_py(g, order, syn_int, osd_order, do_cs):
    """Python-int OSD mirroring _osd_shot; returns estimate or None."""
    piv_var, piv_lead, piv_cols = [], [], []
    free_var = []
    for v in order:
        if len(piv_var) == g.rank_h and (not do_cs or len(free_var) == osd_order):
            break
        col = g.det_ints[v]
        for lead, pc in zip(piv_lead, piv_cols):
            if (col >> lead) & 1:
                col ^= pc
        if col == 0:
            if len(free_var) < osd_order:
                free_var.append(v)
            continue
        if len(piv_var) < g.rank_h:
            piv_var.append(v)
            piv_lead.append((col & -col).bit_length() - 1)
            piv_cols.append(col)
    if not do_cs:
        free_var = []
    R = len(piv_var)
    width = R + 1 + len(free_var)
    rows = [0] * g.n_det
    for j, v in enumerate(piv_var):
        col = g.det_ints[v]
        for r in range(g.n_det):
            if (col >> r) & 1:
                rows[r] |= 1 << j
    for r in range(g.n_det):
        if (syn_int >> r) & 1:
            rows[r] |= 1 << R
    for t, v in enumerate(free_var):
        col = g.det_ints[v]
        for r in range(g.n_det):
            if (col >> r) & 1:
                rows[r] |= 1 << (R + 1 + t)
    piv_row_of = [-1] * R
    cur = 0
    for j in range(R):
        piv = next((r for r in range(cur, g.n_det) if (rows[r] >> j) & 1), None)
        if piv is None:
            return None
        rows[cur], rows[piv] = rows[piv], rows[cur]
        for r in range(g.n_det):
            if r != cur and ((rows[r] >> j) & 1):
                rows[r] ^= rows[cur]
        piv_row_of[j] = cur
        cur += 1
    if any((rows[r] >> R) & 1 for r in range(cur, g.n_det)):
        return None
    e0 = [(rows[piv_row_of[j]] >> R) & 1 for j in range(R)]
    toggles = [
        [(rows[piv_row_of[j]] >> (R + 1 + t)) & 1 for j in range(R)]
        for t in range(len(free_var))
    ]

    def cost_of(f1, f2):
        cost = 0.0
        if f1 >= 0:
            cost += g.prior[free_var[f1]]
        if f2 >= 0:
            cost += g.prior[free_var[f2]]
        for j in range(R):
            bit = e0[j]
            if f1 >= 0:
                bit ^= toggles[f1][j]
            if f2 >= 0:
                bit ^= toggles[f2][j]
            if bit:
                cost += g.prior[piv_var[j]]
        return cost

    best = (cost_of(-1, -1), -1, -1)
    for f1 in range(len(free_var)):
        c = cost_of(f1, -1)
        if c < best[0]:
            best = (c, f1, -1)
    for f1 in range(len(free_var)):
        for f2 in range(f1 + 1, len(free_var)):
            c = cost_of(f1, f2)
            if c < best[0]:
                best = (c, f1, f2)
    _, f1, f2 = best
    est = np.zeros(g.n_var, dtype=np.uint8)
    for j in range(R):
        bit = e0[j]
        if f1 >= 0:
            bit ^= toggles[f1][j]
        if f2 >= 0:
            bit ^= toggles[f2][j]
        est[piv_var[j]] = bit
    if f1 >= 0:
        est[free_var[f1]] = 1
    if f2 >= 0:
        est[free_var[f2]] = 1
    return est


# ---------------------------------------------------------------------------
# public decoder
# ---------------------------------------------------------------------------

class BpOsdDecoder:
    """Decoder bound to one DEM; cheap to construct, reusable across shots."""

    def __init__(self, dem: DetectorErrorModel, config: DecoderConfig | None = None):
        self.dem = dem
        self.config = config or DecoderConfig()
        if dem.n_observables > 64:
            raise ValueError("observable packing limited to 64")
        n_var = len(dem)
        pairs = [(d, v) for v, dets in enumerate(dem.dets) for d in dets]
        pairs.sort()
        self.E = len(pairs)
        self.n_var = n_var
        self.n_det = dem.n_detectors
        self.edge_var = np.array([v for _, v in pairs], dtype=np.int32)
        chk_counts = np.bincount([d for d, _ in pairs], minlength=dem.n_detectors)
        if (chk_counts == 0).any():
            raise ValueError("detector with no incident mechanism")
        self.chk_ptr = np.concatenate([[0], np.cumsum(chk_counts)]).astype(np.int32)
        order = np.argsort(self.edge_var, kind="stable")
        self.var_edge = order.astype(np.int32)
        var_counts = np.bincount(self.edge_var, minlength=n_var)
        self.var_ptr = np.concatenate([[0], np.cumsum(var_counts)]).astype(np.int32)
        p = np.clip(dem.probs, 1e-300, 1 - 1e-12)
        self.prior = np.log((1 - p) / p)
        self.n_words = max(1, (dem.n_detectors + 63) >> 6)
        self.det_words = np.zeros((n_var, self.n_words), dtype=np.uint64)
        self.obs_words = np.zeros(n_var, dtype=np.uint64)
        self.det_ints = []
        for v in range(n_var):
            w = 0
            for d in dem.dets[v]:
                self.det_words[v, d >> 6] |= np.uint64(1) << np.uint64(d & 63)
                w |= 1 << d
            self.det_ints.append(w)
            for o in dem.obss[v]:
                self.obs_words[v] |= np.uint64(1) << np.uint64(o)
        self.rank_h = self._column_rank()

    def _column_rank(self) -> int:
        leads: list[int] = []
        cols: list[int] = []
        for w in self.det_ints:
            col = w
            for lead, pc in zip(leads, cols):
                if (col >> lead) & 1:
                    col ^= pc
            if col:
                leads.append((col & -col).bit_length() - 1)
                cols.append(col)
        return len(cols)

    def decode_batch(self, syndromes: np.ndarray
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Decode many syndromes; returns (pred_obs, converged, iterations, match)."""
        syndromes = np.ascontiguousarray(syndromes, dtype=np.uint8)
        n_shots = syndromes.shape[0]
        cfg = self.config
        pred = np.zeros((n_shots, self.dem.n_observables), dtype=np.uint8)
        conv = np.zeros(n_shots, dtype=np.uint8)
        iters = np.zeros(n_shots, dtype=np.int32)
        match = np.zeros(n_shots, dtype=np.uint8)
        mode = {"none": 0, "osd_0": 1, "osd_cs": 2}[cfg.osd_method]
        if NUMBA_ENABLED:
            status = _decode_batch(
                syndromes, self.chk_ptr, self.edge_var, self.var_ptr,
                self.var_edge, self.prior, self.det_words, self.obs_words,
                self.n_words, self.rank_h, cfg.max_bp_iters, cfg.ms_scaling,
                cfg.msg_clamp, cfg.quantize,
                1 if cfg.schedule == "serial" else 0,
                cfg.osd_order, mode, pred, conv, iters, match)
            if status:
                raise InfeasibleSyndromeError("syndrome outside DEM column space")
            return pred, conv.astype(bool), iters, match.astype(bool)
        for s in range(n_shots):
            res = self._decode_one_py(syndromes[s])
            pred[s] = res.predicted_observables
            conv[s] = res.converged
            iters[s] = res.iterations
            match[s] = self._syndrome_match(res.mechanism_estimate, syndromes[s])
        return pred, conv.astype(bool), iters, match.astype(bool)

    def decode(self, syndrome: np.ndarray) -> DecodeResult:
        syndrome = np.ascontiguousarray(syndrome, dtype=np.uint8)
        if syndrome.shape != (self.n_det,):
            raise ValueError(f"syndrome must have length {self.n_det}")
        return self._decode_one(syndrome)

    def _decode_one(self, syndrome: np.ndarray) -> DecodeResult:
        if not NUMBA_ENABLED:
            return self._decode_one_py(syndrome)
        cfg = self.config
        if not syndrome.any():
            return DecodeResult(
                np.zeros(self.n_var, dtype=np.uint8),
                np.zeros(self.dem.n_observables, dtype=np.uint8), True, 0,
                self.prior.copy())
        c2v = np.zeros(self.E)
        v2c = np.zeros(self.E)
        posterior = np.zeros(self.n_var)
        hard = np.zeros(self.n_var, dtype=np.uint8)
        ok, n_it = _bp_run(self.chk_ptr, self.edge_var, self.var_ptr,
                           self.var_edge, self.prior, syndrome,
                           cfg.max_bp_iters, cfg.ms_scaling, cfg.msg_clamp,
                           cfg.quantize, 1 if cfg.schedule == "serial" else 0,
                           c2v, c2v.view(np.uint64), v2c, posterior, hard)
        if ok or cfg.osd_method == "none":
            est = hard.copy()
        else:
            order = np.argsort(posterior, kind="mergesort")
            syn_words = np.zeros(self.n_words, dtype=np.uint64)
            for c in np.nonzero(syndrome)[0]:
                syn_words[c >> 6] |= np.uint64(1) << np.uint64(int(c) & 63)
            est = np.zeros(self.n_var, dtype=np.uint8)
            err = _osd_shot(order.astype(np.int64), self.det_words, self.n_det,
                            self.n_words, syn_words, self.prior, self.rank_h,
                            cfg.osd_order, 1 if cfg.osd_method == "osd_cs" else 0,
                            est)
            if err:
                raise InfeasibleSyndromeError("syndrome outside DEM column space")
        return DecodeResult(est, self._observables(est), bool(ok), int(n_it),
                            posterior)

    def _decode_one_py(self, syndrome: np.ndarray) -> DecodeResult:
        cfg = self.config
        if not syndrome.any():
            return DecodeResult(
                np.zeros(self.n_var, dtype=np.uint8),
                np.zeros(self.dem.n_observables, dtype=np.uint8), True, 0,
                self.prior.copy())
        ok, n_it, posterior, hard = _bp_run_py(
            self, syndrome, cfg.max_bp_iters, cfg.ms_scaling, cfg.msg_clamp,
            cfg.quantize, cfg.schedule == "serial")
        if ok or cfg.osd_method == "none":
            est = hard.copy()
        else:
            order = np.argsort(posterior, kind="stable")
            syn_int = 0
            for c in np.nonzero(syndrome)[0]:
                syn_int |= 1 << int(c)
            est = _osd_shot_py(self, order, syn_int, cfg.osd_order,
                               cfg.osd_method == "osd_cs")
            if est is None:
                raise InfeasibleSyndromeError("syndrome outside DEM column space")
        return DecodeResult(est, self._observables(est), bool(ok), int(n_it),
                            posterior)

    def _observables(self, est: np.ndarray) -> np.ndarray:
        acc = 0
        for v in np.nonzero(est)[0]:
            acc ^= int(self.obs_words[v])
        return np.array([(acc >> o) & 1 for o in range(self.dem.n_observables)],
                        dtype=np.uint8)

    def _syndrome_match(self, est: np.ndarray, syndrome: np.ndarray) -> bool:
        acc = 0
        for v in np.nonzero(est)[0]:
            acc ^= self.det_ints[v]
        target = 0
        for c in np.nonzero(syndrome)[0]:
            target |= 1 << int(c)
        return acc == target


def decode(dem: DetectorErrorModel, syndrome: np.ndarray,
           config: DecoderConfig | None = None) -> DecodeResult:
    """One-shot convenience wrapper; build a BpOsdDecoder for bulk decoding."""
    return BpOsdDecoder(dem, config).decode(syndrome)

"""Logical error rate estimation, ancilla-count tuning, and curve fitting.

The logical error rate is per syndrome extraction round and per logical
qubit: p_l = (q_X + q_Z) / (k d), where q_B is the probability that any of
the k basis-B logical measurements of a memory experiment is mispredicted.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from . import circuit as circuit_mod
from . import dem as dem_mod
from . import noise as noise_mod
from .codes import CssCode, compute_logicals
from .decoder import BpOsdDecoder, DecoderConfig

log = logging.getLogger(__name__)

DEFAULT_TARGET_REL_ERR = 0.06
DEFAULT_SHOT_CAP = 10_000_000
DEFAULT_BATCH = 20_000


class InsufficientStatisticsError(Exception):
    """An estimate needed by a protocol came back without failures."""


@dataclass(frozen=True)
class LerEstimate:
    """Memory-experiment failure statistics for one (code, p, tau_m, n_a)."""

    q_x: float
    q_z: float
    p_l: float
    stderr_rel: float
    shots_x: int
    shots_z: int
    failures_x: int
    failures_z: int
    exact: bool = False  # p = 0: analytically zero
    upper_bound: bool = False  # no failures at the shot cap

    def stderr_abs(self) -> float:
        return self.stderr_rel * self.p_l


def _stderr_rel(fx: int, nx: int, fz: int, nz: int) -> float:
    if fx + fz == 0:
        return math.inf
    qx, qz = fx / nx, fz / nz
    var = qx * (1 - qx) / nx + qz * (1 - qz) / nz
    return math.sqrt(var) / (qx + qz)


def estimate_ler(code: CssCode, p: float, tau_m: float, n_a: int, *,
                 rounds: int | None = None,
                 target_rel_err: float = DEFAULT_TARGET_REL_ERR,
                 shot_cap: int = DEFAULT_SHOT_CAP,
                 seed: int = 0,
                 min_failures: int = 0,
                 batch: int = DEFAULT_BATCH,
                 decoder_config: DecoderConfig | None = None,
                 z_first: bool = False,
                 batch_prep: bool = False) -> LerEstimate:
    """Monte Carlo estimate of the logical error rate of a memory experiment.

    Samples and decodes both bases in fixed-size batches until the relative
    standard error of p_l reaches target_rel_err (and each basis has at
    least min_failures failures), or the per-basis shot cap is hit. A shot
    fails when any of the k predicted observables disagrees with the truth.
    Batch b of basis B draws from the stream (seed, B, b), so estimates are
    independent of batching and worker layout.
    """
    if code.d is None:
        if rounds is None:
            raise ValueError("rounds must be given for a code without certified d")
        d_norm = rounds
    else:
        d_norm = code.d
    rounds = rounds if rounds is not None else code.d
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if code.logical_x is None:
        code = compute_logicals(code)
    if p == 0.0:
        return LerEstimate(0.0, 0.0, 0.0, 0.0, 0, 0, 0, 0, exact=True)

    decoders = {}
    for basis in ("X", "Z"):
        circ = circuit_mod.build_memory_experiment(
            code, basis, rounds, n_a, z_first=z_first, batch_prep=batch_prep)
        d = dem_mod.compile_dem(circ, noise_mod.annotate(circ, noise_mod.NoiseParams(p, tau_m)))
        decoders[basis] = (d, BpOsdDecoder(d, decoder_config or DecoderConfig()))

    fails = {"X": 0, "Z": 0}
    shots = {"X": 0, "Z": 0}
    batch_idx = 0
    while True:
        for bbit, basis in enumerate(("X", "Z")):
            d, dec = decoders[basis]
            stream = (batch_idx << 1) | bbit
            det, obs = dem_mod.sample(d, batch, seed=_mix_seed(seed, stream))
            pred, _, _, _ = dec.decode_batch(det)
            fails[basis] += int((pred != obs).any(axis=1).sum())
            shots[basis] += batch
        batch_idx += 1
        rel = _stderr_rel(fails["X"], shots["X"], fails["Z"], shots["Z"])
        enough_failures = min(fails["X"], fails["Z"]) >= min_failures
        if (rel <= target_rel_err and enough_failures) or shots["X"] >= shot_cap:
            break
    qx = fails["X"] / shots["X"]
    qz = fails["Z"] / shots["Z"]
    return LerEstimate(
        q_x=qx, q_z=qz, p_l=(qx + qz) / (code.k * d_norm),
        stderr_rel=_stderr_rel(fails["X"], shots["X"], fails["Z"], shots["Z"]),
        shots_x=shots["X"], shots_z=shots["Z"],
        failures_x=fails["X"], failures_z=fails["Z"],
        upper_bound=(fails["X"] + fails["Z"] == 0),
    )


def _mix_seed(seed: int, stream: int) -> int:
    # distinct Philox keys per (seed, stream); splitmix-style diffusion
    x = (seed * 0x9E3779B97F4A7C15 + stream * 0xBF58476D1CE4E5B9 + 0x94D049BB133111EB) % (1 << 64)
    x ^= x >> 30
    return x


def tune_ancillas(code: CssCode, p: float, tau_m: float, gamma: float, *,
                  estimator=None, seed: int = 0, history: list | None = None,
                  **estimator_kwargs) -> int:
    """Ancilla-count tuning: grow n_a while it keeps paying off.

    Starting from n_a = 1 with p_log(0) = 1, increment n_a as long as
    p_log(n_a) / p_log(n_a - 1) < gamma; the returned n_a is the first whose
    marginal improvement fell short of the factor gamma. Estimates use
    target_rel_err 6% and at least 100 failures per basis unless overridden.
    """
    if not 0 < gamma <= 1:
        raise ValueError("gamma must be in (0, 1]")
    estimator = estimator or estimate_ler
    estimator_kwargs.setdefault("target_rel_err", DEFAULT_TARGET_REL_ERR)
    estimator_kwargs.setdefault("min_failures", 100)

    def plog(n_a: int) -> float:
        est = estimator(code, p, tau_m, n_a, seed=_mix_seed(seed, n_a),
                        **estimator_kwargs)
        if est.upper_bound or est.p_l == 0.0:
            raise InsufficientStatisticsError(
                f"no failures observed for n_a={n_a}; cannot evaluate the ratio test")
        if history is not None:
            history.append((n_a, est))
        log.info("tune_ancillas %s: n_a=%d p_l=%.3e (+-%.0f%%)",
                 code.name, n_a, est.p_l, 100 * est.stderr_rel)
        return est.p_l

    n_a = 1
    prev = 1.0
    cur = plog(n_a)
    while cur / prev < gamma:
        n_a += 1
        prev = cur
        cur = plog(n_a)
    return n_a


# ---------------------------------------------------------------------------
# curve fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    model: str  # surface_threshold | poly_exp
    constants: tuple[float, ...]  # (c, p_th) or (c0, c1, c2)
    residual: float  # sum of squared log-residuals


def fit_curve(points: list[tuple[float, float, int]], model: str) -> FitResult:
    """Least-squares fit of logical-error-rate points (p, p_l, d).

    surface_threshold: log p_l = log c + ((d+1)/2) (log p - log p_th),
    jointly over all points. poly_exp: log p_l - ((d+1)/2) log p =
    c0 + c1 p + c2 p^2 (points should come from a single code).
    """
    if len(points) < 3:
        raise ValueError("need at least 3 points")
    if any(pl <= 0 for _, pl, _ in points):
        raise ValueError("p_l must be positive for log-domain fitting")
    p = np.array([x[0] for x in points])
    pl = np.array([x[1] for x in points])
    dd = np.array([x[2] for x in points], dtype=float)
    half = (dd + 1) / 2
    if model == "surface_threshold":
        # unknowns (log c, log p_th)
        a = np.column_stack([np.ones_like(p), -half])
        y = np.log(pl) - half * np.log(p)
        sol, *_ = np.linalg.lstsq(a, y, rcond=None)
        resid = float(((a @ sol - y) ** 2).sum())
        return FitResult(model, (float(np.exp(sol[0])), float(np.exp(sol[1]))), resid)
    if model == "poly_exp":
        a = np.column_stack([np.ones_like(p), p, p * p])
        y = np.log(pl) - half * np.log(p)
        if np.linalg.matrix_rank(a) < 3:
            raise ValueError("degenerate design matrix (need >= 3 distinct p values)")
        sol, *_ = np.linalg.lstsq(a, y, rcond=None)
        resid = float(((a @ sol - y) ** 2).sum())
        return FitResult(model, tuple(float(s) for s in sol), resid)
    raise ValueError(f"unknown fit model {model!r}")


def surface_threshold_value(constants: tuple[float, float], p: float, d: int) -> float:
    c, p_th = constants
    return c * (p / p_th) ** ((d + 1) / 2)


def poly_exp_value(constants: tuple[float, float, float], p: float, d: int) -> float:
    c0, c1, c2 = constants
    return p ** ((d + 1) / 2) * math.exp(c0 + c1 * p + c2 * p * p)


# ---------------------------------------------------------------------------
# results CSV
# ---------------------------------------------------------------------------

CSV_COLUMNS = [
    "code", "family", "n", "k", "d", "p", "tau_m", "n_a", "rounds",
    "shots_x", "shots_z", "q_x", "q_z", "p_l", "stderr_rel", "seed",
]


@dataclass(frozen=True)
class SweepRow:
    code: str
    family: str
    n: int
    k: int
    d: int
    p: float
    tau_m: float
    n_a: int
    rounds: int
    shots_x: int
    shots_z: int
    q_x: float
    q_z: float
    p_l: float
    stderr_rel: float
    seed: int


def sweep_row(code_name: str, family: str, code: CssCode, p: float, tau_m: float,
              n_a: int, rounds: int, est: LerEstimate, seed: int) -> SweepRow:
    return SweepRow(
        code=code_name, family=family, n=code.n, k=code.k, d=code.d or rounds,
        p=p, tau_m=tau_m, n_a=n_a, rounds=rounds, shots_x=est.shots_x,
        shots_z=est.shots_z, q_x=est.q_x, q_z=est.q_z, p_l=est.p_l,
        stderr_rel=est.stderr_rel, seed=seed,
    )


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def rows_to_csv(rows: list[SweepRow], header: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def read_csv(path: str) -> list[SweepRow]:
    out = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            out.append(SweepRow(
                code=rec["code"], family=rec["family"], n=int(rec["n"]),
                k=int(rec["k"]), d=int(rec["d"]), p=float(rec["p"]),
                tau_m=float(rec["tau_m"]), n_a=int(rec["n_a"]),
                rounds=int(rec["rounds"]), shots_x=int(rec["shots_x"]),
                shots_z=int(rec["shots_z"]), q_x=float(rec["q_x"]),
                q_z=float(rec["q_z"]), p_l=float(rec["p_l"]),
                stderr_rel=float(rec["stderr_rel"]), seed=int(rec["seed"]),
            ))
    return out

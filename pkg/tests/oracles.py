"""Independent oracles used by the test suite.

Everything here is deliberately built from first principles, separate from
the production code paths it checks: a CHP-style stabilizer tableau
simulator (deterministic outcome checks), a Pauli-frame simulator whose
conjugation tables are derived numerically from 4x4 unitaries, an exact
maximum-likelihood decoder for tiny detector error models, and a naive
all-2^n minimum-logical-weight search.
"""

from __future__ import annotations

from itertools import product

import numpy as np

# ---------------------------------------------------------------------------
# Aaronson-Gottesman tableau simulator
# ---------------------------------------------------------------------------


class Tableau:
    """Stabilizer simulator over n qubits, all prepared in |0>."""

    def __init__(self, n: int, rng: np.random.Generator | None = None):
        self.n = n
        self.rng = rng or np.random.default_rng(0)
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        self.x[np.arange(n), np.arange(n)] = 1  # destabilizers X_i
        self.z[np.arange(n, 2 * n), np.arange(n)] = 1  # stabilizers Z_i

    def h(self, q: int) -> None:
        self.r ^= self.x[:, q] & self.z[:, q]
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()

    def s(self, q: int) -> None:
        self.r ^= self.x[:, q] & self.z[:, q]
        self.z[:, q] ^= self.x[:, q]

    def sdg(self, q: int) -> None:
        self.s(q)
        self.s(q)
        self.s(q)

    def cx(self, c: int, t: int) -> None:
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def cz(self, c: int, t: int) -> None:
        self.h(t)
        self.cx(c, t)
        self.h(t)

    def cy(self, c: int, t: int) -> None:
        self.sdg(t)
        self.cx(c, t)
        self.s(t)

    def apply_pauli(self, q: int, p: str) -> None:
        # sign flips of stabilizer rows anticommuting with the error
        if p in ("X", "Y"):
            self.r ^= self.z[:, q]
        if p in ("Z", "Y"):
            self.r ^= self.x[:, q]

    def _g(self, x1, z1, x2, z2):
        # phase exponent contribution of multiplying single-qubit Paulis
        if x1 == 0 and z1 == 0:
            return 0
        if x1 == 1 and z1 == 1:
            return int(z2) - int(x2)
        if x1 == 1 and z1 == 0:
            return int(z2) * (2 * int(x2) - 1)
        return int(x2) * (1 - 2 * int(z2))

    def _rowsum(self, h: int, i: int) -> None:
        phase = 2 * int(self.r[h]) + 2 * int(self.r[i])
        for q in range(self.n):
            phase += self._g(self.x[i, q], self.z[i, q], self.x[h, q], self.z[h, q])
        self.r[h] = (phase % 4) // 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def measure(self, q: int) -> int:
        n = self.n
        stab_hits = np.nonzero(self.x[n:, q])[0]
        if stab_hits.size:
            p = n + stab_hits[0]
            for i in np.nonzero(self.x[:, q])[0]:
                if i != p:
                    self._rowsum(int(i), p)
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.r[p - n] = self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, q] = 1
            outcome = int(self.rng.integers(0, 2))
            self.r[p] = outcome
            return outcome
        # deterministic: accumulate destabilizer combination in a scratch row
        sx = np.zeros(self.n, dtype=np.uint8)
        sz = np.zeros(self.n, dtype=np.uint8)
        sr = 0
        for i in np.nonzero(self.x[:n, q])[0]:
            j = int(i) + n
            phase = 2 * sr + 2 * int(self.r[j])
            for qq in range(self.n):
                phase += self._g(self.x[j, qq], self.z[j, qq], sx[qq], sz[qq])
            sr = (phase % 4) // 2
            sx ^= self.x[j]
            sz ^= self.z[j]
        return int(sr)

    def reset(self, q: int) -> None:
        if self.measure(q):
            self.apply_pauli(q, "X")


def run_circuit(circ, rng: np.random.Generator | None = None,
                inject: dict | None = None) -> np.ndarray:
    """Execute an ionqec Circuit on the tableau; returns measurement outcomes.

    inject maps an instruction index to a {qubit: pauli} error applied right
    after that instruction executes.
    """
    tab = Tableau(circ.n_qubits, rng)
    outcomes = np.zeros(circ.meas_count, dtype=np.uint8)
    inject = inject or {}
    for i, ins in enumerate(circ.instructions):
        if ins.kind == "prep":
            for q in ins.qubits:
                tab.reset(q)
        elif ins.kind == "h":
            tab.h(ins.qubits[0])
        elif ins.kind == "cp":
            c, t = ins.qubits
            getattr(tab, "c" + ins.pauli.lower())(c, t)
        else:
            for q, mid in zip(ins.qubits, ins.meas_ids):
                outcomes[mid] = tab.measure(q)
        for q, p in inject.get(i, {}).items():
            tab.apply_pauli(q, p)
    return outcomes


def detector_values(circ, outcomes: np.ndarray) -> np.ndarray:
    return np.array(
        [sum(outcomes[m] for m in det) % 2 for det in circ.detector_defs],
        dtype=np.uint8,
    )


def observable_values(circ, outcomes: np.ndarray) -> np.ndarray:
    return np.array(
        [sum(outcomes[m] for m in obs) % 2 for obs in circ.observable_supports],
        dtype=np.uint8,
    )


# ---------------------------------------------------------------------------
# Pauli-frame simulator with numerically derived conjugation tables
# ---------------------------------------------------------------------------

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _controlled(p: str) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    u[2:, 2:] = _PAULI_MATS[p]
    return u


def _match_pauli2(m: np.ndarray) -> tuple[str, str]:
    for a, b in product("IXYZ", repeat=2):
        cand = np.kron(_PAULI_MATS[a], _PAULI_MATS[b])
        ratio = m @ cand.conj().T
        if np.allclose(ratio, ratio[0, 0] * np.eye(4)) and np.isclose(abs(ratio[0, 0]), 1):
            return a, b
    raise AssertionError("conjugated operator is not a two-qubit Pauli")


def cp_conjugation_table(p: str) -> dict[tuple[str, str], tuple[str, str]]:
    """(pauli_on_control, pauli_on_target) -> conjugate under controlled-P."""
    u = _controlled(p)
    table = {}
    for a, b in product("IXYZ", repeat=2):
        op = np.kron(_PAULI_MATS[a], _PAULI_MATS[b])
        table[(a, b)] = _match_pauli2(u @ op @ u.conj().T)
    return table


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def h_conjugation_table() -> dict[str, str]:
    table = {}
    for a in "IXYZ":
        m = _H @ _PAULI_MATS[a] @ _H.conj().T
        for b in "IXYZ":
            if np.allclose(m, _PAULI_MATS[b]) or np.allclose(m, -_PAULI_MATS[b]):
                table[a] = b
    return table


_CP_TABLES = {p: cp_conjugation_table(p) for p in "XYZ"}
_H_TABLE = h_conjugation_table()
_MUL = {}
for a, b in product("IXYZ", repeat=2):
    m = _PAULI_MATS[a] @ _PAULI_MATS[b]
    for c in "IXYZ":
        if np.allclose(np.abs(m), np.abs(_PAULI_MATS[c])) and not np.allclose(m, 0):
            if any(np.allclose(m, ph * _PAULI_MATS[c]) for ph in (1, -1, 1j, -1j)):
                _MUL[(a, b)] = c


def frame_propagate(circ, after_instr: int, pauli: dict[int, str] | None = None,
                    flip_meas: int | None = None) -> tuple[frozenset, frozenset]:
    """Forward frame simulation using the derived tables; mirrors dem.propagate."""
    frame = {q: p for q, p in (pauli or {}).items() if p != "I"}
    flipped: set[int] = {flip_meas} if flip_meas is not None else set()
    for ins in circ.instructions[after_instr + 1:]:
        if ins.kind == "h":
            q = ins.qubits[0]
            if q in frame:
                p = _H_TABLE[frame[q]]
                frame[q] = p
                if p == "I":
                    del frame[q]
        elif ins.kind == "cp":
            c, t = ins.qubits
            a = frame.get(c, "I")
            b = frame.get(t, "I")
            na, nb = _CP_TABLES[ins.pauli][(a, b)]
            for q, np_ in ((c, na), (t, nb)):
                if np_ == "I":
                    frame.pop(q, None)
                else:
                    frame[q] = np_
        elif ins.kind == "prep":
            for q in ins.qubits:
                frame.pop(q, None)
        else:
            for q, mid in zip(ins.qubits, ins.meas_ids):
                if frame.get(q, "I") in ("X", "Y"):
                    flipped ^= {mid}
    dets = frozenset(i for i, d in enumerate(circ.detector_defs) if len(d & flipped) % 2)
    obss = frozenset(i for i, o in enumerate(circ.observable_supports) if len(o & flipped) % 2)
    return dets, obss


# ---------------------------------------------------------------------------
# exact decoding / enumeration oracles
# ---------------------------------------------------------------------------

def exact_ml_failure_rate(dem, decode_fn=None) -> tuple[float, float | None]:
    """(ML failure rate, decoder failure rate) by full 2^M enumeration.

    The maximum-likelihood reference picks the single most probable error
    pattern per syndrome (ties: lowest pattern index). decode_fn(syndrome) ->
    predicted observable bits; pass None to get only the ML rate.
    """
    m = len(dem.probs)
    if m > 20:
        raise ValueError("exact enumeration limited to 2^20 patterns")
    n_det = dem.n_detectors
    det_words = np.zeros(m, dtype=np.int64)
    obs_words = np.zeros(m, dtype=np.int64)
    for i, (d, o) in enumerate(zip(dem.dets, dem.obss)):
        for b in d:
            det_words[i] |= 1 << b
        for b in o:
            obs_words[i] |= 1 << b

    best_pattern: dict[int, tuple[float, int]] = {}
    weight_of: dict[tuple[int, int], float] = {}
    logp = np.log(dem.probs)
    log1p = np.log1p(-dem.probs)
    base = float(log1p.sum())
    for pattern in range(1 << m):
        syn = 0
        obs = 0
        lp = base
        t = pattern
        while t:
            i = (t & -t).bit_length() - 1
            syn ^= int(det_words[i])
            obs ^= int(obs_words[i])
            lp += float(logp[i] - log1p[i])
            t &= t - 1
        prob = np.exp(lp)
        weight_of[(syn, obs)] = weight_of.get((syn, obs), 0.0) + prob
        if syn not in best_pattern or lp > best_pattern[syn][0]:
            best_pattern[syn] = (lp, obs)

    ml_fail = 0.0
    dec_fail = 0.0 if decode_fn is not None else None
    for (syn, obs), prob in weight_of.items():
        if best_pattern[syn][1] != obs:
            ml_fail += prob
        if decode_fn is not None:
            pred = decode_fn(syn)
            if pred != obs:
                dec_fail += prob
    return ml_fail, dec_fail


def naive_min_logical(stab: np.ndarray, checks: np.ndarray) -> int | None:
    """Minimum weight over all 2^n vectors in ker(checks) \\ rowspace(stab)."""
    n = checks.shape[1]
    span = {0}
    for row in stab:
        w = int("".join(map(str, row[::-1])), 2) if row.size else 0
        span |= {s ^ w for s in span}
    best = None
    for v in range(1, 1 << n):
        vec = np.array([(v >> i) & 1 for i in range(n)], dtype=np.uint8)
        if checks.size and (checks @ vec % 2).any():
            continue
        if v in span:
            continue
        w = int(vec.sum())
        if best is None or w < best:
            best = w
    return best

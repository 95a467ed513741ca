"""Detector error model compilation by Pauli-frame propagation, and sampling.

A fault's signature is the set of detectors and logical observables it flips.
`propagate` pushes one fault forward through the circuit (reference path);
`compile_dem` computes all signatures in one backward sweep that tracks, per
qubit, the eventual effect of an X and of a Z inserted at the current time.
Signatures are packed into python ints (bit i = detector i, bit n_det + j =
observable j).

Controlled-P conjugation (control c, target t), with P encoded symplectically
as (px, pz) in {X: (1,0), Y: (1,1), Z: (0,1)}:

    X_c -> X_c P_t        Z_c -> Z_c
    Q_t -> Z_c^{<Q,P>} Q_t    (<Q,P> = 1 iff Q and P anticommute)

An X component on a qubit at a Z-basis measurement flips that outcome; resets
clear the frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .circuit import Circuit
from .noise import FaultLocation


class UndetectableLogicalFault(Exception):
    """A fault flips an observable but no detector: circuit or code defect."""


@dataclass
class DetectorErrorModel:
    """Independent error mechanisms with (probability, detectors, observables)."""

    probs: np.ndarray  # float64 (M,)
    dets: list[tuple[int, ...]]
    obss: list[tuple[int, ...]]
    n_detectors: int
    n_observables: int

    def __len__(self) -> int:
        return len(self.probs)

    def validate(self) -> None:
        seen = set()
        for p, d, o in zip(self.probs, self.dets, self.obss):
            if not 0 < p < 1:
                raise ValueError(f"mechanism probability {p} outside (0, 1)")
            if (d, o) in seen:
                raise ValueError(f"duplicate mechanism signature {d} {o}")
            seen.add((d, o))

    def to_text(self) -> str:
        lines = []
        for p, d, o in zip(self.probs, self.dets, self.obss):
            parts = [f"error({p:.12g})"]
            parts += [f"D{i}" for i in d]
            parts += [f"L{i}" for i in o]
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# forward propagation of a single fault (reference path)
# ---------------------------------------------------------------------------

_SYM = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def propagate(circ: Circuit, after_instr: int, pauli: Mapping[int, str] | None = None,
              flip_meas: int | None = None) -> tuple[frozenset[int], frozenset[int]]:
    """Detector/observable flips of one elementary fault.

    The Pauli (qubit -> I/X/Y/Z) is inserted immediately after instruction
    ``after_instr``; flip_meas marks one measurement outcome as flipped (its
    id must belong to that instruction).
    """
    x_mask = 0
    z_mask = 0
    flipped: set[int] = set()
    if flip_meas is not None:
        ins = circ.instructions[after_instr]
        if flip_meas not in ins.meas_ids:
            raise ValueError("flip_meas must reference the faulted instruction")
        flipped.add(flip_meas)
    for q, p in (pauli or {}).items():
        if p == "I":
            continue
        px, pz = _SYM[p]
        x_mask |= px << q
        z_mask |= pz << q

    for ins in circ.instructions[after_instr + 1:]:
        if ins.kind == "h":
            q = ins.qubits[0]
            xb = (x_mask >> q) & 1
            zb = (z_mask >> q) & 1
            if xb != zb:
                x_mask ^= 1 << q
                z_mask ^= 1 << q
        elif ins.kind == "cp":
            c, t = ins.qubits
            px, pz = _SYM[ins.pauli]
            xc = (x_mask >> c) & 1
            xt = (x_mask >> t) & 1
            zt = (z_mask >> t) & 1
            # Z_c picks up the symplectic product of the target frame with P
            if (xt & pz) ^ (zt & px):
                z_mask ^= 1 << c
            if xc:
                x_mask ^= px << t
                z_mask ^= pz << t
        elif ins.kind == "prep":
            for q in ins.qubits:
                x_mask &= ~(1 << q)
                z_mask &= ~(1 << q)
        else:  # meas
            for q, mid in zip(ins.qubits, ins.meas_ids):
                if (x_mask >> q) & 1:
                    flipped ^= {mid}

    dets = frozenset(
        i for i, d in enumerate(circ.detector_defs) if len(d & flipped) % 2
    )
    obss = frozenset(
        i for i, o in enumerate(circ.observable_supports) if len(o & flipped) % 2
    )
    return dets, obss


# ---------------------------------------------------------------------------
# compilation via one backward sweep
# ---------------------------------------------------------------------------

def _meas_effects(circ: Circuit) -> list[int]:
    """Per measurement id, the packed detector/observable incidence."""
    eff = [0] * circ.meas_count
    for i, det in enumerate(circ.detector_defs):
        for mid in det:
            eff[mid] |= 1 << i
    base = len(circ.detector_defs)
    for j, obs in enumerate(circ.observable_supports):
        for mid in obs:
            eff[mid] |= 1 << (base + j)
    return eff


def _combine(p_acc: float, p_new: float) -> float:
    return p_acc + p_new - 2.0 * p_acc * p_new


def compile_dem(circ: Circuit, faults: Iterable[FaultLocation]) -> DetectorErrorModel:
    """Compile fault locations into a merged detector error model.

    Elementary channels (prob/3 per single-qubit Pauli, prob/15 per two-qubit
    Pauli, prob per outcome flip) are propagated, empty signatures dropped,
    and duplicate signatures merged via p <- p1 + p2 - 2 p1 p2. Mechanisms
    flipping an observable but no detector abort the compilation.
    """
    n_det = len(circ.detector_defs)
    n_obs = len(circ.observable_supports)
    obs_mask_all = ((1 << n_obs) - 1) << n_det
    meas_eff = _meas_effects(circ)
    by_instr: dict[int, list[FaultLocation]] = {}
    for loc in faults:
        by_instr.setdefault(loc.instr_index, []).append(loc)

    eff_x = [0] * circ.n_qubits
    eff_z = [0] * circ.n_qubits
    merged: dict[int, float] = {}

    def emit(sig: int, prob: float, loc: FaultLocation) -> None:
        if prob <= 0.0 or sig == 0:
            return
        if not (sig & ~obs_mask_all):
            raise UndetectableLogicalFault(
                f"fault at instruction {loc.instr_index} ({loc.kind} on {loc.qubits}) "
                f"flips observables {sig >> n_det:b} without any detector")
        merged[sig] = _combine(merged.get(sig, 0.0), prob)

    for i in range(len(circ.instructions) - 1, -1, -1):
        for loc in by_instr.get(i, ()):
            if loc.kind == "flip":
                emit(meas_eff[loc.meas_id], loc.prob, loc)
            elif loc.kind == "dep1":
                q = loc.qubits[0]
                third = loc.prob / 3.0
                emit(eff_x[q], third, loc)
                emit(eff_x[q] ^ eff_z[q], third, loc)
                emit(eff_z[q], third, loc)
            elif loc.kind == "dep2":
                a, b = loc.qubits
                fifteenth = loc.prob / 15.0
                effs_a = (0, eff_x[a], eff_x[a] ^ eff_z[a], eff_z[a])
                effs_b = (0, eff_x[b], eff_x[b] ^ eff_z[b], eff_z[b])
                for ia in range(4):
                    for ib in range(4):
                        if ia == 0 and ib == 0:
                            continue
                        emit(effs_a[ia] ^ effs_b[ib], fifteenth, loc)
            else:
                raise ValueError(f"unknown fault kind {loc.kind!r}")

        ins = circ.instructions[i]
        if ins.kind == "h":
            q = ins.qubits[0]
            eff_x[q], eff_z[q] = eff_z[q], eff_x[q]
        elif ins.kind == "cp":
            c, t = ins.qubits
            px, pz = _SYM[ins.pauli]
            # X_c before the gate becomes X_c P_t after it
            new_xc = eff_x[c] ^ (eff_x[t] if px else 0) ^ (eff_z[t] if pz else 0)
            # Q_t picks up Z_c when Q anticommutes with P
            new_xt = eff_x[t] ^ (eff_z[c] if pz else 0)
            new_zt = eff_z[t] ^ (eff_z[c] if px else 0)
            eff_x[c] = new_xc
            eff_x[t] = new_xt
            eff_z[t] = new_zt
        elif ins.kind == "prep":
            for q in ins.qubits:
                eff_x[q] = 0
                eff_z[q] = 0
        else:  # meas: X flips the outcome and persists through the collapse
            for q, mid in zip(ins.qubits, ins.meas_ids):
                eff_x[q] ^= meas_eff[mid]

    sigs = sorted(
        merged.items(),
        key=lambda kv: (_bits(kv[0] & ((1 << n_det) - 1)), _bits(kv[0] >> n_det)),
    )
    probs = np.array([p for _, p in sigs], dtype=np.float64)
    dets = [_bits(sig & ((1 << n_det) - 1)) for sig, _ in sigs]
    obss = [_bits(sig >> n_det) for sig, _ in sigs]
    dem = DetectorErrorModel(probs, dets, obss, n_det, n_obs)
    dem.validate()
    return dem


def _bits(word: int) -> tuple[int, ...]:
    out = []
    i = 0
    while word:
        if word & 1:
            out.append(i)
        word >>= 1
        i += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

SAMPLE_BLOCK = 1 << 16


def sample(dem: DetectorErrorModel, shots: int, seed: int,
           ) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo detector/observable samples, deterministic in seed.

    Shots are partitioned into fixed blocks of SAMPLE_BLOCK; block b uses the
    Philox stream keyed (seed, b), so results do not depend on how blocks are
    scheduled across workers.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    det_bits = np.zeros((shots, dem.n_detectors), dtype=np.uint8)
    obs_bits = np.zeros((shots, dem.n_observables), dtype=np.uint8)
    for block_idx, start in enumerate(range(0, shots, SAMPLE_BLOCK)):
        count = min(SAMPLE_BLOCK, shots - start)
        rng = np.random.Generator(
            np.random.Philox(key=np.array([seed, block_idx], dtype=np.uint64)))
        counts = rng.binomial(count, dem.probs)
        for mech in np.nonzero(counts)[0]:
            rows = _floyd_sample(rng, count, int(counts[mech])) + start
            d = dem.dets[mech]
            o = dem.obss[mech]
            if d:
                det_bits[np.ix_(rows, np.asarray(d))] ^= 1
            if o:
                obs_bits[np.ix_(rows, np.asarray(o))] ^= 1
    return det_bits, obs_bits


def _floyd_sample(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """k distinct uniform indices from range(n) (Floyd's algorithm)."""
    chosen: set[int] = set()
    for j in range(n - k, n):
        t = int(rng.integers(0, j + 1))
        chosen.add(t if t not in chosen else j)
    return np.fromiter(chosen, dtype=np.int64, count=k)

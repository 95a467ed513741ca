"""Gate-level IR for ion chain circuits and the syndrome extraction builders.

Instructions come in four kinds, each occupying one time step of the chain:

* ``prep``  - reset a batch of qubits to |0> (parallel)
* ``h``     - one Hadamard (unitaries are sequential on the chain)
* ``cp``    - one controlled-Pauli gate (control, target)
* ``meas``  - measure a batch of qubits in the Z basis (parallel, slow)

Pauli operators are strings over IXYZ indexed by qubit. Measurement ids are
global and consecutive in emission order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import CssCode, DegenerateCodeError

Pauli = str


@dataclass(frozen=True)
class Instruction:
    kind: str  # prep | h | cp | meas
    qubits: tuple[int, ...]
    pauli: str | None = None  # cp only
    meas_ids: tuple[int, ...] = ()  # meas only, parallel to qubits

    def __post_init__(self):
        if self.kind == "cp":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("cp takes (control, target) with control != target")
            if self.pauli not in ("X", "Y", "Z"):
                raise ValueError(f"cp pauli must be X, Y or Z, got {self.pauli!r}")
        if self.kind == "meas" and len(self.meas_ids) != len(self.qubits):
            raise ValueError("meas needs one meas_id per qubit")


@dataclass
class Circuit:
    """Ordered instruction list with measurement/detector bookkeeping.

    meas_map maps (schedule index g, round t>=1) to the ancilla measurement
    id of generator g in round t; data_meas maps data qubit -> final
    measurement id. Detector definitions and logical observable supports are
    sets of measurement ids whose parity is deterministic / read out.
    """

    n_qubits: int
    instructions: list[Instruction] = field(default_factory=list)
    meas_count: int = 0
    meas_map: dict[tuple[int, int], int] = field(default_factory=dict)
    data_meas: dict[int, int] = field(default_factory=dict)
    detector_defs: list[frozenset[int]] = field(default_factory=list)
    observable_supports: list[frozenset[int]] = field(default_factory=list)

    def validate(self) -> None:
        seen: set[int] = set()
        for ins in self.instructions:
            if any(q >= self.n_qubits or q < 0 for q in ins.qubits):
                raise ValueError(f"instruction {ins} addresses qubits beyond {self.n_qubits}")
            for mid in ins.meas_ids:
                if mid in seen:
                    raise ValueError(f"duplicate measurement id {mid}")
                seen.add(mid)
        if len(seen) != self.meas_count:
            raise ValueError("meas_count does not match emitted measurement ids")
        anc_ids = set(self.meas_map.values())
        if len(anc_ids) != len(self.meas_map):
            raise ValueError("meas_map is not injective")
        if anc_ids & set(self.data_meas.values()):
            raise ValueError("ancilla and data measurement ids overlap")
        for det in self.detector_defs:
            if not det or any(m not in seen for m in det):
                raise ValueError("detector references unknown measurement ids")

    def counts(self) -> dict[str, int]:
        out = {"prep": 0, "h": 0, "cp": 0, "meas": 0}
        for ins in self.instructions:
            out[ins.kind] += 1
        return out


def build_syndrome_extraction(paulis: list[Pauli], n_a: int, *,
                              n_qubits: int | None = None,
                              batch_prep: bool = False) -> Circuit:
    """Syndrome extraction for r Pauli operators with n_a shared ancillas.

    Operators are measured in batches of up to n_a: each operator k gets
    ancilla c = n + (k mod n_a), prepared, Hadamard-ed, entangled with its
    support by controlled-Pauli gates in ascending data-qubit order, and
    Hadamard-ed again; each batch ends with one parallel measurement of the
    ancillas it used. batch_prep=True merges a batch's preparations into one
    parallel reset step instead of per-ancilla steps.
    """
    if n_a < 1:
        raise ValueError("n_a must be >= 1")
    if not paulis:
        raise ValueError("need at least one operator")
    n = len(paulis[0])
    for p in paulis:
        if len(p) != n or any(ch not in "IXYZ" for ch in p):
            raise ValueError(f"bad Pauli operator {p!r}")
    if n_qubits is not None and n_qubits < n + min(n_a, len(paulis)):
        raise ValueError("n_qubits too small for data plus ancillas")
    circ = Circuit(n_qubits=n_qubits or (n + min(n_a, len(paulis))))
    _emit_extraction_round(circ, paulis, n, n_a, round_idx=1, batch_prep=batch_prep)
    return circ


def _emit_extraction_round(circ: Circuit, paulis: list[Pauli], n: int, n_a: int,
                           round_idx: int, batch_prep: bool) -> None:
    r = len(paulis)
    ins = circ.instructions
    for i in range((r + n_a - 1) // n_a):
        ops = [(i * n_a + j, n + j) for j in range(n_a) if i * n_a + j < r]
        if batch_prep:
            ins.append(Instruction("prep", tuple(c for _, c in ops)))
        for k, c in ops:
            if not batch_prep:
                ins.append(Instruction("prep", (c,)))
            ins.append(Instruction("h", (c,)))
            for t in range(n):
                p = paulis[k][t]
                if p != "I":
                    ins.append(Instruction("cp", (c, t), pauli=p))
            ins.append(Instruction("h", (c,)))
        mids = []
        for k, c in ops:
            mid = circ.meas_count
            circ.meas_count += 1
            circ.meas_map[(k, round_idx)] = mid
            mids.append(mid)
        ins.append(Instruction("meas", tuple(c for _, c in ops), meas_ids=tuple(mids)))


def interleave_generators(code: CssCode, *, z_first: bool = False
                          ) -> list[tuple[str, int, Pauli]]:
    """Alternating schedule [(type, type_index, pauli), ...], X first by default."""
    xs = [("X", i, _support_pauli(row, "X")) for i, row in enumerate(code.hx)]
    zs = [("Z", i, _support_pauli(row, "Z")) for i, row in enumerate(code.hz)]
    a, b = (zs, xs) if z_first else (xs, zs)
    out = []
    for i in range(max(len(a), len(b))):
        if i < len(a):
            out.append(a[i])
        if i < len(b):
            out.append(b[i])
    return out


def _support_pauli(row: np.ndarray, letter: str) -> Pauli:
    return "".join(letter if v else "I" for v in row)


def build_memory_experiment(code: CssCode, basis: str, rounds: int, n_a: int, *,
                            batch_prep: bool = False, z_first: bool = False) -> Circuit:
    """Memory experiment: prep, `rounds` extraction rounds, transversal readout.

    basis="Z": data prepared in |0>, measured in Z; detectors are (a) round-1
    Z-generator outcomes, (b) consecutive-round outcome pairs for every
    generator, (c) last-round Z outcomes against the final data parity on the
    generator support. Observables are the logical_z supports on the final
    data measurements. basis="X" wraps the rounds in transversal Hadamards
    and uses the X generators/logicals symmetrically.
    """
    if basis not in ("X", "Z"):
        raise ValueError("basis must be 'X' or 'Z'")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if code.k <= 0:
        raise DegenerateCodeError(f"{code.name} has no logical qubits")
    if code.logical_x is None or code.logical_z is None:
        raise ValueError("compute_logicals(code) must run before building experiments")

    n = code.n
    schedule = interleave_generators(code, z_first=z_first)
    r = len(schedule)
    circ = Circuit(n_qubits=n + min(n_a, r))
    paulis = [p for _, _, p in schedule]

    circ.instructions.append(Instruction("prep", tuple(range(n))))
    if basis == "X":
        for q in range(n):
            circ.instructions.append(Instruction("h", (q,)))
    for t in range(1, rounds + 1):
        _emit_extraction_round(circ, paulis, n, n_a, round_idx=t, batch_prep=batch_prep)
    if basis == "X":
        for q in range(n):
            circ.instructions.append(Instruction("h", (q,)))
    mids = []
    for q in range(n):
        mid = circ.meas_count
        circ.meas_count += 1
        circ.data_meas[q] = mid
        mids.append(mid)
    circ.instructions.append(Instruction("meas", tuple(range(n)), meas_ids=tuple(mids)))

    basis_type = basis
    matrix = code.hz if basis == "Z" else code.hx
    supports = {("Z" if basis == "Z" else "X", i): np.nonzero(row)[0]
                for i, row in enumerate(matrix)}
    # (a) round-1 outcomes of basis-type generators
    for g, (typ, idx, _) in enumerate(schedule):
        if typ == basis_type:
            circ.detector_defs.append(frozenset({circ.meas_map[(g, 1)]}))
    # (b) consecutive-round pairs for every generator
    for t in range(1, rounds):
        for g in range(r):
            circ.detector_defs.append(
                frozenset({circ.meas_map[(g, t)], circ.meas_map[(g, t + 1)]}))
    # (c) final data parity against the last round, basis-type generators
    for g, (typ, idx, _) in enumerate(schedule):
        if typ == basis_type:
            ids = {circ.data_meas[int(q)] for q in supports[(typ, idx)]}
            circ.detector_defs.append(frozenset({circ.meas_map[(g, rounds)]} | ids))
    logicals = code.logical_z if basis == "Z" else code.logical_x
    for vec in logicals:
        circ.observable_supports.append(
            frozenset(circ.data_meas[int(q)] for q in np.nonzero(vec)[0]))
    circ.validate()
    return circ


# ---------------------------------------------------------------------------
# text serialization (golden-file format)
# ---------------------------------------------------------------------------

def to_text(circ: Circuit) -> str:
    lines = [f"QUBITS {circ.n_qubits}"]
    for ins in circ.instructions:
        if ins.kind == "prep":
            lines.append("PREP " + " ".join(map(str, ins.qubits)))
        elif ins.kind == "h":
            lines.append(f"H {ins.qubits[0]}")
        elif ins.kind == "cp":
            lines.append(f"CP {ins.pauli} {ins.qubits[0]} {ins.qubits[1]}")
        else:
            lines.append("MEAS " + " ".join(map(str, ins.qubits)))
    for det in circ.detector_defs:
        lines.append("DETECTOR " + " ".join(map(str, sorted(det))))
    for obs in circ.observable_supports:
        lines.append("OBSERVABLE " + " ".join(map(str, sorted(obs))))
    return "\n".join(lines) + "\n"

"""Ion chain noise model: fault locations for a circuit under C(n, p, tau_m).

Every instruction is one time step. Two-qubit gates depolarize their support
with probability p; single-qubit operations (prep, H) depolarize with p/10;
measurement outcomes flip with p/10. Idle qubits depolarize with p/100 per
gate step, scaled by tau_m during the (slow) measurement steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit

GATE_FRACTION = 10  # single-qubit ops and measurement flips: p / 10
IDLE_FRACTION = 100  # idle qubits: p / 100 per unit-duration step


@dataclass(frozen=True)
class NoiseParams:
    """Physical error rate p and measurement duration multiple tau_m."""

    p: float
    tau_m: float = 30.0

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if self.tau_m < 0:
            raise ValueError("tau_m must be nonnegative")
        if self.tau_m * self.p > 100:
            raise ValueError(
                f"tau_m * p = {self.tau_m * self.p} leaves the model's validity regime")


@dataclass(frozen=True)
class FaultLocation:
    """One elementary noise channel attached to (just after) an instruction.

    kind "dep1": uniform X/Y/Z on qubits[0] with total probability prob;
    kind "dep2": uniform over the 15 two-qubit Paulis on qubits;
    kind "flip": classical flip of measurement outcome meas_id.
    """

    instr_index: int
    kind: str  # dep1 | dep2 | flip
    qubits: tuple[int, ...]
    prob: float
    meas_id: int | None = None


def annotate(circ: Circuit, params: NoiseParams) -> list[FaultLocation]:
    """Fault locations for every instruction of the circuit, in program order."""
    p = params.p
    out: list[FaultLocation] = []
    all_qubits = range(circ.n_qubits)
    for i, ins in enumerate(circ.instructions):
        active = set(ins.qubits)
        if ins.kind == "cp":
            out.append(FaultLocation(i, "dep2", ins.qubits, p))
            idle_p = p / IDLE_FRACTION
        elif ins.kind == "h":
            out.append(FaultLocation(i, "dep1", ins.qubits, p / GATE_FRACTION))
            idle_p = p / IDLE_FRACTION
        elif ins.kind == "prep":
            for q in ins.qubits:
                out.append(FaultLocation(i, "dep1", (q,), p / GATE_FRACTION))
            idle_p = p / IDLE_FRACTION
        elif ins.kind == "meas":
            for q, mid in zip(ins.qubits, ins.meas_ids):
                out.append(FaultLocation(i, "flip", (q,), p / GATE_FRACTION, meas_id=mid))
            idle_p = params.tau_m * p / IDLE_FRACTION
        else:
            raise ValueError(f"unknown instruction kind {ins.kind!r}")
        for q in all_qubits:
            if q not in active:
                out.append(FaultLocation(i, "dep1", (q,), idle_p))
    return out


def location_dump(locations: list[FaultLocation]) -> str:
    """Text dump for golden-file tests (12 significant digits)."""
    lines = []
    for loc in locations:
        qs = ",".join(map(str, loc.qubits))
        tail = f" meas={loc.meas_id}" if loc.kind == "flip" else ""
        lines.append(f"{loc.instr_index} {loc.kind} q={qs} p={loc.prob:.12g}{tail}")
    return "\n".join(lines) + "\n"

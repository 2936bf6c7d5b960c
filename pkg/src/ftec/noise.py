"""Single-location Pauli faults on compiled circuits."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .extraction import Circuit
from .pauli import PauliOperator
from .statevec import Measure, OneQubit, PrepCat, PrepZero, StateVector, apply_pauli

__all__ = [
    "FaultError",
    "FaultLocation",
    "enumerate_fault_locations",
    "inject",
    "inject_many",
    "sample_faults",
    "apply_error_process",
    "qubit_sort_key",
]

KINDS = ("X", "Y", "Z")
_SPEC = re.compile(r"^@(\d+):(before|after):([A-Za-z0-9_]+):([A-Z]+)$")


class FaultError(ValueError):
    pass


@dataclass(frozen=True)
class FaultLocation:
    gate_index: int
    timing: str  # "before" | "after"
    qubit: int | str
    kind: str

    def __str__(self) -> str:
        return f"@{self.gate_index}:{self.timing}:{self.qubit}:{self.kind}"

    @classmethod
    def parse(cls, text: str) -> FaultLocation:
        m = _SPEC.match(text.strip())
        if m is None:
            raise FaultError(f"malformed fault spec {text!r}")
        gi, timing, q, kind = m.groups()
        if kind not in KINDS:
            raise FaultError(f"fault kind must be X, Y or Z, got {kind!r}")
        return cls(int(gi), timing, int(q) if q.isdigit() else q, kind)


def qubit_sort_key(q):
    if isinstance(q, int):
        return (0, q, "")
    m = re.fullmatch(r"a(\d+)", q)
    return (1, int(m.group(1)), "") if m else (2, 0, q)


def _lifetimes(circuit: Circuit) -> dict:
    """Map ancilla -> (prep index, measure index or None)."""
    life = {}
    for i, g in enumerate(circuit.gates):
        if isinstance(g, (PrepZero, PrepCat)):
            for q in g.qubits:
                life[q] = [i, None]
        elif isinstance(g, Measure) and g.qubit in life:
            life[g.qubit][1] = i
    return life


def enumerate_fault_locations(circuit: Circuit, kinds=KINDS) -> list[FaultLocation]:
    """Every distinct qubit-time slot times every Pauli kind.

    A slot between two gates that touch a qubit is reported once, as "after"
    the earlier gate. Ancillas have no slot before their preparation or after
    their measurement.
    """
    touches: dict = {q: [] for q in range(circuit.n)}
    for i, g in enumerate(circuit.gates):
        for q in g.qubits:
            touches.setdefault(q, []).append(i)
    slots = []
    for q, idxs in touches.items():
        if not idxs:
            slots.append((0, "before", q))
            continue
        if isinstance(q, int) and q < circuit.n:
            slots.append((idxs[0], "before", q))
            slots.extend((i, "after", q) for i in idxs)
        else:
            for i in idxs:
                if not isinstance(circuit.gates[i], Measure):
                    slots.append((i, "after", q))
    slots.sort(key=lambda s: (s[0], s[1] == "after", qubit_sort_key(s[2])))
    return [FaultLocation(gi, t, q, k) for gi, t, q in slots for k in kinds]


def _check(circuit: Circuit, loc: FaultLocation) -> None:
    if loc.kind not in KINDS:
        raise FaultError(f"fault kind must be X, Y or Z, got {loc.kind!r}")
    if loc.timing not in ("before", "after"):
        raise FaultError(f"timing must be before or after, got {loc.timing!r}")
    if not 0 <= loc.gate_index < len(circuit.gates):
        raise FaultError(f"gate index {loc.gate_index} out of range")
    q, gi = loc.qubit, loc.gate_index
    if isinstance(q, int) and 0 <= q < circuit.n:
        return
    life = _lifetimes(circuit).get(q)
    if life is None:
        raise FaultError(f"unknown qubit {q!r}")
    prep, meas = life
    meas = len(circuit.gates) if meas is None else meas
    ok = prep <= gi < meas if loc.timing == "after" else prep < gi <= meas
    if not ok:
        raise FaultError(f"qubit {q!r} does not exist at {loc}")


def inject(circuit: Circuit, loc: FaultLocation) -> Circuit:
    """Copy of ``circuit`` with one Pauli gate spliced in at ``loc``."""
    _check(circuit, loc)
    pos = loc.gate_index + (loc.timing == "after")
    gates = list(circuit.gates)
    gates.insert(pos, OneQubit(loc.kind, loc.qubit))
    stages = []
    for s in circuit.stages:
        if s.start <= loc.gate_index < s.stop:
            s = replace(s, stop=s.stop + 1)
        elif s.start > loc.gate_index:
            s = replace(s, start=s.start + 1, stop=s.stop + 1)
        stages.append(s)
    return Circuit(circuit.n, gates, stages, circuit.mode)


def inject_many(circuit: Circuit, locs) -> Circuit:
    ordered = sorted(locs, key=lambda l: (l.gate_index, l.timing == "after"), reverse=True)
    for loc in ordered:
        circuit = inject(circuit, loc)
    return circuit


def sample_faults(circuit: Circuit, p: float, rng) -> list[FaultLocation]:
    """Each qubit-time slot independently suffers a random X/Y/Z with probability p."""
    out = []
    for loc in enumerate_fault_locations(circuit, kinds=("X",)):
        if rng.random() < p:
            out.append(replace(loc, kind=KINDS[int(rng.integers(3))]))
    return out


def apply_error_process(state: StateVector, p: PauliOperator) -> StateVector:
    """Return ``p`` applied to a copy of ``state``."""
    out = state.copy()
    apply_pauli(out, p)
    return out

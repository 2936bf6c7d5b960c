"""Compile stabilizer generators into syndrome-extraction circuits and run them.

Every generator becomes one stage: one-qubit rotations that turn it into a
pure Z string, parity collection onto ancillas, measurement, then the inverse
rotations. Two ancilla modes are supported:

``bare``
    a single ancilla collects the parity through one XOR per support qubit.
``cat``
    a cat register with one qubit per support qubit. Each cat qubit is rotated
    by R just before its XOR, so the register measures only the parity of the
    Z string; the syndrome bit is the parity of the register's outcomes.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .code import (
    TABLE1,
    StabilizerCode,
    Syndrome,
    five_qubit_code,
    five_qubit_shift,
    syndrome_str,
)
from .pauli import PauliOperator, format_notation, parse_notation, weight
from .statevec import (
    Gate,
    Measure,
    OneQubit,
    PrepCat,
    PrepZero,
    StateVector,
    Xor,
    apply_gate,
    apply_pauli,
    discard_ancilla,
    encode_logical,
)

__all__ = [
    "MODES",
    "Stage",
    "Circuit",
    "CircuitParseError",
    "ResourceReport",
    "ResourceBoundError",
    "ExtractionOutcome",
    "Unconfirmed",
    "basis_change",
    "inverse_rotations",
    "compile_stage",
    "compile_full",
    "compile_presentation_walk",
    "presentation_qubits",
    "run_extraction",
    "repeat_until_confirmed",
    "search_generator_assignment",
]

MODES = ("bare", "cat")


class CircuitParseError(ValueError):
    pass


class ResourceBoundError(AssertionError):
    pass


class Unconfirmed(RuntimeError):
    def __init__(self, history):
        self.history = list(history)
        rounds = ", ".join(syndrome_str(s) for s in self.history)
        super().__init__(f"no two consecutive rounds agreed: {rounds}")


# -- circuit types -------------------------------------------------------------


@dataclass(frozen=True)
class Stage:
    """One generator's slice ``gates[start:stop]`` of a circuit."""

    generator: PauliOperator
    sign: int
    start: int
    stop: int
    cbits: tuple[str, ...]

    @property
    def offset(self) -> int:
        # measured parity of the rotated Z string differs from the syndrome bit
        # by the generator sign and by one minus sign per Y factor
        return (self.generator.y_count + (self.sign < 0)) & 1


@dataclass
class Circuit:
    n: int
    gates: list[Gate]
    stages: list[Stage]
    mode: str = "bare"

    @property
    def classical_bits(self) -> list[str]:
        return [g.cbit for g in self.gates if isinstance(g, Measure)]

    @property
    def stage_boundaries(self) -> list[int]:
        return [s.start for s in self.stages] + [len(self.gates)]

    @property
    def ancillas(self) -> list:
        out = []
        for g in self.gates:
            if isinstance(g, (PrepZero, PrepCat)):
                out.extend(g.qubits)
        return out

    def stage_gates(self, j: int) -> list[Gate]:
        s = self.stages[j]
        return self.gates[s.start:s.stop]

    def to_text(self) -> str:
        lines = [f"# circuit n={self.n} mode={self.mode}"]
        starts = {s.start: (j, s) for j, s in enumerate(self.stages)}
        for i, g in enumerate(self.gates):
            if i in starts:
                j, s = starts[i]
                sign = "-" if s.sign < 0 else ""
                lines.append(f"# stage {j}: {sign}{format_notation(s.generator)}")
            lines.append(format_gate(g))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Circuit:
        return parse_circuit(text)


def _fmt_label(q) -> str:
    return str(q)


def _parse_label(tok: str):
    return int(tok) if tok.isdigit() else tok


def format_gate(g: Gate) -> str:
    if isinstance(g, OneQubit):
        return f"{g.kind} {g.qubit}"
    if isinstance(g, Xor):
        return f"XOR {g.control} {g.target}"
    if isinstance(g, PrepZero):
        return f"PREP {g.qubit}"
    if isinstance(g, PrepCat):
        return "CAT " + " ".join(_fmt_label(q) for q in g.cat)
    if isinstance(g, Measure):
        return f"M {g.qubit} -> {g.cbit}"
    raise TypeError(f"not a gate: {g!r}")


_ONE_QUBIT_KINDS = {"R", "RP", "RPD", "X", "Y", "Z"}
_HEADER = re.compile(r"^# circuit n=(\d+) mode=(\w+)$")
_STAGE = re.compile(r"^# stage (\d+): (-?)(\S+)$")


def parse_gate(line: str) -> Gate:
    toks = line.split()
    if not toks:
        raise CircuitParseError("empty gate line")
    op, args = toks[0], toks[1:]
    if op in _ONE_QUBIT_KINDS and len(args) == 1:
        return OneQubit(op, _parse_label(args[0]))
    if op == "XOR" and len(args) == 2:
        return Xor(_parse_label(args[0]), _parse_label(args[1]))
    if op == "PREP" and len(args) == 1:
        return PrepZero(_parse_label(args[0]))
    if op == "CAT" and args:
        return PrepCat(tuple(_parse_label(a) for a in args))
    if op == "M" and len(args) == 3 and args[1] == "->":
        return Measure(_parse_label(args[0]), args[2])
    raise CircuitParseError(f"cannot parse gate line {line!r}")


def parse_circuit(text: str) -> Circuit:
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    if not lines or not (m := _HEADER.match(lines[0])):
        raise CircuitParseError("missing '# circuit n=<int> mode=<mode>' header")
    n, mode = int(m.group(1)), m.group(2)
    gates: list[Gate] = []
    heads: list[tuple[PauliOperator, int, int]] = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            sm = _STAGE.match(ln)
            if sm:
                if int(sm.group(1)) != len(heads):
                    raise CircuitParseError(f"stage comments out of order: {ln!r}")
                sign = -1 if sm.group(2) else 1
                heads.append((parse_notation(sm.group(3)), sign, len(gates)))
            continue
        gates.append(parse_gate(ln))
    stages = []
    for j, (gen, sign, start) in enumerate(heads):
        stop = heads[j + 1][2] if j + 1 < len(heads) else len(gates)
        cbits = tuple(g.cbit for g in gates[start:stop] if isinstance(g, Measure))
        stages.append(Stage(gen, sign, start, stop, cbits))
    return Circuit(n, gates, stages, mode)


# -- compilation -----------------------------------------------------------------


def basis_change(gen: PauliOperator) -> tuple[list[OneQubit], PauliOperator]:
    """Rotations mapping ``gen`` to a Z string on the same support.

    X factors get R, Y factors get R' (which sends Y to -Z); the returned
    operator carries that sign in its phase.
    """
    gates = []
    for q, letter in gen.factors():
        if letter == "X":
            gates.append(OneQubit("R", q))
        elif letter == "Y":
            gates.append(OneQubit("RP", q))
    support = gen.x | gen.z
    conj = PauliOperator(gen.n, 0, support, 2 * gen.y_count + gen.phase)
    return gates, conj


_INVERSE = {"R": "R", "RP": "RPD", "RPD": "RP", "X": "X", "Y": "Y", "Z": "Z"}


def inverse_rotations(gates: list[OneQubit]) -> list[OneQubit]:
    return [OneQubit(_INVERSE[g.kind], g.qubit) for g in reversed(gates)]


def compile_stage(
    gen: PauliOperator,
    mode: str = "bare",
    *,
    ancilla_start: int = 0,
    cbit_start: int = 0,
    conjugate_cat: bool = True,
) -> tuple[list[Gate], tuple[str, ...]]:
    """Gate list and classical bits of a single extraction stage.

    ``conjugate_cat=False`` gives the naive cat coupling (raw XOR targets
    measured directly), kept only to demonstrate that it disturbs the code.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    w = weight(gen)
    if w == 0:
        raise ValueError("cannot extract the identity generator")
    pre, _ = basis_change(gen)
    support = gen.support
    gates: list[Gate] = []
    if mode == "bare":
        anc = f"a{ancilla_start}"
        cbits = (f"c{cbit_start}",)
        gates.append(PrepZero(anc))
        gates.extend(pre)
        gates.extend(Xor(q, anc) for q in support)
        gates.append(Measure(anc, cbits[0]))
    else:
        cat = tuple(f"a{ancilla_start + i}" for i in range(w))
        cbits = tuple(f"c{cbit_start + i}" for i in range(w))
        gates.append(PrepCat(cat))
        gates.extend(pre)
        for q, a in zip(support, cat):
            if conjugate_cat:
                gates.append(OneQubit("R", a))
            gates.append(Xor(q, a))
        gates.extend(Measure(a, c) for a, c in zip(cat, cbits))
    gates.extend(inverse_rotations(pre))
    return gates, cbits


@dataclass
class ResourceReport:
    n: int
    k: int
    rotations: int
    xors: int
    ancillas: int

    @property
    def gate_count(self) -> int:
        return self.rotations + self.xors

    @property
    def gate_bound(self) -> int:
        return 2 * self.n * (self.n - self.k + 1)

    @property
    def ancilla_bound(self) -> int:
        return self.n * (self.n - self.k)

    @property
    def within_bounds(self) -> bool:
        return self.gate_count <= self.gate_bound and self.ancillas <= self.ancilla_bound

    def lines(self) -> list[str]:
        return [
            f"gates={self.gate_count} (rotations={self.rotations} xors={self.xors}) "
            f"bound={self.gate_bound}",
            f"ancillas={self.ancillas} bound={self.ancilla_bound}",
            f"within_bounds={'yes' if self.within_bounds else 'no'}",
        ]


def resource_report(circuit: Circuit, k: int) -> ResourceReport:
    rot = sum(1 for g in circuit.gates if isinstance(g, OneQubit) and g.kind in ("R", "RP", "RPD"))
    xors = sum(1 for g in circuit.gates if isinstance(g, Xor))
    return ResourceReport(circuit.n, k, rot, xors, len(circuit.ancillas))


def _assemble(n, stage_parts, mode) -> Circuit:
    gates: list[Gate] = []
    stages = []
    for gen, sign, part, cbits in stage_parts:
        start = len(gates)
        gates.extend(part)
        stages.append(Stage(gen, sign, start, len(gates), cbits))
    return Circuit(n, gates, stages, mode)


def compile_full(
    code: StabilizerCode,
    mode: str = "bare",
    *,
    conjugate_cat: bool = True,
    check_bounds: bool = True,
) -> tuple[Circuit, ResourceReport]:
    """One stage per generator, in generator order, with fresh ancillas."""
    parts = []
    anc = cb = 0
    for sign, gen in code.signed_generators():
        part, cbits = compile_stage(
            gen, mode, ancilla_start=anc, cbit_start=cb, conjugate_cat=conjugate_cat
        )
        anc += 1 if mode == "bare" else weight(gen)
        cb += len(cbits)
        parts.append((gen, sign, part, cbits))
    circuit = _assemble(code.n, parts, mode)
    report = resource_report(circuit, code.k)
    if check_bounds and not report.within_bounds:
        raise ResourceBoundError("; ".join(report.lines()))
    return circuit, report


def presentation_qubits(j: int) -> tuple[int, int]:
    """Qubits rotated by R to go from presentation S to L_j."""
    if not 0 <= j < 5:
        raise ValueError(f"presentation index must be in 0..4, got {j}")
    return tuple(sorted(((j + 2) % 5, (j + 3) % 5)))


# syndrome order of the five-qubit network and the generator each label measures
WALK_ORDER = (3, 4, 0, 1)


def compile_presentation_walk(mode: str = "bare") -> Circuit:
    """Five-qubit network that walks S -> L3 -> L4 -> L0 -> L1 -> S.

    Rotations shared by consecutive presentations cancel, so each stage only
    rotates the qubits whose basis actually changes.
    """
    code = five_qubit_code()
    parts = []
    anc = cb = 0
    current: set[int] = set()
    for idx, j in enumerate(WALK_ORDER):
        target = set(presentation_qubits(j))
        part: list[Gate] = []
        parity = [q for q in range(5) if q != j]
        if mode == "bare":
            a = f"a{anc}"
            cbits = (f"c{cb}",)
            part.append(PrepZero(a))
            part.extend(OneQubit("R", q) for q in sorted(current ^ target))
            part.extend(Xor(q, a) for q in parity)
            part.append(Measure(a, cbits[0]))
            anc += 1
        elif mode == "cat":
            cat = tuple(f"a{anc + i}" for i in range(4))
            cbits = tuple(f"c{cb + i}" for i in range(4))
            part.append(PrepCat(cat))
            part.extend(OneQubit("R", q) for q in sorted(current ^ target))
            for q, a in zip(parity, cat):
                part.append(OneQubit("R", a))
                part.append(Xor(q, a))
            part.extend(Measure(a, c) for a, c in zip(cat, cbits))
            anc += 4
        else:
            raise ValueError(f"unknown mode {mode!r}")
        cb += len(cbits)
        current = target
        if idx == len(WALK_ORDER) - 1:
            part.extend(OneQubit("R", q) for q in sorted(current))
        parts.append((code.generators[idx], code.signs[idx], part, cbits))
    return _assemble(5, parts, mode)


# -- execution ---------------------------------------------------------------------


@dataclass
class ExtractionOutcome:
    syndrome: Syndrome
    raw_bits: tuple[tuple[int, ...], ...]
    rounds_used: int = 1
    history: list[Syndrome] = field(default_factory=list)


def run_extraction(
    state: StateVector, circuit: Circuit, rng=None
) -> tuple[ExtractionOutcome, StateVector]:
    """Simulate ``circuit`` on a copy of ``state``.

    Ancillas are attached at their preparation and discarded right after
    measurement, so at most one stage's register is live at a time.
    """
    st = state.copy()
    data = set(range(circuit.n))
    bits: dict[str, int] = {}
    for g in circuit.gates:
        out = apply_gate(st, g, rng)
        if out is not None:
            bits[g.cbit] = out
            if g.qubit not in data:
                discard_ancilla(st, [g.qubit])
    raw = tuple(tuple(bits[c] for c in s.cbits) for s in circuit.stages)
    syndrome = tuple((sum(r) + s.offset) & 1 for r, s in zip(raw, circuit.stages))
    return ExtractionOutcome(syndrome, raw, 1, [syndrome]), st


def repeat_until_confirmed(
    state: StateVector,
    code: StabilizerCode | None = None,
    mode: str = "cat",
    rng=None,
    max_rounds: int = 4,
    *,
    circuit: Circuit | None = None,
    round_circuits: dict[int, Circuit] | None = None,
) -> tuple[ExtractionOutcome, StateVector]:
    """Repeat extraction until two consecutive rounds give the same syndrome.

    ``round_circuits`` overrides the circuit for particular 1-based rounds,
    which is how faults are placed in a specific round.
    """
    if max_rounds < 2:
        raise ValueError("max_rounds must be at least 2")
    if circuit is None:
        if code is None:
            raise ValueError("need a code or a compiled circuit")
        circuit, _ = compile_full(code, mode)
    round_circuits = round_circuits or {}
    history: list[Syndrome] = []
    raws = []
    for r in range(1, max_rounds + 1):
        out, state = run_extraction(state, round_circuits.get(r, circuit), rng)
        history.append(out.syndrome)
        raws.append(out.raw_bits)
        if r >= 2 and history[-1] == history[-2]:
            return ExtractionOutcome(history[-1], out.raw_bits, r, history), state
    raise Unconfirmed(history)


# -- generator/reference-table assignment search ---------------------------------


def search_generator_assignment(mode: str = "bare", seed: int = 0):
    """Find shift order and signs whose circuit syndromes reproduce the reference table.

    Each cyclic shift of the seed generator is compiled as an unsigned stage
    and run on every reference-table error applied to a generic S-presentation state.
    Returns every ``(shifts, signs)`` assignment that matches all 16 rows.
    """
    rng = np.random.default_rng(seed)
    base = encode_logical(np.cos(0.3), np.exp(0.7j) * np.sin(0.3), "S")
    raw = {}
    for s in range(5):
        gen = five_qubit_shift(s)
        part, cbits = compile_stage(gen, mode)
        circ = _assemble(5, [(gen, 1, part, cbits)], mode)
        for label in TABLE1.values():
            st = base.copy()
            apply_pauli(st, PauliOperator.from_label(label, 5))
            out, _ = run_extraction(st, circ, rng)
            raw[s, label] = out.syndrome[0]
    found = []
    for shifts in itertools.permutations(range(5), 4):
        for sign_bits in itertools.product((0, 1), repeat=4):
            ok = all(
                tuple(raw[s, label] ^ b for s, b in zip(shifts, sign_bits))
                == tuple(int(c) for c in key)
                for key, label in TABLE1.items()
            )
            if ok:
                found.append((shifts, tuple(-1 if b else 1 for b in sign_bits)))
    return found


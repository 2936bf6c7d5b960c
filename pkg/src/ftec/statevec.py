"""Dense state-vector simulation for the extraction gate set.

Amplitudes are stored as a flat complex array; qubit ``labels[0]`` is the most
significant bit so that index ``int("00010", 2)`` is the ket ``|00010>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .pauli import PauliOperator

__all__ = [
    "SimulationError",
    "AncillaEntangled",
    "Label",
    "StateVector",
    "OneQubit",
    "Xor",
    "PrepZero",
    "PrepCat",
    "Measure",
    "Gate",
    "GATE_MATRICES",
    "apply_gate",
    "apply_pauli",
    "attach_ancilla",
    "discard_ancilla",
    "fidelity",
    "encode_logical",
    "codeword",
    "code_basis",
    "encode_code_state",
    "haar_qubit",
    "DETERMINISTIC_TOL",
]

Label = Union[int, str]

DETERMINISTIC_TOL = 1e-10
_PURITY_TOL = 1e-10

_S2 = 1 / np.sqrt(2)
GATE_MATRICES = {
    "R": np.array([[1, 1], [1, -1]], dtype=complex) * _S2,
    "RP": np.array([[1, 1j], [1j, 1]], dtype=complex) * _S2,
    "RPD": np.array([[1, -1j], [-1j, 1]], dtype=complex) * _S2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class SimulationError(RuntimeError):
    pass


class AncillaEntangled(SimulationError):
    pass


# -- gates -------------------------------------------------------------------


@dataclass(frozen=True)
class OneQubit:
    kind: str  # R, RP, RPD, X, Y, Z
    qubit: Label

    @property
    def qubits(self) -> tuple[Label, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class Xor:
    control: Label
    target: Label

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("XOR control and target must differ")

    @property
    def qubits(self) -> tuple[Label, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class PrepZero:
    qubit: Label

    @property
    def qubits(self) -> tuple[Label, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class PrepCat:
    cat: tuple[Label, ...]

    @property
    def qubits(self) -> tuple[Label, ...]:
        return self.cat


@dataclass(frozen=True)
class Measure:
    qubit: Label
    cbit: str

    @property
    def qubits(self) -> tuple[Label, ...]:
        return (self.qubit,)


Gate = Union[OneQubit, Xor, PrepZero, PrepCat, Measure]


# -- state -------------------------------------------------------------------


class StateVector:
    """Pure state over an ordered list of qubit labels."""

    def __init__(self, labels, amplitudes):
        self.labels: list[Label] = list(labels)
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amps.size != 1 << len(self.labels):
            raise SimulationError(
                f"{amps.size} amplitudes for {len(self.labels)} qubits"
            )
        if len(set(self.labels)) != len(self.labels):
            raise SimulationError("duplicate qubit labels")
        self.amplitudes = amps

    @classmethod
    def zeros(cls, labels) -> StateVector:
        labels = list(labels)
        amps = np.zeros(1 << len(labels), dtype=complex)
        amps[0] = 1.0
        return cls(labels, amps)

    @classmethod
    def from_kets(cls, terms: dict[str, complex], labels=None) -> StateVector:
        """Build a normalized state from ``{"00010": amp, ...}``."""
        m = len(next(iter(terms)))
        labels = list(range(m)) if labels is None else list(labels)
        amps = np.zeros(1 << m, dtype=complex)
        for bits, a in terms.items():
            amps[int(bits, 2)] += a
        amps /= np.linalg.norm(amps)
        return cls(labels, amps)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def copy(self) -> StateVector:
        return StateVector(self.labels, self.amplitudes.copy())

    def axis(self, label: Label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise SimulationError(f"unknown qubit label {label!r}") from None

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def amplitude(self, bits: str) -> complex:
        return complex(self.amplitudes[int(bits, 2)])

    def dump(self, tol: float = 1e-12) -> str:
        """One line per nonzero amplitude: ``|bits> re im``."""
        m = self.num_qubits
        lines = []
        for idx in np.flatnonzero(np.abs(self.amplitudes) >= tol):
            a = self.amplitudes[idx]
            lines.append(f"|{idx:0{m}b}> {a.real + 0.0:.12g} {a.imag + 0.0:.12g}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"StateVector(labels={self.labels})"


def _apply_matrix(state: StateVector, mat: np.ndarray, label: Label) -> None:
    ax = state.axis(label)
    m = state.num_qubits
    psi = state.amplitudes.reshape(1 << ax, 2, 1 << (m - ax - 1))
    state.amplitudes = np.einsum("ij,ajb->aib", mat, psi).reshape(-1)


def _apply_xor(state: StateVector, control: Label, target: Label) -> None:
    c, t = state.axis(control), state.axis(target)
    psi = state.tensor()
    idx = [slice(None)] * state.num_qubits
    idx[c] = 1
    sub = psi[tuple(idx)]
    ta = t - 1 if t > c else t
    sub[...] = np.flip(sub, axis=ta).copy()


def attach_ancilla(state: StateVector, labels, init: str = "zero") -> None:
    """Tensor fresh qubits onto the end of ``state`` in |0..0> or a cat state."""
    labels = list(labels)
    for lb in labels:
        if lb in state.labels:
            raise SimulationError(f"qubit {lb!r} already present")
    w = len(labels)
    anc = np.zeros(1 << w, dtype=complex)
    if init == "zero":
        anc[0] = 1.0
    elif init == "cat":
        anc[0] = anc[-1] = _S2
    else:
        raise ValueError(f"unknown ancilla init {init!r}")
    state.amplitudes = np.kron(state.amplitudes, anc)
    state.labels.extend(labels)


def discard_ancilla(state: StateVector, labels) -> None:
    """Remove qubits that are in a product state with the rest."""
    for lb in list(labels):
        ax = state.axis(lb)
        mat = np.moveaxis(state.tensor(), ax, 0).reshape(2, -1)
        rho = mat @ mat.conj().T
        purity = float(np.real(np.trace(rho @ rho)))
        if purity < 1 - _PURITY_TOL:
            raise AncillaEntangled(f"qubit {lb!r} is entangled (purity {purity:.6g})")
        vals, vecs = np.linalg.eigh(rho)
        phi = vecs[:, np.argmax(vals)]
        rest = phi.conj() @ mat
        rest /= np.linalg.norm(rest)
        state.amplitudes = rest.reshape(-1)
        del state.labels[ax]


def _measure(state: StateVector, label: Label, rng) -> int:
    ax = state.axis(label)
    m = state.num_qubits
    psi = state.amplitudes.reshape(1 << ax, 2, 1 << (m - ax - 1))
    p0 = float(np.vdot(psi[:, 0, :], psi[:, 0, :]).real)
    p1 = float(np.vdot(psi[:, 1, :], psi[:, 1, :]).real)
    total = p0 + p1
    if total < DETERMINISTIC_TOL:
        raise SimulationError("norm underflow during measurement")
    p0, p1 = p0 / total, p1 / total
    if p1 < DETERMINISTIC_TOL:
        outcome = 0
    elif p0 < DETERMINISTIC_TOL:
        outcome = 1
    else:
        if rng is None:
            raise SimulationError("random measurement outcome needs an rng")
        outcome = int(rng.random() < p1)
    psi = psi.copy()
    psi[:, 1 - outcome, :] = 0
    psi /= np.sqrt(p1 if outcome else p0) * np.sqrt(total)
    state.amplitudes = psi.reshape(-1)
    return outcome


def apply_gate(state: StateVector, gate: Gate, rng=None) -> int | None:
    """Apply ``gate`` in place; returns the outcome bit for measurements."""
    if isinstance(gate, OneQubit):
        _apply_matrix(state, GATE_MATRICES[gate.kind], gate.qubit)
    elif isinstance(gate, Xor):
        _apply_xor(state, gate.control, gate.target)
    elif isinstance(gate, Measure):
        return _measure(state, gate.qubit, rng)
    elif isinstance(gate, PrepZero):
        attach_ancilla(state, [gate.qubit], "zero")
    elif isinstance(gate, PrepCat):
        attach_ancilla(state, gate.cat, "cat")
    else:
        raise TypeError(f"not a gate: {gate!r}")
    return None


def apply_pauli(state: StateVector, p: PauliOperator, qubits=None) -> None:
    """Multiply ``state`` in place by ``p`` (phase included).

    ``qubits`` maps Pauli position q to a state label; defaults to ``0..n-1``.
    """
    qubits = list(range(p.n)) if qubits is None else list(qubits)
    if len(qubits) != p.n:
        raise SimulationError(f"{p.n}-qubit operator but {len(qubits)} labels")
    m = state.num_qubits
    axes = [state.axis(lb) for lb in qubits]
    xmask = zmask = 0
    for q, ax in enumerate(axes):
        bit = 1 << (m - 1 - ax)
        if (p.x >> q) & 1:
            xmask |= bit
        if (p.z >> q) & 1:
            zmask |= bit
    idx = np.arange(1 << m)
    # P = i^phase * i^{#Y} * X^x Z^z with Z acting first
    zsign = 1 - 2 * (np.bitwise_count(idx & zmask) & 1).astype(np.int8) if zmask else 1
    amps = state.amplitudes * zsign
    new = np.empty_like(amps)
    new[idx ^ xmask] = amps
    state.amplitudes = new * (1j ** ((p.phase + p.y_count) % 4))


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.labels != b.labels:
        raise SimulationError(f"label mismatch: {a.labels} vs {b.labels}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


# -- five-qubit codewords ------------------------------------------------------

# signs of the 16 kets in each codeword
_C0 = {
    "00000": 1, "11000": 1, "01100": 1, "00110": 1, "00011": 1, "10001": 1,
    "10100": -1, "01010": -1, "00101": -1, "10010": -1, "01001": -1,
    "11110": -1, "01111": -1, "10111": -1, "11011": -1, "11101": -1,
}
_C1 = {
    "11111": 1, "00111": 1, "10011": 1, "11001": 1, "11100": 1, "01110": 1,
    "01011": -1, "10101": -1, "11010": -1, "01101": -1, "10110": -1,
    "00001": -1, "10000": -1, "01000": -1, "00100": -1, "00010": -1,
}


def codeword(bit: int) -> StateVector:
    """|c_0> or |c_1> of the cyclic five-qubit presentation, normalized."""
    return StateVector.from_kets(_C1 if bit else _C0)


def encode_logical(alpha: complex, beta: complex, presentation: str = "S") -> StateVector:
    """Five-qubit encoding of ``alpha|0> + beta|1>`` in presentation C or S."""
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > 1e-10:
        raise ValueError("logical amplitudes must be normalized")
    c0, c1 = codeword(0).amplitudes, codeword(1).amplitudes
    if presentation == "C":
        amps = alpha * c0 + beta * c1
    elif presentation == "S":
        amps = (alpha * (c0 + c1) + beta * (c0 - c1)) * _S2
    else:
        raise ValueError(f"unknown presentation {presentation!r}")
    return StateVector(range(5), amps)


# -- generic code states -----------------------------------------------------


def _project(state: StateVector, code) -> None:
    for sign, g in code.signed_generators():
        gp = state.copy()
        apply_pauli(gp, g)
        state.amplitudes = (state.amplitudes + sign * gp.amplitudes) / 2


def code_basis(code) -> list[np.ndarray]:
    """Orthonormal basis of the code space (2**k vectors).

    For the five-qubit code this is the S-presentation pair; otherwise vectors
    come from projecting computational basis states, with logical |1> taken as
    ``X^n |0_L>`` when that operator preserves the code space.
    """
    if getattr(code, "name", None) == "five" and code.n == 5:
        return [encode_logical(1, 0).amplitudes, encode_logical(0, 1).amplitudes]
    n = code.n
    dim = 1 << code.k
    basis: list[np.ndarray] = []
    for idx in range(1 << n):
        st = StateVector(range(n), np.eye(1, 1 << n, idx, dtype=complex).ravel())
        _project(st, code)
        v = st.amplitudes
        for b in basis:
            v = v - np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            basis.append(v / nv)
            if len(basis) == dim:
                break
        if code.k == 1 and len(basis) == 1:
            flipped = StateVector(range(n), basis[0].copy())
            apply_pauli(flipped, PauliOperator(n, (1 << n) - 1, 0))
            inner = abs(np.vdot(basis[0], flipped.amplitudes))
            check = flipped.copy()
            _project(check, code)
            if inner < 1e-8 and np.linalg.norm(check.amplitudes) > 1 - 1e-8:
                basis.append(flipped.amplitudes)
                break
    if len(basis) != dim:
        raise SimulationError(f"found {len(basis)} code vectors, expected {dim}")
    return basis


def encode_code_state(code, amplitudes) -> StateVector:
    """Encode logical ``amplitudes`` (length 2**k) into the code space."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    basis = code_basis(code)
    if amplitudes.size != len(basis):
        raise ValueError(f"need {len(basis)} logical amplitudes")
    amps = sum(a * b for a, b in zip(amplitudes, basis))
    return StateVector(range(code.n), amps / np.linalg.norm(amps))


def haar_qubit(rng) -> tuple[complex, complex]:
    """Haar-random single-qubit state ``(alpha, beta)``."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return complex(v[0]), complex(v[1])

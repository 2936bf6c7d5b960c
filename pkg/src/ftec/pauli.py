"""Pauli group on n qubits in the binary symplectic (x|z) representation.

An operator is ``i**phase * s_0 (x) s_1 (x) ... (x) s_{n-1}`` where each
``s_q`` is I, X, Y or Z chosen by the bit pair ``(x_q, z_q)``. Y is the usual
Hermitian matrix, ``Y = i X Z``.

Masks are packed into Python ints with qubit ``q`` at bit ``q``. The textual
notation ``X(11000)Z(00101)`` lists qubit 0 leftmost.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "PauliError",
    "PauliOperator",
    "multiply",
    "symplectic_product",
    "weight",
    "parse_notation",
    "format_notation",
]


class PauliError(ValueError):
    """Malformed notation or operators of mismatched length."""


_NOTATION = re.compile(r"^(?:i\^([0-3]))?X\(([01]+)\)Z\(([01]+)\)$")
_SPARSE_TERM = re.compile(r"([XYZ])(\d+)")

# (x, z) -> letter
_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTER.items()}


def _phase_exponent(x1: int, z1: int, x2: int, z2: int) -> int:
    # s(x1,z1) s(x2,z2) = i**e s(x1^x2, z1^z2)
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PauliError(f"qubit count must be >= 1, got {self.n}")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise PauliError("mask has bits beyond qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n)

    @classmethod
    def single(cls, kind: str, qubit: int, n: int) -> PauliOperator:
        """One-qubit operator ``kind`` in ``{"X", "Y", "Z"}`` acting on ``qubit``."""
        if kind not in ("X", "Y", "Z"):
            raise PauliError(f"unknown Pauli kind {kind!r}")
        if not 0 <= qubit < n:
            raise PauliError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _BITS[kind]
        return cls(n, xb << qubit, zb << qubit)

    @classmethod
    def from_bits(cls, xs, zs, phase: int = 0) -> PauliOperator:
        xs, zs = list(xs), list(zs)
        if len(xs) != len(zs):
            raise PauliError(f"X list has {len(xs)} bits but Z list has {len(zs)}")
        x = sum(int(b) << q for q, b in enumerate(xs))
        z = sum(int(b) << q for q, b in enumerate(zs))
        return cls(len(xs), x, z, phase)

    @classmethod
    def from_label(cls, label: str, n: int) -> PauliOperator:
        """Parse sparse labels such as ``"Y2"``, ``"X0Z3"`` or ``"I"``."""
        text = label.strip()
        if text in ("I", "", "none"):
            return cls(n)
        pos = 0
        p = cls(n)
        for m in _SPARSE_TERM.finditer(text):
            if m.start() != pos:
                break
            p = p * cls.single(m.group(1), int(m.group(2)), n)
            pos = m.end()
        if pos != len(text):
            raise PauliError(f"cannot parse Pauli label {label!r}")
        return p.without_phase()

    # -- accessors ----------------------------------------------------

    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> q) & 1 for q in range(self.n))

    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> q) & 1 for q in range(self.n))

    def factor(self, qubit: int) -> str:
        return _LETTER[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    def factors(self) -> Iterator[tuple[int, str]]:
        """Yield ``(qubit, letter)`` for every non-identity factor."""
        for q in range(self.n):
            letter = self.factor(q)
            if letter != "I":
                yield q, letter

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors())

    @property
    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def without_phase(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z)

    def key(self) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        """Ordering key (weight, x bits, z bits) used for tie-breaks."""
        return (weight(self), self.x_bits(), self.z_bits())

    def label(self) -> str:
        """Sparse label, e.g. ``"Y2"``; phase is dropped."""
        if self.is_identity():
            return "I"
        return "".join(f"{letter}{q}" for q, letter in self.factors())

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return multiply(self, other)

    def __str__(self) -> str:
        return format_notation(self)


def _check_same_n(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise PauliError(f"dimension mismatch: {a.n} vs {b.n} qubits")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Group product ``a @ b`` with exact phase tracking."""
    _check_same_n(a, b)
    e = a.phase + b.phase
    overlap = (a.x | a.z) & (b.x | b.z)
    q = 0
    while overlap:
        if overlap & 1:
            e += _phase_exponent(
                (a.x >> q) & 1, (a.z >> q) & 1, (b.x >> q) & 1, (b.z >> q) & 1
            )
        overlap >>= 1
        q += 1
    return PauliOperator(a.n, a.x ^ b.x, a.z ^ b.z, e)


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    """0 if ``a`` and ``b`` commute, 1 if they anticommute."""
    _check_same_n(a, b)
    return ((a.x & b.z) ^ (a.z & b.x)).bit_count() & 1


def weight(p: PauliOperator) -> int:
    return (p.x | p.z).bit_count()


def format_notation(p: PauliOperator) -> str:
    xs = "".join(str(b) for b in p.x_bits())
    zs = "".join(str(b) for b in p.z_bits())
    prefix = f"i^{p.phase}" if p.phase else ""
    return f"{prefix}X({xs})Z({zs})"


def parse_notation(text: str) -> PauliOperator:
    m = _NOTATION.match(text.strip())
    if m is None:
        raise PauliError(f"malformed Pauli notation {text!r}")
    phase, xs, zs = m.groups()
    if len(xs) != len(zs):
        raise PauliError(f"X list has {len(xs)} bits but Z list has {len(zs)}")
    return PauliOperator.from_bits(xs, zs, int(phase or 0))

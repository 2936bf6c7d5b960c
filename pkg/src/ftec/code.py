"""Stabilizer codes: validation, built-in fixtures and the syndrome oracle."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path

from .pauli import (
    PauliError,
    PauliOperator,
    format_notation,
    parse_notation,
    symplectic_product,
    weight,
)

__all__ = [
    "CodeError",
    "NonCommuting",
    "Dependent",
    "DimensionMismatch",
    "CodeFileError",
    "StabilizerCode",
    "Syndrome",
    "validate",
    "five_qubit_code",
    "five_qubit_shift",
    "TABLE1",
    "errors_up_to_weight",
    "steane_code",
    "syndrome_of_pauli",
    "syndrome_str",
    "distinct_syndrome_check",
    "DistinctReport",
    "in_stabilizer_span",
    "parse_code_file",
    "load_code",
    "format_code_file",
]

Syndrome = tuple[int, ...]


class CodeError(ValueError):
    pass


class NonCommuting(CodeError):
    def __init__(self, i: int, j: int):
        super().__init__(f"generators {i} and {j} anticommute")
        self.i, self.j = i, j


class Dependent(CodeError):
    def __init__(self, i: int):
        super().__init__(f"generator {i} is a product of earlier generators")
        self.i = i


class DimensionMismatch(CodeError):
    pass


class CodeFileError(CodeError):
    pass


def _packed(p: PauliOperator) -> int:
    return p.x | (p.z << p.n)


def _reduce(vec: int, basis: dict[int, int]) -> int:
    # basis maps leading bit -> row with that leading bit
    while vec:
        top = vec.bit_length() - 1
        row = basis.get(top)
        if row is None:
            return vec
        vec ^= row
    return 0


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    generators: tuple[PauliOperator, ...]
    signs: tuple[int, ...]
    t: int = 1
    name: str = "custom"
    _basis: dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    @property
    def g(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        return self.n - self.g

    def signed_generators(self) -> list[tuple[int, PauliOperator]]:
        return list(zip(self.signs, self.generators))

    def reordered(self, order) -> StabilizerCode:
        """Same code with generators permuted to ``order``."""
        return validate(
            [self.generators[i] for i in order],
            self.n,
            signs=[self.signs[i] for i in order],
            t=self.t,
            name=self.name,
        )


def validate(generators, n: int, signs=None, t: int = 1, name: str = "custom") -> StabilizerCode:
    """Check commutation and GF(2) independence, returning the code.

    Raises NonCommuting, Dependent or DimensionMismatch.
    """
    gens = tuple(p.without_phase() for p in generators)
    if signs is None:
        signs = (1,) * len(gens)
    signs = tuple(int(s) for s in signs)
    if len(signs) != len(gens):
        raise DimensionMismatch(f"{len(gens)} generators but {len(signs)} signs")
    if any(s not in (1, -1) for s in signs):
        raise CodeError(f"signs must be +1 or -1, got {signs}")
    for i, p in enumerate(gens):
        if p.n != n:
            raise DimensionMismatch(f"generator {i} has {p.n} qubits, expected {n}")
    for i, j in itertools.combinations(range(len(gens)), 2):
        if symplectic_product(gens[i], gens[j]):
            raise NonCommuting(i, j)
    basis: dict[int, int] = {}
    for i, p in enumerate(gens):
        r = _reduce(_packed(p), basis)
        if r == 0:
            raise Dependent(i)
        basis[r.bit_length() - 1] = r
    if len(gens) > n:
        raise DimensionMismatch(f"{len(gens)} generators exceed n={n}")
    return StabilizerCode(n, gens, signs, t, name, basis)


def in_stabilizer_span(code: StabilizerCode, p: PauliOperator) -> bool:
    """True if ``p`` equals a product of generators up to phase."""
    return _reduce(_packed(p), code._basis) == 0


def _cyclic_shift(p: PauliOperator, s: int) -> PauliOperator:
    n = p.n
    xs, zs = p.x_bits(), p.z_bits()
    return PauliOperator.from_bits(
        [xs[(q - s) % n] for q in range(n)], [zs[(q - s) % n] for q in range(n)]
    )


FIVE_QUBIT_SEED = "X(11000)Z(00101)"

# Cyclic shifts (in order) reproducing the (M3, M4, M0, M1) column order of the
# published syndrome table; found by search_generator_assignment() and pinned
# by a test. All signs are +1 for the codewords used by encode_logical().
FIVE_QUBIT_SHIFTS = (0, 1, 2, 3)
FIVE_QUBIT_SIGNS = (1, 1, 1, 1)


def five_qubit_code() -> StabilizerCode:
    seed = parse_notation(FIVE_QUBIT_SEED)
    gens = [_cyclic_shift(seed, s) for s in FIVE_QUBIT_SHIFTS]
    return validate(gens, 5, signs=FIVE_QUBIT_SIGNS, t=1, name="five")


def five_qubit_shift(s: int) -> PauliOperator:
    """The seed generator cyclically shifted right by ``s`` positions."""
    return _cyclic_shift(parse_notation(FIVE_QUBIT_SEED), s)


# Published syndrome table, columns (M3, M4, M0, M1) -> error process.
TABLE1 = {
    "0000": "I", "0001": "Z4", "0010": "X1", "0011": "Z3",
    "0100": "X3", "0101": "X0", "0110": "Z2", "0111": "Y3",
    "1000": "Z0", "1001": "X2", "1010": "X4", "1011": "Y4",
    "1100": "Z1", "1101": "Y0", "1110": "Y1", "1111": "Y2",
}


# parity-check matrix of the [7,4] Hamming code
HAMMING_CHECKS = ("0001111", "0110011", "1010101")


def steane_code() -> StabilizerCode:
    zero = "0" * 7
    xs = [parse_notation(f"X({row})Z({zero})") for row in HAMMING_CHECKS]
    zs = [parse_notation(f"X({zero})Z({row})") for row in HAMMING_CHECKS]
    return validate(xs + zs, 7, t=1, name="steane")


def syndrome_of_pauli(code: StabilizerCode, p: PauliOperator) -> Syndrome:
    """Bit j is 1 iff ``p`` anticommutes with generator j."""
    if p.n != code.n:
        raise DimensionMismatch(f"operator has {p.n} qubits, code has {code.n}")
    return tuple(symplectic_product(p, g) for g in code.generators)


def syndrome_str(s: Syndrome) -> str:
    return "".join(str(b) for b in s)


def errors_up_to_weight(n: int, t: int, kinds: str = "XYZ"):
    """All phase-free Paulis of weight <= t built from ``kinds``, identity first."""
    yield PauliOperator(n)
    for w in range(1, t + 1):
        for qubits in itertools.combinations(range(n), w):
            for letters in itertools.product(kinds, repeat=w):
                p = PauliOperator(n)
                for q, letter in zip(qubits, letters):
                    p = p * PauliOperator.single(letter, q, n)
                yield p.without_phase()


@dataclass
class DistinctReport:
    n_errors: int
    n_distinct: int
    collisions: list[tuple[str, str, str]]  # (syndrome, label a, label b)
    degenerate: list[tuple[str, str, str]]

    @property
    def ok(self) -> bool:
        return not self.collisions


def distinct_syndrome_check(code: StabilizerCode, kinds: str = "XYZ") -> DistinctReport:
    """Check that every error of weight <= t has its own syndrome.

    Shared syndromes between errors that differ by a stabilizer are recorded as
    degenerate rather than as collisions.
    """
    seen: dict[Syndrome, PauliOperator] = {}
    collisions, degenerate = [], []
    errors = list(errors_up_to_weight(code.n, code.t, kinds))
    for e in errors:
        s = syndrome_of_pauli(code, e)
        other = seen.get(s)
        if other is None:
            seen[s] = e
            continue
        entry = (syndrome_str(s), other.label(), e.label())
        if in_stabilizer_span(code, other * e):
            degenerate.append(entry)
        else:
            collisions.append(entry)
    return DistinctReport(len(errors), len(seen), collisions, degenerate)


# -- code files ------------------------------------------------------------

_HEADER = re.compile(r"^n=(\d+)\s+k=(\d+)\s+t=(\d+)$")


def parse_code_file(text: str, name: str = "file") -> StabilizerCode:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise CodeFileError("empty code file")
    m = _HEADER.match(lines[0])
    if m is None:
        raise CodeFileError(f"line 1: expected 'n=<int> k=<int> t=<int>', got {lines[0]!r}")
    n, k, t = (int(v) for v in m.groups())
    gens, signs = [], []
    for lineno, ln in enumerate(lines[1:], start=2):
        sign = 1
        if ln.startswith("-"):
            sign, ln = -1, ln[1:]
        try:
            gens.append(parse_notation(ln))
        except PauliError as exc:
            raise CodeFileError(f"generator line {lineno}: {exc}") from exc
        signs.append(sign)
    code = validate(gens, n, signs=signs, t=t, name=name)
    if code.k != k:
        raise CodeFileError(f"header says k={k} but {code.g} generators give k={code.k}")
    return code


def format_code_file(code: StabilizerCode) -> str:
    out = [f"n={code.n} k={code.k} t={code.t}"]
    for s, g in code.signed_generators():
        out.append(("-" if s < 0 else "") + format_notation(g))
    return "\n".join(out) + "\n"


def load_code(source: str) -> StabilizerCode:
    """Resolve ``five``, ``steane`` or ``file:PATH``."""
    if source == "five":
        return five_qubit_code()
    if source == "steane":
        return steane_code()
    if source.startswith("file:"):
        path = Path(source[5:])
        try:
            text = path.read_text()
        except OSError as exc:
            raise CodeFileError(f"cannot read {path}: {exc}") from exc
        return parse_code_file(text, name=path.stem)
    raise CodeFileError(f"unknown code source {source!r}")

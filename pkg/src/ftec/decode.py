"""Lookup-table decoding from syndromes to single corrections."""

from __future__ import annotations

from dataclasses import dataclass

from .code import (
    TABLE1,
    StabilizerCode,
    Syndrome,
    errors_up_to_weight,
    in_stabilizer_span,
    syndrome_of_pauli,
    syndrome_str,
)
from .pauli import PauliOperator
from .statevec import StateVector, apply_pauli

__all__ = [
    "AmbiguousSyndrome",
    "Uncorrectable",
    "SyndromeTable",
    "build_table",
    "decode_and_correct",
    "verify_table1",
    "Table1Report",
    "TABLE1",
]


class AmbiguousSyndrome(ValueError):
    pass


class Uncorrectable(LookupError):
    pass


@dataclass(frozen=True)
class SyndromeTable:
    code: StabilizerCode
    entries: dict[Syndrome, PauliOperator]

    def __getitem__(self, syndrome) -> PauliOperator:
        return self.entries[tuple(syndrome)]

    def __contains__(self, syndrome) -> bool:
        return tuple(syndrome) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def dump(self) -> str:
        """``bits -> label`` per line, sorted by syndrome."""
        return "\n".join(
            f"{syndrome_str(s)} -> {self.entries[s].label()}" for s in sorted(self.entries)
        )


def build_table(code: StabilizerCode, kinds: str = "XYZ") -> SyndromeTable:
    """Map each syndrome of a weight <= t error to its least representative.

    Raises AmbiguousSyndrome when two errors share a syndrome without
    differing by a stabilizer.
    """
    errors = sorted(errors_up_to_weight(code.n, code.t, kinds), key=PauliOperator.key)
    entries: dict[Syndrome, PauliOperator] = {}
    for e in errors:
        s = syndrome_of_pauli(code, e)
        prev = entries.get(s)
        if prev is None:
            entries[s] = e
        elif not in_stabilizer_span(code, prev * e):
            raise AmbiguousSyndrome(
                f"{prev.label()} and {e.label()} share syndrome {syndrome_str(s)}"
            )
    return SyndromeTable(code, entries)


def decode_and_correct(state: StateVector, table: SyndromeTable, syndrome) -> StateVector:
    syndrome = tuple(syndrome)
    if len(syndrome) != table.code.g:
        raise ValueError(f"syndrome has {len(syndrome)} bits, code has {table.code.g}")
    if syndrome not in table.entries:
        raise Uncorrectable(f"no correction for syndrome {syndrome_str(syndrome)}")
    out = state.copy()
    apply_pauli(out, table.entries[syndrome])
    return out


@dataclass
class Table1Report:
    matched: int
    mismatches: list[tuple[str, str, str]]  # (syndrome, expected, got)

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.matched == len(TABLE1)

    def lines(self) -> list[str]:
        out = [f"table1: {self.matched}/{len(TABLE1)} rows match"]
        out += [f"  {s}: expected {exp}, got {got}" for s, exp, got in self.mismatches]
        return out


def verify_table1(table: SyndromeTable) -> Table1Report:
    matched, bad = 0, []
    for key, expected in TABLE1.items():
        s = tuple(int(c) for c in key)
        got = table.entries[s].label() if s in table.entries else "-"
        if got == expected:
            matched += 1
        else:
            bad.append((key, expected, got))
    return Table1Report(matched, bad)

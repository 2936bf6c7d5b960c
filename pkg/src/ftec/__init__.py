"""Fault-tolerant syndrome extraction for stabilizer codes, simulated densely."""

__version__ = "0.1.0"

from .pauli import PauliOperator, multiply, symplectic_product, weight  # noqa: E402
from .code import StabilizerCode, five_qubit_code, steane_code, syndrome_of_pauli  # noqa: E402
from .statevec import StateVector, encode_logical, fidelity  # noqa: E402
from .extraction import compile_full, run_extraction, repeat_until_confirmed  # noqa: E402
from .decode import build_table, decode_and_correct  # noqa: E402

__all__ = [
    "PauliOperator",
    "multiply",
    "symplectic_product",
    "weight",
    "StabilizerCode",
    "five_qubit_code",
    "steane_code",
    "syndrome_of_pauli",
    "StateVector",
    "encode_logical",
    "fidelity",
    "compile_full",
    "run_extraction",
    "repeat_until_confirmed",
    "build_table",
    "decode_and_correct",
]

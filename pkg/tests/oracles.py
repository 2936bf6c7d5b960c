"""Independent reference computations for the test-suite.

Nothing here goes through the packed-bit algebra or the state-vector kernels;
operators are built as dense Kronecker products straight from their letters.
"""

import itertools
from functools import reduce

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
LETTERS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def letters_of(p):
    """Per-qubit letters read straight off the bit lists."""
    out = []
    for xb, zb in zip(p.x_bits(), p.z_bits()):
        out.append({(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(xb, zb)])
    return out


def dense(p):
    """Dense matrix of a PauliOperator; qubit 0 is the leftmost factor."""
    mats = [LETTERS[c] for c in letters_of(p)]
    return (1j ** p.phase) * reduce(np.kron, mats)


def dense_from_string(s, phase=0):
    return (1j ** phase) * reduce(np.kron, [LETTERS[c] for c in s])


def one_qubit_on(mat, qubit, m):
    mats = [I2] * m
    mats[qubit] = mat
    return reduce(np.kron, mats)


def cnot(control, target, m):
    dim = 1 << m
    u = np.zeros((dim, dim))
    for i in range(dim):
        bits = list(format(i, f"0{m}b"))
        if bits[control] == "1":
            bits[target] = "1" if bits[target] == "0" else "0"
        u[int("".join(bits), 2), i] = 1
    return u


def span_size(ops):
    """Number of distinct phase-free products of subsets of ``ops``."""
    seen = set()
    for r in range(len(ops) + 1):
        for sub in itertools.combinations(ops, r):
            x = z = 0
            for p in sub:
                x ^= p.x
                z ^= p.z
            seen.add((x, z))
    return len(seen)


def gf2_rank(ops):
    return int(np.log2(span_size(ops)))


def ket_vector(terms, m):
    v = np.zeros(1 << m, dtype=complex)
    for bits, a in terms.items():
        v[int(bits, 2)] += a
    return v / np.linalg.norm(v)

"""Single-qubit operators and basis conventions.

Each qubit is ordered ``(|1>, |0>)``: the excited state comes first and is
the +1 eigenstate of sigma_z. Multi-qubit kets are ordered lexicographically
with qubit 1 as the most significant label, so two qubits run
``|11>, |10>, |01>, |00>``. Lowering takes ``|1> -> |0>``.
"""

from functools import reduce

import numpy as np

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |1><0|
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |0><1|


def basis_index(*bits: int) -> int:
    """Position of ``|b1 b2 ...>`` in the excited-first product basis."""
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"qubit labels must be 0 or 1, got {b}")
        idx = 2 * idx + (1 - b)
    return idx


def ket(*bits: int) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[basis_index(*bits)] = 1.0
    return v


def embed(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """``op`` acting on qubit ``site`` (0-based) of an ``n_sites`` register."""
    factors = [op if k == site else IDENTITY for k in range(n_sites)]
    return reduce(np.kron, factors)

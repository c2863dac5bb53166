"""Outcoupling two-qubit entanglement into two single-mode cavities.

Each qubit exchanges its excitation with its own cavity through a resonant
Jaynes-Cummings interaction for a time ``tau``; only the product ``g tau``
matters. Cavities are truncated to ``{|1>, |0>}`` photons and ordered like
qubits (one photon first). The doubly excited ``|1_q, 1_c>`` level is left
fixed: starting from empty cavities it is never populated.
"""

from dataclasses import dataclass

import numpy as np

from .operators import basis_index, ket
from .states import DensityMatrix, partial_trace

__all__ = [
    "TransferSettings",
    "jc_rotation",
    "phase_correction",
    "transfer",
    "transmitted_elements",
]


@dataclass(frozen=True)
class TransferSettings:
    g_tau: float

    def __post_init__(self):
        if not np.isfinite(self.g_tau):
            raise ValueError(f"g_tau must be finite, got {self.g_tau}")


def _g_tau(settings):
    if isinstance(settings, TransferSettings):
        return settings.g_tau
    return TransferSettings(float(settings)).g_tau


def jc_rotation(g_tau) -> np.ndarray:
    """Unitary on one qubit x one cavity, basis ``|1,1>, |1,0>, |0,1>, |0,0>``.

    ``|1,0> -> cos|1,0> - i sin|0,1>`` and ``|0,1> -> -i sin|1,0> + cos|0,1>``;
    ``|0,0>`` and ``|1,1>`` are fixed.
    """
    gt = _g_tau(g_tau)
    c, s = np.cos(gt), np.sin(gt)
    u = np.eye(4, dtype=complex)
    i10, i01 = basis_index(1, 0), basis_index(0, 1)
    u[i10, i10] = c
    u[i01, i10] = -1j * s
    u[i10, i01] = -1j * s
    u[i01, i01] = c
    return u


def _two_pair_unitary(g_tau):
    # kron(U, U) acts on (q1, a, q2, b); reorder both sides to (q1, q2, a, b)
    u = np.kron(jc_rotation(g_tau), jc_rotation(g_tau)).reshape((2,) * 8)
    u = u.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    return u.reshape(16, 16)


def transfer(rho_qq: DensityMatrix, settings) -> DensityMatrix:
    """Photon-pair state after the qubits swap into empty cavities for ``g tau``.

    The joint register is ordered (qubit 1, qubit 2, cavity a, cavity b).
    """
    if rho_qq.dims != (2, 2):
        raise ValueError(f"two-qubit state required, got dims {rho_qq.dims}")
    vac = np.outer(ket(0, 0), ket(0, 0))
    joint = np.kron(rho_qq.matrix, vac)
    u = _two_pair_unitary(settings)
    out = DensityMatrix(u @ joint @ u.conj().T, (2, 2, 2, 2))
    return partial_trace(out, keep=(2, 3))


def transmitted_elements(rho_inf: DensityMatrix, settings) -> DensityMatrix:
    """Closed-form photon density matrix after a transfer of duration ``g tau``.

    Nine independent elements (``s = sin g tau``, ``c = cos g tau``; indices
    are photon / qubit labels)::

        t[11,11] = s^4 r[11,11]
        t[11,10] = -i s^3 r[11,10]
        t[11,01] = -i s^3 r[11,01]
        t[11,00] = -s^2 r[11,00]
        t[10,10] = s^2 r[10,10] + s^2 c^2 r[11,11]
        t[10,01] = s^2 r[10,01]
        t[10,00] = -i s r[10,00] - i s c^2 r[11,01]
        t[01,01] = s^2 r[01,01] + s^2 c^2 r[11,11]
        t[01,00] = -i s r[01,00] - i s c^2 r[11,10]

    The rest follow from Hermiticity and unit trace.
    """
    gt = _g_tau(settings)
    s, c = np.sin(gt), np.cos(gt)
    r = rho_inf.element
    t = {}
    t[(1, 1), (1, 1)] = s ** 4 * r((1, 1), (1, 1))
    t[(1, 1), (1, 0)] = -1j * s ** 3 * r((1, 1), (1, 0))
    t[(1, 1), (0, 1)] = -1j * s ** 3 * r((1, 1), (0, 1))
    t[(1, 1), (0, 0)] = -s ** 2 * r((1, 1), (0, 0))
    t[(1, 0), (1, 0)] = s ** 2 * r((1, 0), (1, 0)) + s ** 2 * c ** 2 * r((1, 1), (1, 1))
    t[(1, 0), (0, 1)] = s ** 2 * r((1, 0), (0, 1))
    t[(1, 0), (0, 0)] = -1j * s * r((1, 0), (0, 0)) - 1j * s * c ** 2 * r((1, 1), (0, 1))
    t[(0, 1), (0, 1)] = s ** 2 * r((0, 1), (0, 1)) + s ** 2 * c ** 2 * r((1, 1), (1, 1))
    t[(0, 1), (0, 0)] = -1j * s * r((0, 1), (0, 0)) - 1j * s * c ** 2 * r((1, 1), (1, 0))

    m = np.zeros((4, 4), dtype=complex)
    for (row, col), v in t.items():
        i, j = basis_index(*row), basis_index(*col)
        m[i, j] = v
        m[j, i] = np.conj(v)
    diag = [basis_index(*b) for b in ((1, 1), (1, 0), (0, 1))]
    i00 = basis_index(0, 0)
    m[i00, i00] = 1.0 - sum(m[i, i].real for i in diag)
    for i in diag:
        m[i, i] = m[i, i].real
    return DensityMatrix(m, (2, 2))


# |1> -> i|1> on each mode undoes the -i picked up by a full swap
_PHASE_GATE = np.kron(np.diag([1j, 1.0]), np.diag([1j, 1.0]))


def phase_correction(rho_photon: DensityMatrix) -> DensityMatrix:
    """Apply the local phase gates ``|1> -> i|1>`` on both photon modes."""
    if rho_photon.dims != (2, 2):
        raise ValueError(f"two-mode state required, got dims {rho_photon.dims}")
    u = _PHASE_GATE
    return DensityMatrix(u @ rho_photon.matrix @ u.conj().T, (2, 2))

"""Density matrices, named two-qubit families, and entanglement measures."""

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .numerics import as_matrix, eig_general_small, eig_hermitian
from .operators import SIGMA_X, SIGMA_Y, SIGMA_Z, ket

__all__ = [
    "BELL_LABELS",
    "DensityMatrix",
    "InvalidStateError",
    "PureState",
    "bell_state",
    "bloch_vector",
    "concurrence",
    "concurrence_signed",
    "egge_state",
    "fidelity",
    "is_x_form",
    "partial_trace",
    "product_state",
    "werner_state",
    "ye_state",
]

TRACE_TOL = 1e-10
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
NORM_TOL = 1e-12

BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")
_BELL_ALIASES = {
    "psi+": "psi+", "Ψ+": "psi+", "Ψ⁺": "psi+",
    "psi-": "psi-", "Ψ-": "psi-", "Ψ⁻": "psi-",
    "phi+": "phi+", "Φ+": "phi+", "Φ⁺": "phi+",
    "phi-": "phi-", "Φ-": "phi-", "Φ⁻": "phi-",
}

_SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)
_ZERO_FLOOR = 1e-14


class InvalidStateError(ValueError):
    """A matrix failed the density-matrix invariants."""


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace, Hermitian, positive semidefinite matrix on qubit registers.

    ``dims`` lists the subsystem dimensions; the matrix side is their product.
    Construction validates trace (1e-10), Hermiticity (1e-10) and the smallest
    eigenvalue (>= -1e-9).
    """

    matrix: np.ndarray
    dims: tuple = field(default=None)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        dims = self.dims
        if dims is None:
            n = m.shape[0]
            k = int(round(np.log2(n))) if n > 0 else 0
            if 2 ** k != n:
                raise InvalidStateError(f"cannot infer qubit dims for side {n}")
            dims = (2,) * k
        dims = tuple(int(d) for d in dims)
        side = prod(dims)
        if m.shape != (side, side):
            raise InvalidStateError(f"matrix shape {m.shape} does not match dims {dims}")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "dims", dims)
        self._check()

    def _check(self):
        m = self.matrix
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace {tr:.12g} differs from 1")
        herm = float(np.abs(m - m.conj().T).max())
        if herm > HERMITIAN_TOL:
            raise InvalidStateError(f"not Hermitian (max deviation {herm:.3e})")
        lowest = eig_hermitian(m, tol=HERMITIAN_TOL)[0][0]
        if lowest < -PSD_TOL:
            raise InvalidStateError(f"negative eigenvalue {lowest:.3e}")

    @property
    def n_qubits(self) -> int:
        return len(self.dims)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def eigenvalues(self) -> np.ndarray:
        return eig_hermitian(self.matrix)[0]

    def element(self, row_bits, col_bits) -> complex:
        """``<row_bits| rho |col_bits>`` with bit tuples such as ``(1, 0)``."""
        return complex(ket(*row_bits).conj() @ self.matrix @ ket(*col_bits))

    def __matmul__(self, other):
        return self.matrix @ (other.matrix if isinstance(other, DensityMatrix) else other)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims}, matrix=\n{np.array2string(self.matrix, precision=6)})"


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    dims: tuple = field(default=None)

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state norm {norm:.15g} differs from 1")
        dims = self.dims
        if dims is None:
            k = int(round(np.log2(v.size)))
            dims = (2,) * k
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", tuple(dims))

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


def _bell_vector(label):
    s = 1 / np.sqrt(2)
    if label == "psi+":
        return s * (ket(0, 1) + ket(1, 0))
    if label == "psi-":
        return s * (ket(0, 1) - ket(1, 0))
    if label == "phi+":
        return s * (ket(0, 0) + ket(1, 1))
    return s * (ket(0, 0) - ket(1, 1))


def bell_state(kind: str) -> PureState:
    """One of ``psi+``, ``psi-``, ``phi+``, ``phi-`` (Greek aliases accepted).

    ``psi+- = (|01> +- |10>)/sqrt2`` and ``phi+- = (|00> +- |11>)/sqrt2``.
    """
    try:
        label = _BELL_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown Bell state {kind!r}; expected one of {BELL_LABELS}") from None
    return PureState(_bell_vector(label), (2, 2))


def _projector(v):
    return np.outer(v, v.conj())


def _check_unit_interval(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


def werner_state(f: float) -> DensityMatrix:
    """``(1-f)/3 I + (4f-1)/3 |psi-><psi-|``; singlet fidelity squared is ``f``."""
    _check_unit_interval("f", f)
    m = (1 - f) / 3 * np.eye(4) + (4 * f - 1) / 3 * _projector(_bell_vector("psi-"))
    return DensityMatrix(m, (2, 2))


def ye_state(alpha: float) -> DensityMatrix:
    _check_unit_interval("alpha", alpha)
    m = (2 / 3) * _projector(_bell_vector("psi+"))
    m = m + (1 - alpha) / 3 * _projector(ket(1, 1)) + alpha / 3 * _projector(ket(0, 0))
    return DensityMatrix(m, (2, 2))


def egge_state(a: float) -> DensityMatrix:
    _check_unit_interval("a", a)
    m = (1 - a) * _projector(ket(1, 0)) + a * _projector(ket(0, 1))
    return DensityMatrix(m, (2, 2))


def product_state(*factors: DensityMatrix) -> DensityMatrix:
    m = np.ones((1, 1), dtype=complex)
    dims = ()
    for f in factors:
        m = np.kron(m, f.matrix)
        dims += f.dims
    return DensityMatrix(m, dims)


def _two_qubit_matrix(rho):
    if isinstance(rho, DensityMatrix):
        if rho.dims != (2, 2):
            raise ValueError(f"two-qubit state required, got dims {rho.dims}")
        return rho.matrix
    return DensityMatrix(rho, (2, 2)).matrix


def concurrence_signed(rho) -> float:
    """``l1 - l2 - l3 - l4`` before clamping at zero.

    The ``l_i`` are the descending square roots of the eigenvalues of
    ``rho @ rho_tilde`` with ``rho_tilde = (sy x sy) rho* (sy x sy)``.
    Eigenvalues down to -1e-9 are treated as numerical zeros, and so is
    anything within ``1e-14`` of zero: the square root would otherwise turn
    rounding noise of order 1e-17 into concurrence errors of order 1e-8.
    """
    m = _two_qubit_matrix(rho)
    tilde = _SPIN_FLIP @ m.conj() @ _SPIN_FLIP
    ev = eig_general_small(m @ tilde).real
    if ev.min() < -PSD_TOL:
        raise InvalidStateError(f"rho*rho_tilde has eigenvalue {ev.min():.3e} < 0")
    ev[np.abs(ev) <= _ZERO_FLOOR] = 0.0
    lam = np.sort(np.sqrt(np.clip(ev, 0.0, None)))[::-1]
    return float(lam[0] - lam[1] - lam[2] - lam[3])


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state, in [0, 1]."""
    return max(0.0, concurrence_signed(rho))


def fidelity(psi: PureState, rho: DensityMatrix) -> float:
    """``sqrt(<psi|rho|psi>)``."""
    if tuple(psi.dims) != tuple(rho.dims):
        raise ValueError(f"dimension mismatch: state {psi.dims} vs density matrix {rho.dims}")
    v = psi.amplitudes
    overlap = float(np.real(v.conj() @ rho.matrix @ v))
    return float(np.sqrt(max(overlap, 0.0)))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep`` (0-based)."""
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.dims)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"subsystem indices {keep} out of range for {n} subsystems")
    dims = rho.dims
    t = rho.matrix.reshape(dims + dims)
    # contract traced-out axes pairwise, highest index first so positions stay valid
    for k in reversed(range(n)):
        if k not in keep:
            t = np.trace(t, axis1=k, axis2=k + t.ndim // 2)
    kept_dims = tuple(dims[k] for k in keep)
    side = prod(kept_dims)
    return DensityMatrix(t.reshape(side, side), kept_dims)


def bloch_vector(rho: DensityMatrix) -> np.ndarray:
    """``(r_x, r_y, r_z)`` with ``r_k = Tr(rho sigma_k)``; ``|1><1|`` has ``r_z = +1``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)
    if m.shape != (2, 2):
        raise ValueError(f"single-qubit state required, got shape {m.shape}")
    return np.array([np.real(np.trace(m @ s)) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])


_X_MASK = ~(np.eye(4, dtype=bool) | np.fliplr(np.eye(4, dtype=bool)))


def is_x_form(rho, tol: float = 1e-12) -> bool:
    """True when everything off the diagonal and anti-diagonal is below ``tol``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"two-qubit matrix required, got shape {m.shape}")
    return bool(np.all(np.abs(m[_X_MASK]) < tol))
